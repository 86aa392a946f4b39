from .config import CFG as CFG_default
