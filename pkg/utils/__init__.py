from .logging import setup_logger, restore_console, log_path, ConsoleLogger, TensorBoardLogger
from .report import write_report, print_table, relative_residual, to_builtin
from .exceptions import (
    HalfedgeError,
    NonManifold,
    InconsistentOrientation,
    DegenerateFace,
    BrokenNullSum,
    BoundaryMeshUnsupported,
    DimensionMismatch,
    SolverFailure,
    EigensolverFailure,
    InfeasibleConstraints,
    UnresolvedDOF,
    EmptyConstraints,
    SingularVertex,
    ParseError
)
