import os
import sys
import os.path as osp
import time


class TensorBoardLogger:
    """Scalar curves of the experiment records (error per level, eigenvalue per index)."""

    def __init__(self, fpath=None, filename=''):

        # torch is only needed when scalars are written
        from torch.utils.tensorboard import SummaryWriter

        logdir = osp.join(fpath, filename)
        if not osp.exists(logdir):
            os.makedirs(logdir)
        self.writer = SummaryWriter(logdir)

    def update(self, tb_dict, it):

        for key, value in tb_dict.items():
            if value is None or value != value:
                continue
            self.writer.add_scalar(key, value, it)

    def close(self):
        self.writer.flush()
        self.writer.close()


class ConsoleLogger:
    """Tee of the console into a log file next to the run outputs.

    Every command prints its configuration, the per-level residuals and the
    final report; the log keeps a copy of all of it.

    Args:
        fpath (str): path of the log file.
        console: stream echoed to, ``sys.stdout`` by default.
    Examples::
       >>> logger = setup_logger('logs/torus-hodge', 'hodge')
       >>> print('written to the console and to', logger.fpath)
       >>> restore_console()
    """

    def __init__(self, fpath=None, console=None):

        self.console = console if console is not None else sys.stdout
        self.fpath = fpath
        self.file = None
        if fpath is not None:
            if osp.dirname(fpath) and not osp.exists(osp.dirname(fpath)):
                os.makedirs(osp.dirname(fpath))
            self.file = open(fpath, 'w')

    def __del__(self):
        self.close()

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

    def write(self, msg):
        self.console.write(msg)
        if self.file is not None and not self.file.closed:
            self.file.write(msg)

    def flush(self):
        self.console.flush()
        if self.file is not None and not self.file.closed:
            self.file.flush()
            os.fsync(self.file.fileno())

    def close(self):
        if self.file is not None and not self.file.closed:
            self.file.close()


def log_path(output, command=None):
    """``<output>/<command>.log-<timestamp>``; an explicit ``.txt``/``.log`` path is kept as given."""

    if output.endswith('.txt') or output.endswith('.log'):
        return output
    name = '%s.log' % command if command else 'log.txt'
    # existing logs of earlier runs stay untouched
    return osp.join(output, name) + time.strftime('-%Y-%m-%d-%H-%M-%S')

def setup_logger(output=None, command=None):
    """Route ``sys.stdout`` through a ``ConsoleLogger``; a previous one is closed, not nested."""

    if output is None:
        return None
    if not output.endswith('.txt') and not output.endswith('.log') and not osp.exists(output):
        os.makedirs(output)

    console = sys.stdout
    if isinstance(console, ConsoleLogger):
        console.close()
        console = console.console
    sys.stdout = ConsoleLogger(log_path(output, command), console)
    return sys.stdout

def restore_console():

    if isinstance(sys.stdout, ConsoleLogger):
        logger = sys.stdout
        sys.stdout = logger.console
        logger.close()
