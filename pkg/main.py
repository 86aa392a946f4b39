import sys
import argparse
import random
import numpy as np
import os.path as osp
from configs import CFG_default
from utils import setup_logger, restore_console, HalfedgeError
from subdivider import SubdivideRunner, DesignRunner
from experimenter import HodgeRunner, ExperimentRunner, StencilRunner

avail_commands = {
    'subdivide': SubdivideRunner,
    'hodge': HodgeRunner,
    'experiment': ExperimentRunner,
    'stencil': StencilRunner,
    'design': DesignRunner
}


def set_random_seed(seed):
    random.seed(seed)
    np.random.seed(seed)

def print_configs(args, cfg):
    
    print('*' * 20)
    print('Command-line overrides for %s' % args.command)
    print('*' * 20)
    
    for key in sorted(args.__dict__):
        value = args.__dict__[key]
        if key != 'command' and value is not None and value is not False and value != '':
            print('%s = %s' % (key, value))
    
    print('\n')
    print('*' * 20)
    print('Resolved configuration')
    print('*' * 20)
    print(cfg)

def overwrite_config(cfg, args):
    
    if args.run_name:
        cfg.RUN_NAME = args.run_name
    
    if args.out:
        cfg.OUTPUT_DIR = args.out
    
    if args.log_dir:
        cfg.LOG_DIR = args.log_dir
        
    if args.tb_dir:
        cfg.TB_DIR = args.tb_dir
        cfg.USE_TB = True
    
    if args.seed is not None:
        cfg.SEED = args.seed
    
    if args.level is not None:
        if args.level < 0:
            raise ValueError('Subdivision level must be non-negative, got %d' % args.level)
        cfg.SUBDIVISION.LEVEL = args.level
    
    if args.tol is not None:
        if args.tol <= 0:
            raise ValueError('Tolerance must be positive, got %g' % args.tol)
        cfg.TOL = args.tol
    
    if args.format:
        cfg.FORMAT = args.format
    
    if args.mesh:
        cfg.MESH.PATH = args.mesh
    
    if args.field:
        cfg.MESH.FIELD = args.field
    
    if args.dirfield:
        cfg.MESH.DIRFIELD = args.dirfield
    
    if args.matching:
        cfg.MESH.MATCHING = args.matching
    
    if args.constraints:
        cfg.MESH.CONSTRAINTS = args.constraints
    
    if args.command == 'experiment' and args.target:
        cfg.SEM.EXPERIMENT = args.target
    
    if args.command == 'stencil' and args.target:
        cfg.STENCIL.ACTION = args.target
        
def setup_config(args):
    
    cfg = CFG_default.clone()
    if args.config_file:
        cfg.merge_from_file(args.config_file)
    overwrite_config(cfg, args)
    cfg.freeze()
    return cfg

def main(args):
    """Run one command; returns 0 on success, 1 on errors and 2 when a residual gate fails."""
    
    try:
        cfg = setup_config(args)
    except (ValueError, KeyError, OSError) as err:
        print('Configuration error: %s' % err)
        return 1
    
    if cfg.SEED >= 0:
        print('Running with seed initialization..')
        set_random_seed(cfg.SEED)
    
    setup_logger(osp.join(cfg.LOG_DIR, cfg.RUN_NAME), args.command)
    try:
        return run_command(args, cfg)
    finally:
        restore_console()

def run_command(args, cfg):
    
    print_configs(args, cfg)
    try:
        runner = avail_commands[args.command](cfg)
        runner.run()
    except (HalfedgeError, OSError, ValueError) as err:
        print('%s: %s' % (type(err).__name__, err))
        return 1
    
    if not runner.passed:
        print('Residual gates failed at tolerance %.1e' % cfg.TOL)
        return 2
    return 0

def build_parser():
    
    parser = argparse.ArgumentParser()
    
    parser.add_argument('command', choices=sorted(avail_commands), help='Command to run')
    parser.add_argument('target', nargs='?', default=None, help='Experiment name or stencil action')
    parser.add_argument('--config-file', default=None, type=str, help='Path to the config file of the run')
    
    parser.add_argument('--run-name', type=str, default=None, help='Run name of the command')
    parser.add_argument('--out', '--output-dir', dest='out', type=str, default=None, help='Directory to save the outputs')
    parser.add_argument('--log-dir', type=str, default=None, help='Directory to save the logs')
    parser.add_argument('--tb-dir', type=str, default=None, help='Directory to save tensorboard logs')
    parser.add_argument('--seed', type=int, default=None, help='Seed')
    
    parser.add_argument('--level', type=int, default=None, help='Subdivision level')
    parser.add_argument('--tol', type=float, default=None, help='Residual gate tolerance')
    parser.add_argument('--format', type=str, default=None, choices=['json', 'csv'], help='Report format')
    
    parser.add_argument('--mesh', type=str, default=None, help='OBJ path or bundled mesh name')
    parser.add_argument('--field', type=str, default=None, help='Halfedge form file')
    parser.add_argument('--dirfield', type=str, default=None, help='Directional field file')
    parser.add_argument('--matching', type=str, default=None, help='Matching file')
    parser.add_argument('--constraints', type=str, default=None, help='Field design constraints file')
    return parser
    
    
if __name__ == '__main__':
    
    args = build_parser().parse_args()
    sys.exit(main(args=args))
