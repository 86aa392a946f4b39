from yacs.config import CfgNode as CN

CFG = CN()

CFG.RUN_NAME = 'icosphere_subdivide'
CFG.OUTPUT_DIR = './outputs'
CFG.SEED = -1
CFG.LOG_DIR = './logs'
CFG.FORMAT = 'json'
CFG.TOL = 1e-8

CFG.USE_TB = False
CFG.TB_DIR = 'tensorboard_runs/icosphere_run_0'

CFG.MESH = CN()
CFG.MESH.PATH = 'icosphere:1'
CFG.MESH.FIELD = ''
CFG.MESH.DIRFIELD = ''
CFG.MESH.MATCHING = ''
CFG.MESH.CONSTRAINTS = ''

CFG.OPERATORS = CN()
CFG.OPERATORS.DEGENERATE_AREA = 1e-12

CFG.SUBDIVISION = CN()
CFG.SUBDIVISION.LEVEL = 1
CFG.SUBDIVISION.MAX_VALENCE = 12
CFG.SUBDIVISION.TIE_BREAK = 'positivity'
CFG.SUBDIVISION.VALENCE4_Z = 1.0 / 32.0
CFG.SUBDIVISION.RESIDUAL_TOL = 1e-10
CFG.SUBDIVISION.GEOMETRY = 'loop'

CFG.SEM = CN()
CFG.SEM.NUM_EIGS = 20
CFG.SEM.DENSE_LIMIT = 4000
CFG.SEM.HARMONIC_TOL = 1e-8
CFG.SEM.NULL_SUM_TOL = 1e-10
CFG.SEM.FIELD = 'smooth'
CFG.SEM.EXPERIMENT = 'projection-error'

CFG.BRANCHED = CN()
CFG.BRANCHED.N = 0  # 0 takes N from the DIRFIELD header

CFG.STENCIL = CN()
CFG.STENCIL.ACTION = 'check'
CFG.STENCIL.PATCH_RINGS = 4
