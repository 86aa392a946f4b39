import os
import os.path as osp
import numpy as np
from .forms import MeanCurlForm
from utils.exceptions import ParseError, DimensionMismatch


def __read_table__(path, tag, width):
    
    with open(path, 'r') as f:
        lines = [(i, l.split()) for i, l in enumerate(f, start=1)]
    lines = [(i, t) for i, t in lines if t and not t[0].startswith('#')]
    if not lines or lines[0][1][0] != tag or len(lines[0][1]) != 2:
        raise ParseError(path, lines[0][0] if lines else 1, 'expected header "%s <count>"' % tag)
    try:
        count = int(lines[0][1][1])
    except ValueError:
        raise ParseError(path, lines[0][0], 'bad count')
    rows = []
    for i, tokens in lines[1:]:
        if len(tokens) != width:
            raise ParseError(path, i, 'expected %d values, found %d' % (width, len(tokens)))
        try:
            rows.append([float(t) for t in tokens])
        except ValueError:
            raise ParseError(path, i, 'not a number')
    if len(rows) != count:
        raise ParseError(path, lines[-1][0], 'header announces %d rows, found %d' % (count, len(rows)))
    return np.array(rows, dtype=float).reshape(count, width)

def __write_table__(path, tag, table):
    
    if osp.dirname(path) and not osp.exists(osp.dirname(path)):
        os.makedirs(osp.dirname(path))
    with open(path, 'w') as f:
        f.write('%s %d\n' % (tag, table.shape[0]))
        for row in table:
            f.write(' '.join('%.17g' % v for v in row) + '\n')
    return path

def read_gamma(path, mesh=None):
    
    table = __read_table__(path, 'GAMMA', 2)
    if mesh is not None and table.shape[0] != mesh.num_faces:
        raise DimensionMismatch('%s holds %d faces, mesh has %d' % (path, table.shape[0], mesh.num_faces))
    return table.ravel()

def write_gamma(path, gamma):
    return __write_table__(path, 'GAMMA', np.asarray(gamma, dtype=float).reshape(-1, 2))

def read_mean_curl(path, mesh=None):
    
    table = __read_table__(path, 'MEANCURL', 2)
    if mesh is not None and table.shape[0] != mesh.num_edges:
        raise DimensionMismatch('%s holds %d edges, mesh has %d' % (path, table.shape[0], mesh.num_edges))
    return MeanCurlForm(table[:, 0].copy(), table[:, 1].copy())

def write_mean_curl(path, form):
    return __write_table__(path, 'MEANCURL', np.stack([form.z1, form.eps], axis=1))
