import os
import os.path as osp
import numpy as np
from .mesh import build_mesh
from utils.exceptions import ParseError


def read_obj(path):
    """Vertex positions and triangles of a Wavefront OBJ file.

    Only ``v`` and ``f`` records are read; ``f`` entries may carry texture and
    normal indices (``i/j/k``) and negative (relative) indices. Polygons are
    fanned into triangles.
    """
    
    vertices, faces = [], []
    with open(path, 'r') as f:
        for line_no, line in enumerate(f, start=1):
            tokens = line.split('#', 1)[0].split()
            if not tokens:
                continue
            if tokens[0] == 'v':
                try:
                    vertices.append([float(t) for t in tokens[1:4]])
                except ValueError:
                    raise ParseError(path, line_no, 'bad vertex record')
                if len(vertices[-1]) != 3:
                    raise ParseError(path, line_no, 'vertex needs 3 coordinates')
            elif tokens[0] == 'f':
                try:
                    idx = [int(t.split('/')[0]) for t in tokens[1:]]
                except ValueError:
                    raise ParseError(path, line_no, 'bad face record')
                if len(idx) < 3:
                    raise ParseError(path, line_no, 'face needs at least 3 vertices')
                idx = [i - 1 if i > 0 else len(vertices) + i for i in idx]
                for k in range(1, len(idx) - 1):
                    faces.append([idx[0], idx[k], idx[k + 1]])
    
    return np.array(vertices, dtype=float).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3)

def load_obj(path, area_tol=1e-12):
    vertices, faces = read_obj(path)
    return build_mesh(vertices, faces, area_tol=area_tol)

def save_obj(path, mesh):
    
    if osp.dirname(path) and not osp.exists(osp.dirname(path)):
        os.makedirs(osp.dirname(path))
    
    with open(path, 'w') as f:
        for p in mesh.vertices:
            f.write('v %.17g %.17g %.17g\n' % tuple(p))
        for t in mesh.faces + 1:
            f.write('f %d %d %d\n' % tuple(t))
    return path
