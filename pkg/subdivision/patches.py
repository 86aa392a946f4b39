import numpy as np
from mesh import build_mesh


def canonical_patch(valence, boundary=False, rings=4):
    """Planar cone patch of ``rings`` lattice rings around a vertex of the given valence.

    The patch is ``valence`` sectors of the regular triangular lattice glued
    around vertex 0 (a full turn for interior vertices, an open fan for
    boundary ones). Every sector is a linear image of the lattice, so
    midpoint refinement reproduces the patch at half scale. Returns the mesh
    and the lattice label of every vertex.
    """
    
    d, R = int(valence), int(rings)
    nrays = d if not boundary else d + 1
    span = 2 * np.pi / d if not boundary else np.pi / (d + 1)
    rays = np.stack([np.cos(span * np.arange(nrays)), np.sin(span * np.arange(nrays)), np.zeros(nrays)], axis=1)
    
    index, points, labels = {}, [], []
    
    def key(s, a, b):
        if a == 0 and b == 0:
            return 'c'
        if a == 0:
            if not boundary:
                return key((s + 1) % d, b, 0)
            if s + 1 < d:
                return key(s + 1, b, 0)
            return 'r%d:%d' % (d, b)
        return 's%d:%d,%d' % (s, a, b)
    
    def vid(s, a, b):
        k = key(s, a, b)
        if k not in index:
            index[k] = len(points)
            points.append(a * rays[s] + b * rays[s + 1 if boundary else (s + 1) % d])
            labels.append(k)
        return index[k]
    
    vid(0, 0, 0)
    faces = []
    for s in range(d):
        for a in range(R):
            for b in range(R - a):
                faces.append([vid(s, a, b), vid(s, a + 1, b), vid(s, a, b + 1)])
                if a + b <= R - 2:
                    faces.append([vid(s, a + 1, b), vid(s, a + 1, b + 1), vid(s, a, b + 1)])
    
    return build_mesh(np.array(points), faces), labels
