import numpy as np
from collections import namedtuple
from .mesh import build_mesh

RefinementMaps = namedtuple(
    'RefinementMaps',
    [
        'even_vertices',    # V0: coarse vertex -> fine vertex
        'odd_vertices',     # E0: coarse edge -> fine midpoint vertex
        'even_edges',       # E0 x 2: coarse edge -> its two halves
        'odd_edges',        # F0 x 3: interior edge of face f opposite corner c
        'faces',            # F0 x 4: corner children 0..2, center child 3
    ]
)


def quadrisect(mesh):
    """1-to-4 midpoint refinement.

    Even vertices keep their index, the midpoint of coarse edge ``e`` is
    vertex ``V0 + e``. Fine faces ``4f + c`` are the corner children of face
    ``f`` (``c = 3`` is the center). Fine edges ``2e`` and ``2e + 1`` halve
    coarse edge ``e`` keeping its direction; ``2E0 + 3f + c`` is the interior
    edge of face ``f`` opposite corner ``c``. Positions are midpoints.
    """
    
    nv, ne, nf = mesh.num_vertices, mesh.num_edges, mesh.num_faces
    
    mids = 0.5 * (mesh.vertices[mesh.edges[:, 0]] + mesh.vertices[mesh.edges[:, 1]])
    vertices = np.concatenate([mesh.vertices, mids], axis=0)
    
    i, j, k = mesh.faces.T
    m0, m1, m2 = (nv + mesh.face_edges).T
    faces = np.stack(
        [
            np.stack([i, m0, m2], axis=1),
            np.stack([m0, j, m1], axis=1),
            np.stack([m2, m1, k], axis=1),
            np.stack([m0, m1, m2], axis=1)
        ],
        axis=1
    ).reshape(-1, 3)
    
    odd_vertices = nv + np.arange(ne)
    halves = np.stack(
        [
            np.stack([mesh.edges[:, 0], odd_vertices], axis=1),
            np.stack([odd_vertices, mesh.edges[:, 1]], axis=1)
        ],
        axis=1
    ).reshape(-1, 2)
    inner = np.stack(
        [
            np.stack([m0, m2], axis=1),
            np.stack([m0, m1], axis=1),
            np.stack([m1, m2], axis=1)
        ],
        axis=1
    ).reshape(-1, 2)
    inner = np.sort(inner, axis=1)
    edges = np.concatenate([halves, inner], axis=0)
    
    fine = build_mesh(vertices, faces, edges=edges, area_tol=0.0)
    maps = RefinementMaps(
        even_vertices=np.arange(nv),
        odd_vertices=odd_vertices,
        even_edges=np.arange(2 * ne).reshape(ne, 2),
        odd_edges=2 * ne + np.arange(3 * nf).reshape(nf, 3),
        faces=np.arange(4 * nf).reshape(nf, 4)
    )
    return fine, maps
