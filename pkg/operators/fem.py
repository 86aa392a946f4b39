import numpy as np
import scipy.sparse as sp
from .sparse import SparseOperator, diagonal

# face fields are stacked per face: row 3 f + axis


def __rows__(nf):
    return 3 * np.arange(nf)[:, None] + np.arange(3)[None, :]

def gradient_vertex(mesh):
    """G_V: gradient of the piecewise-linear hat functions, ``V -> X``."""
    
    geo = mesh.geometry
    nf = mesh.num_faces
    rows, cols, vals = [], [], []
    for c in range(3):
        # hat of corner c: n x (opposite edge) / 2A, opposite edge is local edge c + 1
        g = np.cross(geo['normals'], geo['edges'][:, (c + 1) % 3]) / (2 * geo['areas'])[:, None]
        rows.append(__rows__(nf))
        cols.append(np.repeat(mesh.faces[:, c][:, None], 3, axis=1))
        vals.append(g)
    G = sp.coo_matrix(
        (np.concatenate(vals).ravel(), (np.concatenate(rows).ravel(), np.concatenate(cols).ravel())),
        shape=(3 * nf, mesh.num_vertices)
    )
    return SparseOperator(G, 'X', 'V', 'G_V')

def cogradient_edge(mesh):
    """G_E: gradient of the Crouzeix-Raviart edge functions, ``E -> X``."""
    
    geo = mesh.geometry
    nf = mesh.num_faces
    rows, cols, vals = [], [], []
    for i in range(3):
        g = -np.cross(geo['normals'], geo['edges'][:, i]) / geo['areas'][:, None]
        rows.append(__rows__(nf))
        cols.append(np.repeat(mesh.face_edges[:, i][:, None], 3, axis=1))
        vals.append(g)
    G = sp.coo_matrix(
        (np.concatenate(vals).ravel(), (np.concatenate(rows).ravel(), np.concatenate(cols).ravel())),
        shape=(3 * nf, mesh.num_edges)
    )
    return SparseOperator(G, 'X', 'E', 'G_E')

def rotation(mesh):
    """J: per-face rotation by 90 degrees, ``v -> n x v``."""
    
    n = mesh.face_normals
    nf = mesh.num_faces
    zero = np.zeros(nf)
    blocks = np.stack(
        [
            np.stack([zero, -n[:, 2], n[:, 1]], axis=1),
            np.stack([n[:, 2], zero, -n[:, 0]], axis=1),
            np.stack([-n[:, 1], n[:, 0], zero], axis=1)
        ],
        axis=1
    )
    return SparseOperator(sp.block_diag(list(blocks), format='csr'), 'X', 'X', 'J')

def curl(mesh):
    """C: non-conforming curl ``<v_left, e> - <v_right, e>``, ``X -> E*``.

    Boundary rows hold ``<v_f, e>`` of the single face.
    """
    
    geo = mesh.geometry
    nf = mesh.num_faces
    evec = mesh.edge_vectors
    rows, cols, vals = [], [], []
    for i in range(3):
        e = mesh.face_edges[:, i]
        # face-oriented edge vector is s * canonical vector
        coef = np.where(mesh.boundary_edges[e][:, None], evec[e], geo['edges'][:, i])
        rows.append(np.repeat(e[:, None], 3, axis=1))
        cols.append(__rows__(nf))
        vals.append(coef)
    C = sp.coo_matrix(
        (np.concatenate(vals).ravel(), (np.concatenate(rows).ravel(), np.concatenate(cols).ravel())),
        shape=(mesh.num_edges, 3 * nf)
    )
    return SparseOperator(C, 'E*', 'X', 'C')

def divergence(mesh):
    """D = G_V^T M_X, ``X -> V*``."""
    
    D = gradient_vertex(mesh).T @ mass_x(mesh)
    D.row_space, D.name = 'V*', 'D'
    return D

def mass_x(mesh):
    return diagonal(np.repeat(mesh.face_areas, 3), 'X', 'M_X')

def mass_face(mesh):
    return diagonal(mesh.face_areas, 'F', 'M_F')

def mass_vertex(mesh):
    """Mixed Voronoi vertex areas."""
    
    geo = mesh.geometry
    sq = (geo['edges'] ** 2).sum(axis=2)
    cot = geo['cot']
    areas = geo['areas']
    
    # corner c touches local edges c and c - 1
    voronoi = (sq * cot + np.roll(sq * cot, 1, axis=1)) / 8.0
    obtuse = geo['angles'] > 0.5 * np.pi
    any_obtuse = obtuse.any(axis=1)
    mixed = np.where(
        any_obtuse[:, None],
        np.where(obtuse, areas[:, None] / 2.0, areas[:, None] / 4.0),
        voronoi
    )
    m = np.zeros(mesh.num_vertices)
    np.add.at(m, mesh.faces.ravel(), mixed.ravel())
    return diagonal(m, 'V', 'M_V')

def mass_edge(mesh):
    """Diamond areas: a third of the summed incident face areas."""
    
    m = np.zeros(mesh.num_edges)
    np.add.at(m, mesh.face_edges.ravel(), np.repeat(mesh.face_areas, 3) / 3.0)
    return diagonal(m, 'E', 'M_E')

def mass_edge_dual(mesh):
    return diagonal(1.0 / mass_edge(mesh).diagonal(), 'E*', 'M_E*')

def laplacians(mesh):
    """Conforming and non-conforming stiffness matrices."""
    
    MX = mass_x(mesh)
    GV = gradient_vertex(mesh)
    GE = cogradient_edge(mesh)
    L_V = GV.T @ MX @ GV
    L_E = GE.T @ MX @ GE
    L_V.name, L_E.name = 'L_V', 'L_E'
    return {'L_V': L_V, 'L_E': L_E}

def hodge_laplacian_fem(mesh):
    """L_X = C^T M_E* C + D^T M_V^-1 D on face fields."""
    
    C = curl(mesh)
    D = divergence(mesh)
    MVinv = diagonal(1.0 / mass_vertex(mesh).diagonal(), 'V*', 'M_V^-1')
    L = C.T @ mass_edge_dual(mesh) @ C + D.T @ MVinv @ D
    L.row_space, L.col_space, L.name = 'X*', 'X', 'L_X'
    return L
