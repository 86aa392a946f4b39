import numpy as np
import scipy.sparse as sp
from operators import SparseOperator, gradient_vertex, cogradient_edge, rotation, curl, mass_x
from halfedge import d0_gamma, curl_gamma, mean_curl_operator
from .matching import comb_offsets, ring_shift

# branched spaces are branch-major: entry k * n + i is copy k of base entry i


def vertex_offsets(mesh, matching, N):
    """Comb offset of every face corner, ``(F, 3)``, and the mask of fractional vertices."""
    
    off = np.zeros((mesh.num_faces, 3), dtype=np.int64)
    singular = np.zeros(mesh.num_vertices, dtype=bool)
    for v in range(mesh.num_vertices):
        if ring_shift(mesh, matching, v) % N:
            singular[v] = True
            continue
        for f, c in comb_offsets(mesh, matching, N, v).items():
            off[f, mesh.faces[f] == v] = c
    return off, singular

def __lift_vertex_cols__(mesh, mat, per_face, off, singular, N):
    """Face rows x vertex columns; face branch ``k`` reads vertex copy ``k - c_f(v)``."""
    
    A = sp.coo_matrix(mat)
    nr, nv = A.shape
    f = A.row // per_face
    slot = np.argmax(mesh.faces[f] == A.col[:, None], axis=1)
    keep = ~singular[A.col]
    r, c, x, f, slot = A.row[keep], A.col[keep], A.data[keep], f[keep], slot[keep]
    rows, cols = [], []
    for k in range(N):
        rows.append(k * nr + r)
        cols.append(np.mod(k - off[f, slot], N) * nv + c)
    return sp.csr_matrix((np.tile(x, N), (np.concatenate(rows), np.concatenate(cols))), shape=(N * nr, N * nv))

def __branch_of__(mesh, matching, e, face, k):
    """Branch of ``face`` matched to branch ``k`` of the left face of ``e``."""
    return np.where(mesh.edge_faces[e, 0] == face, k, k + matching[e])

def __lift_edge_rows__(mesh, mat, per_face, matching, N, blocks=1):
    """Edge rows x face columns; row copy ``k`` lives in the left face frame."""
    
    A = sp.coo_matrix(mat)
    nr, nc = A.shape
    ne = mesh.num_edges
    e = A.row % ne
    block = A.row // ne
    face = A.col // per_face
    rows, cols = [], []
    for k in range(N):
        rows.append(block * N * ne + k * ne + e)
        cols.append(np.mod(__branch_of__(mesh, matching, e, face, k), N) * nc + A.col)
    return sp.csr_matrix((np.tile(A.data, N), (np.concatenate(rows), np.concatenate(cols))), shape=(N * nr, N * nc))

def __lift_edge_cols__(mesh, mat, per_face, matching, N):
    """Face rows x edge columns; face branch ``j`` reads edge copy ``j`` or ``j - I_e``."""
    
    A = sp.coo_matrix(mat)
    nr, ne = A.shape
    face = A.row // per_face
    right = mesh.edge_faces[A.col, 0] != face
    rows, cols = [], []
    for j in range(N):
        rows.append(j * nr + A.row)
        cols.append(np.mod(j - np.where(right, matching[A.col], 0), N) * ne + A.col)
    return sp.csr_matrix((np.tile(A.data, N), (np.concatenate(rows), np.concatenate(cols))), shape=(N * nr, N * ne))

def branched_operators(mesh, matching, N):
    """Differential operators acting on all N branches at once.

    Conforming operators comb the ring of each vertex; their columns at
    fractional singularities are zero and the vertices are listed under
    ``singular``. Non-conforming operators only compare the two faces of an
    edge through its matching.
    """
    
    matching = np.mod(np.asarray(matching, dtype=np.int64), N)
    off, singular = vertex_offsets(mesh, matching, N)
    
    G = __lift_vertex_cols__(mesh, gradient_vertex(mesh).matrix, 3, off, singular, N)
    D0 = __lift_vertex_cols__(mesh, d0_gamma(mesh).matrix, 2, off, singular, N)
    MX = sp.kron(sp.identity(N), mass_x(mesh).matrix, format='csr')
    C = __lift_edge_rows__(mesh, curl(mesh).matrix, 3, matching, N)
    CG = __lift_edge_rows__(mesh, curl_gamma(mesh).matrix, 2, matching, N)
    W = __lift_edge_rows__(mesh, mean_curl_operator(mesh).matrix, 2, matching, N)
    GE = __lift_edge_cols__(mesh, cogradient_edge(mesh).matrix, 3, matching, N)
    J = sp.kron(sp.identity(N), rotation(mesh).matrix, format='csr')
    
    return {
        'G': SparseOperator(G, 'X^N', 'V^N', 'G^N'),
        'D': SparseOperator((G.T @ MX).tocsr(), 'V*^N', 'X^N', 'D^N'),
        'C': SparseOperator(C, 'E*^N', 'X^N', 'C^N'),
        'G_E': SparseOperator(GE, 'X^N', 'E^N', 'G_E^N'),
        'J': SparseOperator(J, 'X^N', 'X^N', 'J^N'),
        'd0_gamma': SparseOperator(D0, 'Gamma^N', 'V^N', 'd0_Gamma^N'),
        'C_gamma': SparseOperator(CG, 'E*^N', 'Gamma^N', 'C_Gamma^N'),
        'W': SparseOperator(W, 'Z1+E*^N', 'Gamma^N', 'W^N'),
        'singular': np.flatnonzero(singular).tolist()
    }
