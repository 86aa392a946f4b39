import numpy as np
import scipy.sparse as sp
from .sparse import SparseOperator, diagonal
from .fem import mass_vertex, mass_face


def d0(mesh):
    """Vertex-to-edge coboundary, ``(d0 f)_e = f(head) - f(tail)``."""
    
    ne = mesh.num_edges
    rows = np.repeat(np.arange(ne), 2)
    vals = np.tile([-1.0, 1.0], ne)
    mat = sp.csr_matrix((vals, (rows, mesh.edges.ravel())), shape=(ne, mesh.num_vertices))
    return SparseOperator(mat, 'E', 'V', 'd0')

def d1(mesh):
    """Edge-to-face coboundary with the face orientation signs."""
    
    nf = mesh.num_faces
    rows = np.repeat(np.arange(nf), 3)
    mat = sp.csr_matrix(
        (mesh.face_signs.ravel().astype(float), (rows, mesh.face_edges.ravel())),
        shape=(nf, mesh.num_edges)
    )
    return SparseOperator(mat, 'F', 'E', 'd1')

def mass_one_form(mesh):
    """Cotangent weights: half the cotangents of the opposite angles."""
    
    w = np.zeros(mesh.num_edges)
    np.add.at(w, mesh.face_edges.ravel(), 0.5 * mesh.cotangents.ravel())
    return diagonal(w, 'E', 'M1')

def hodge_laplacian_dec(mesh):
    """L1 = d0 M_V^-1 d0^T M1 + M1^-1 d1^T M_F^-1 d1 on edge 1-forms."""
    
    D0, D1 = d0(mesh), d1(mesh)
    M1 = mass_one_form(mesh)
    M1inv = diagonal(1.0 / M1.diagonal(), 'E', 'M1^-1')
    MVinv = diagonal(1.0 / mass_vertex(mesh).diagonal(), 'V', 'M_V^-1')
    MFinv = diagonal(1.0 / mass_face(mesh).diagonal(), 'F', 'M_F^-1')
    L = D0 @ MVinv @ D0.T @ M1 + M1inv @ D1.T @ MFinv @ D1
    L.row_space, L.col_space, L.name = 'E', 'E', 'L1'
    return L
