import numpy as np
import scipy.sparse as sp
from collections import namedtuple
from operators import SparseOperator
from utils.exceptions import BrokenNullSum, DimensionMismatch

# z1: oriented mean of the two canonical halfedge values, eps: half their difference (left - right)
MeanCurlForm = namedtuple('MeanCurlForm', ['z1', 'eps'])


def project_P(mesh):
    """P: face vectors to packed halfedge line integrals on local edges 0 and 1."""
    
    nf = mesh.num_faces
    e = mesh.geometry['edges']
    rows = np.repeat(np.stack([2 * np.arange(nf), 2 * np.arange(nf) + 1], axis=1), 3, axis=1)
    cols = np.tile(3 * np.arange(nf)[:, None] + np.arange(3)[None, :], (1, 2))
    vals = np.concatenate([e[:, 0], e[:, 1]], axis=1)
    mat = sp.csr_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=(2 * nf, 3 * nf))
    return SparseOperator(mat, 'Gamma', 'X', 'P')

def project_P_inv(mesh):
    """P^-1 = [-e1^perp, e0^perp] / 2A per face; P P^-1 = Id, P^-1 P projects to the tangent plane."""
    
    nf = mesh.num_faces
    geo = mesh.geometry
    n, e, dbl = geo['normals'], geo['edges'], 2 * geo['areas'][:, None]
    col0 = -np.cross(n, e[:, 1]) / dbl
    col1 = np.cross(n, e[:, 0]) / dbl
    rows = np.tile(3 * np.arange(nf)[:, None] + np.arange(3)[None, :], (1, 2))
    cols = np.repeat(np.stack([2 * np.arange(nf), 2 * np.arange(nf) + 1], axis=1), 3, axis=1)
    vals = np.concatenate([col0, col1], axis=1)
    mat = sp.csr_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=(3 * nf, 2 * nf))
    return SparseOperator(mat, 'X', 'Gamma', 'P^-1')

def unpack_U(mesh):
    """U: packed pair to the three face-oriented halfedge values (third = -g1 - g2)."""
    
    nf = mesh.num_faces
    block = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]))
    return SparseOperator(sp.kron(sp.identity(nf), block, format='csr'), 'H', 'Gamma', 'U')

def pack_U_inv(mesh):
    
    nf = mesh.num_faces
    block = sp.csr_matrix(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    return SparseOperator(sp.kron(sp.identity(nf), block, format='csr'), 'Gamma', 'H', 'U^-1')

def halfedge_edge_incidence(mesh, signed=True, interior_only=False, average=False):
    """``E x 3F`` map from face-oriented halfedge values to edges.

    ``signed`` converts to the canonical edge direction, ``average`` divides by
    the number of faces on the edge.
    """
    
    nf = mesh.num_faces
    e = mesh.face_edges.ravel()
    vals = mesh.face_signs.ravel().astype(float) if signed else np.ones(3 * nf)
    if interior_only:
        vals = vals * (~mesh.boundary_edges[e])
    if average:
        vals = vals / np.where(mesh.boundary_edges[e], 1.0, 2.0)
    mat = sp.csr_matrix((vals, (e, np.arange(3 * nf))), shape=(mesh.num_edges, 3 * nf))
    mat.eliminate_zeros()
    return mat

def d0_gamma(mesh):
    """Packed face-oriented differences of a vertex function."""
    
    nf = mesh.num_faces
    F = mesh.faces
    rows = np.repeat(np.arange(2 * nf), 2)
    cols = np.stack([F[:, 0], F[:, 1], F[:, 1], F[:, 2]], axis=1).ravel()
    vals = np.tile([-1.0, 1.0, -1.0, 1.0], nf)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(2 * nf, mesh.num_vertices))
    return SparseOperator(mat, 'Gamma', 'V', 'd0_Gamma')

def curl_gamma(mesh):
    """C_Gamma: sum of the two face-oriented halfedge values on interior edges, zero on the boundary."""
    
    H = halfedge_edge_incidence(mesh, signed=False, interior_only=True)
    mat = H @ unpack_U(mesh).matrix
    mat.eliminate_zeros()
    return SparseOperator(mat, 'E*', 'Gamma', 'C_Gamma')

def __mass_blocks__(mesh):
    
    c = mesh.cotangents
    return 0.5 * np.stack(
        [
            np.stack([c[:, 0] + c[:, 2], c[:, 2]], axis=1),
            np.stack([c[:, 2], c[:, 1] + c[:, 2]], axis=1)
        ],
        axis=1
    )

def mass_gamma(mesh):
    """Per-face 2x2 block 1/2 U^T diag(cot a0, cot a1, cot a2) U."""
    return SparseOperator(sp.block_diag(list(__mass_blocks__(mesh)), format='csr'), 'Gamma*', 'Gamma', 'M_Gamma')

def mass_gamma_inv(mesh):
    
    blocks = np.linalg.inv(__mass_blocks__(mesh))
    return SparseOperator(sp.block_diag(list(blocks), format='csr'), 'Gamma', 'Gamma*', 'M_Gamma^-1')

def block_inverse(M):
    """Inverse of a 2x2 block-diagonal sparse matrix."""
    
    n = M.shape[0] // 2
    dense = M.tocsr()
    blocks = np.zeros((n, 2, 2))
    idx = 2 * np.arange(n)
    for a in range(2):
        for b in range(2):
            blocks[:, a, b] = np.asarray(dense[idx + a, idx + b]).ravel()
    return sp.block_diag(list(np.linalg.inv(blocks)), format='csr')

def div_gamma(mesh):
    
    D = d0_gamma(mesh).T @ mass_gamma(mesh)
    D.row_space, D.name = 'V*', 'D_Gamma'
    return D

def null_sum_incidence(mesh):
    """Unsigned face/edge incidence with boundary columns zeroed, ``E* -> F*``."""
    
    rows = np.repeat(np.arange(mesh.num_faces), 3)
    mat = sp.csr_matrix((np.ones(3 * mesh.num_faces), (rows, mesh.face_edges.ravel())), shape=(mesh.num_faces, mesh.num_edges))
    mat = mat @ sp.diags((~mesh.boundary_edges).astype(float))
    mat.eliminate_zeros()
    return SparseOperator(mat, 'F*', 'E*', 'A')

def mean_curl_operator(mesh):
    """W: Gamma -> (z1, eps) stacked as ``2E``."""
    
    Z = halfedge_edge_incidence(mesh, signed=True, average=True) @ unpack_U(mesh).matrix
    mat = sp.vstack([Z, 0.5 * curl_gamma(mesh).matrix], format='csr')
    return SparseOperator(mat, 'Z1+E*', 'Gamma', 'W')

def mean_curl_operator_inv(mesh):
    """W^-1: face-oriented value on halfedge (f, i) is ``s z1 + eps`` (``s z1`` on boundary edges)."""
    
    nf, ne = mesh.num_faces, mesh.num_edges
    e = mesh.face_edges[:, :2].ravel()
    s = mesh.face_signs[:, :2].ravel().astype(float)
    rows = np.arange(2 * nf)
    interior = (~mesh.boundary_edges[e]).astype(float)
    mat = sp.csr_matrix(
        (np.concatenate([s, interior]), (np.concatenate([rows, rows]), np.concatenate([e, ne + e]))),
        shape=(2 * nf, 2 * ne)
    )
    mat.eliminate_zeros()
    return SparseOperator(mat, 'Gamma', 'Z1+E*', 'W^-1')

def __check_length__(values, expected, what):
    values = np.asarray(values, dtype=float).ravel()
    if values.size != expected:
        raise DimensionMismatch('%s has %d values, expected %d' % (what, values.size, expected))
    return values

def to_mean_curl(mesh, gamma):
    
    gamma = __check_length__(gamma, 2 * mesh.num_faces, 'Halfedge form')
    zeps = mean_curl_operator(mesh) @ gamma
    return MeanCurlForm(zeps[:mesh.num_edges], zeps[mesh.num_edges:])

def null_sum_residual(mesh, form):
    """Relative violation of d1 z1 + A eps = 0 (and of eps = 0 on the boundary)."""
    
    from operators import d1
    z1 = __check_length__(form.z1, mesh.num_edges, 'z1')
    eps = __check_length__(form.eps, mesh.num_edges, 'eps')
    r = d1(mesh) @ z1 + null_sum_incidence(mesh) @ eps
    scale = max(np.linalg.norm(z1) + np.linalg.norm(eps), np.finfo(float).tiny)
    return float((np.linalg.norm(r) + np.linalg.norm(eps[mesh.boundary_edges])) / scale)

def from_mean_curl(mesh, form, tol=1e-10):
    
    res = null_sum_residual(mesh, form)
    if res > tol:
        raise BrokenNullSum('Mean-curl form violates the null-sum constraint: residual %.3e > %.1e' % (res, tol))
    return mean_curl_operator_inv(mesh) @ np.concatenate([form.z1, form.eps])

def to_gamma(mesh, vectors):
    """Packed halfedge form of a face field, after projecting to the tangent planes.

    Returns ``(gamma, residual)``, the residual being the largest normal
    component that was discarded relative to the largest vector.
    """
    
    vectors = np.asarray(vectors, dtype=float).reshape(-1, 3)
    if vectors.shape[0] != mesh.num_faces:
        raise DimensionMismatch('Face field has %d vectors, mesh has %d faces' % (vectors.shape[0], mesh.num_faces))
    normal = (vectors * mesh.face_normals).sum(axis=1)
    scale = max(np.linalg.norm(vectors, axis=1).max(), np.finfo(float).tiny)
    gamma = project_P(mesh) @ vectors.ravel()
    return gamma, float(np.abs(normal).max() / scale)

def to_vectors(mesh, gamma):
    gamma = __check_length__(gamma, 2 * mesh.num_faces, 'Halfedge form')
    return (project_P_inv(mesh) @ gamma).reshape(-1, 3)

def dec_divergence_defect(mesh):
    """d0^T K with K = diag(1/2 (cot_left - cot_right)) on interior edges.

    ``D_Gamma gamma = d0^T M1 z1 + d0^T K eps`` for every gamma; the second
    term vanishes for curl-free forms.
    """
    
    from operators import d0
    cot_side = np.zeros((mesh.num_edges, 2))
    side = (mesh.face_signs.ravel() < 0).astype(int)
    cot_side[mesh.face_edges.ravel(), side] = mesh.cotangents.ravel()
    k = 0.5 * (cot_side[:, 0] - cot_side[:, 1]) * (~mesh.boundary_edges)
    mat = d0(mesh).matrix.T @ sp.diags(k)
    return SparseOperator(mat, 'V*', 'E*', 'd0^T K')
