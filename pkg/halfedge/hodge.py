import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from collections import namedtuple
from operators import SparseOperator, as_matrix, mass_vertex, mass_edge, mass_edge_dual
from .forms import d0_gamma, curl_gamma, mass_gamma, mass_gamma_inv
from utils.exceptions import BoundaryMeshUnsupported, SolverFailure, EigensolverFailure

HodgeDecomposition = namedtuple('HodgeDecomposition', ['f', 'psi', 'eps', 'exact', 'coexact', 'harmonic', 'report'])


def hodge_laplacian_gamma(mesh):
    """Pointwise Gamma Hodge Laplacian d0 M_V^-1 D_Gamma + M_Gamma^-1 C^T M_E* C."""
    
    D0, C, M = d0_gamma(mesh), curl_gamma(mesh), mass_gamma(mesh)
    MVinv = SparseOperator(sp.diags(1.0 / mass_vertex(mesh).diagonal()), 'V', 'V*')
    L = D0 @ MVinv @ D0.T @ M + mass_gamma_inv(mesh) @ C.T @ mass_edge_dual(mesh) @ C
    L.row_space, L.col_space, L.name = 'Gamma', 'Gamma', 'L_Gamma'
    return L

def dual_laplacian_gamma(mesh):
    """C_Gamma M_Gamma^-1 C_Gamma^T, the non-conforming Laplacian in Gamma."""
    
    C = curl_gamma(mesh)
    L = C @ mass_gamma_inv(mesh) @ C.T
    L.row_space, L.col_space, L.name = 'E*', 'E', 'L_E'
    return L

def solve_exact_potential(L, rhs, weights=None):
    """Solve ``L f = rhs`` for a Laplacian with constant kernel (first vertex pinned, then mean-free)."""
    
    L = sp.csc_matrix(as_matrix(L))
    f = np.zeros(L.shape[0])
    try:
        f[1:] = spla.splu(L[1:, 1:].tocsc()).solve(np.asarray(rhs, dtype=float)[1:])
    except RuntimeError as err:
        raise SolverFailure('Vertex Laplacian solve failed: %s' % err)
    w = np.ones_like(f) if weights is None else np.asarray(weights)
    return f - np.dot(w, f) / w.sum()

def solve_coexact_part(M, C, gamma):
    """Coexact part ``M^-1 C^T psi`` with ``C M^-1 C^T psi = C gamma``.

    Solved as the symmetric saddle system in ``(x, psi)`` so that a
    non-diagonal mass never has to be inverted; the constant kernel of
    ``C^T`` on closed meshes is removed by dropping the first edge.
    """
    
    M = sp.csr_matrix(as_matrix(M))
    C = sp.csr_matrix(as_matrix(C))
    n = M.shape[0]
    Cr = C[1:]
    K = sp.bmat([[M, -Cr.T], [-Cr, None]], format='csc')
    rhs = np.concatenate([np.zeros(n), -(Cr @ gamma)])
    try:
        sol = spla.splu(K).solve(rhs)
    except RuntimeError as err:
        raise SolverFailure('Coexact saddle solve failed: %s' % err)
    psi = np.concatenate([[0.0], sol[n:]])
    return sol[:n], psi - psi.mean()

def __mnorm__(M, x):
    return float(np.sqrt(max(x @ (M @ x), 0.0)))

def __orth__(M, a, b):
    na, nb = __mnorm__(M, a), __mnorm__(M, b)
    if na < 1e-300 or nb < 1e-300:
        return 0.0
    return float(abs(a @ (M @ b)) / (na * nb))

def decompose(gamma, D0, C, M, MV):
    """Exact / coexact / harmonic split of ``gamma`` against the mass ``M``.

    ``D0`` and ``C`` are the Gamma gradient and curl, ``MV`` the vertex mass
    used to fix the additive constant of the potential.
    """
    
    D0, C, M = as_matrix(D0), as_matrix(C), sp.csr_matrix(as_matrix(M))
    gamma = np.asarray(gamma, dtype=float)
    
    L = (D0.T @ M @ D0).tocsc()
    f = solve_exact_potential(L, D0.T @ (M @ gamma), as_matrix(MV).diagonal())
    exact = D0 @ f
    coexact, psi = solve_coexact_part(M, C, gamma)
    harmonic = gamma - exact - coexact
    
    total = __mnorm__(M, gamma) or 1.0
    report = {
        'norm/total': total,
        'norm/exact': __mnorm__(M, exact),
        'norm/coexact': __mnorm__(M, coexact),
        'norm/harmonic': __mnorm__(M, harmonic),
        'residual/reconstruction': float(np.linalg.norm(exact + coexact + harmonic - gamma) / max(np.linalg.norm(gamma), 1e-300)),
        'residual/harmonic_div': float(np.linalg.norm(D0.T @ (M @ harmonic)) / max(np.linalg.norm(D0.T @ (M @ gamma)), total)),
        'residual/harmonic_curl': float(np.linalg.norm(C @ harmonic) / max(np.linalg.norm(C @ gamma), total)),
        'orthogonality/exact_coexact': __orth__(M, exact, coexact),
        'orthogonality/exact_harmonic': __orth__(M, exact, harmonic),
        'orthogonality/coexact_harmonic': __orth__(M, coexact, harmonic)
    }
    return HodgeDecomposition(f, psi, 0.5 * (C @ gamma), exact, coexact, harmonic, report)

def harmonic_threshold(scale, top, tol=1e-8):
    """Cut-off below which Hodge eigenvalues count as harmonic.

    ``tol`` is relative to a typical eigenvalue ``scale`` rather than to
    ``top = lam_max``, which an ill-conditioned mass inflates; eigenvalues
    within the round-off floor ``100 eps lam_max`` are zero.
    """
    return max(tol * abs(scale), 100 * np.finfo(float).eps * abs(top))

def harmonic_space(D0, C, M, MV, ME, tol=1e-8, dense_limit=4000, num_eigs=8, seed=0):
    """Numerical kernel of the Gamma Hodge Laplacian.

    Generalized problem ``K x = lam M x`` with
    ``K = M D0 MV^-1 D0^T M + C^T ME^-1 C``. Eigenvalues below
    ``harmonic_threshold`` are counted as harmonic, scaled by the median
    eigenvalue (dense) or the largest of the lowest ``num_eigs`` (sparse).
    Dense for small problems, shift-invert Lanczos for large ones with
    diagonal ``MV`` and ``ME``.
    Returns ``(dim, basis, eigenvalues)``; the basis is M-orthonormal.
    """
    
    D0, C, M = as_matrix(D0), as_matrix(C), sp.csr_matrix(as_matrix(M))
    MV, ME = sp.csr_matrix(as_matrix(MV)), sp.csr_matrix(as_matrix(ME))
    n = M.shape[0]
    
    if n <= dense_limit:
        Md = M.toarray()
        B = (D0.T @ M).toarray()
        Cd = C.toarray()
        K = B.T @ np.linalg.solve(MV.toarray(), B) + Cd.T @ np.linalg.solve(ME.toarray(), Cd)
        K = 0.5 * (K + K.T)
        try:
            vals, vecs = sla.eigh(K, Md)
        except (np.linalg.LinAlgError, ValueError) as err:
            raise EigensolverFailure('Dense Hodge eigenproblem failed: %s' % err)
        keep = vals < harmonic_threshold(np.median(np.abs(vals)), vals[-1], tol)
        return int(keep.sum()), vecs[:, keep], vals
    
    if (MV - sp.diags(MV.diagonal())).nnz or (ME - sp.diags(ME.diagonal())).nnz:
        raise EigensolverFailure('Sparse harmonic extraction needs diagonal vertex and edge masses; raise DENSE_LIMIT')
    B = D0.T @ M
    K = (B.T @ sp.diags(1.0 / MV.diagonal()) @ B + C.T @ sp.diags(1.0 / ME.diagonal()) @ C).tocsc()
    v0 = np.random.RandomState(seed).rand(n)
    try:
        top = spla.eigsh(K, k=1, M=M.tocsc(), which='LM', v0=v0, return_eigenvectors=False)
        scale = float(abs(top[0]))
        # shift by a typical diagonal ratio, not by lam_max
        typical = float(np.median(np.abs(K.diagonal()) / np.abs(M.diagonal())))
        vals, vecs = spla.eigsh(K, k=min(num_eigs, n - 2), M=M.tocsc(), sigma=-1e-6 * typical, which='LM', v0=v0)
    except (spla.ArpackNoConvergence, RuntimeError) as err:
        raise EigensolverFailure('Shift-invert Hodge eigenproblem failed: %s' % err)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    keep = vals < harmonic_threshold(vals[-1], scale, tol)
    return int(keep.sum()), vecs[:, keep], vals

def harmonic_basis(mesh, tol=1e-8, dense_limit=4000):
    
    dim, basis, _ = harmonic_space(
        d0_gamma(mesh), curl_gamma(mesh), mass_gamma(mesh), mass_vertex(mesh), mass_edge(mesh),
        tol=tol, dense_limit=dense_limit, num_eigs=2 * max(mesh.genus, 0) + 6)
    return basis

def inject_harmonic(gamma, basis, coeffs):
    return np.asarray(gamma, dtype=float) + basis @ np.asarray(coeffs, dtype=float)

def hodge_decompose_gamma(mesh, gamma, harmonic_tol=1e-8, dense_limit=4000):
    """Exact, coexact and harmonic parts of a halfedge form on a closed mesh.

    ``f`` is the vertex potential of the exact part, ``eps`` the half-curl
    (the coexact part equals ``2 M^-1 C^T L_E^-1 eps``) and ``harmonic`` the
    remainder. The report carries the numerical harmonic dimension next to
    ``2 * genus``.
    """
    
    if not mesh.is_closed:
        raise BoundaryMeshUnsupported('Hodge decomposition needs a closed mesh, found %d boundary edges' % mesh.boundary_edges.sum())
    
    D0, C, M, MV = d0_gamma(mesh), curl_gamma(mesh), mass_gamma(mesh), mass_vertex(mesh)
    result = decompose(gamma, D0, C, M, MV)
    dim, _, _ = harmonic_space(D0, C, M, MV, mass_edge(mesh), tol=harmonic_tol, dense_limit=dense_limit,
                               num_eigs=2 * max(mesh.genus, 0) + 6)
    result.report['harmonic/dimension'] = dim
    result.report['harmonic/expected'] = 2 * mesh.genus
    if dim != 2 * mesh.genus:
        print('Harmonic dimension %d differs from 2g = %d' % (dim, 2 * mesh.genus))
    return result
