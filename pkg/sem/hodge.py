import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from collections import namedtuple
from operators import mass_vertex, mass_edge
from halfedge import decompose, harmonic_space, block_inverse, d0_gamma, curl_gamma, mass_gamma
from utils.exceptions import BoundaryMeshUnsupported, EigensolverFailure
from utils.report import relative_residual
from .context import sem_operators

HodgeSpectrum = namedtuple('HodgeSpectrum', ['exact_values', 'exact_vectors', 'coexact_values', 'coexact_vectors', 'harmonic_dim', 'values', 'kinds'])


def two_path_residual(ctx, gamma):
    """Divergence of the subdivided field restricted back, against the SEM divergence of the coarse field."""
    
    fine_div = d0_gamma(ctx.fine).matrix.T @ (mass_gamma(ctx.fine).matrix @ ctx.subdivide(gamma))
    ops = sem_operators(ctx)
    return relative_residual(ctx.S_V.T @ fine_div, ops['D_gamma'] @ gamma)

def __fine_divergence__(ctx, part):
    """Pointwise fine divergence of a subdivided coarse field and its restriction."""
    
    MV = mass_vertex(ctx.fine).diagonal()
    weak = d0_gamma(ctx.fine).matrix.T @ (mass_gamma(ctx.fine).matrix @ ctx.subdivide(part))
    div = weak / MV
    restricted = ctx.S_V.T @ weak
    return {
        'max': float(np.abs(div).max()) if div.size else 0.0,
        'L2': float(np.sqrt(max(div @ (MV * div), 0.0))),
        'restricted': float(np.linalg.norm(restricted) / max(np.linalg.norm(weak), 1e-300))
    }

def sem_hodge_decompose(ctx, gamma, harmonic_tol=1e-8, dense_limit=4000):
    """SEM-orthogonal Hodge split of a coarse halfedge form.

    Besides the coarse decomposition the report carries, for every part, the
    pointwise divergence of its subdivided field on the fine mesh and the
    relative size of that divergence after restriction through ``S_V^T``.
    """
    
    if not ctx.coarse.is_closed:
        raise BoundaryMeshUnsupported('SEM Hodge decomposition needs a closed mesh')
    
    M = ctx.masses
    D0 = d0_gamma(ctx.coarse).matrix
    C = curl_gamma(ctx.coarse).matrix
    result = decompose(gamma, D0, C, M['Gamma'], M['V'])
    dim, _, _ = harmonic_space(D0, C, M['Gamma'], M['V'], M['E'], tol=harmonic_tol, dense_limit=dense_limit,
                               num_eigs=2 * max(ctx.coarse.genus, 0) + 6)
    result.report['harmonic/dimension'] = dim
    result.report['harmonic/expected'] = 2 * ctx.coarse.genus
    if dim != 2 * ctx.coarse.genus:
        print('Harmonic dimension %d differs from 2g = %d' % (dim, 2 * ctx.coarse.genus))
    
    for name in ['exact', 'coexact', 'harmonic']:
        stats = __fine_divergence__(ctx, getattr(result, name))
        for key, value in stats.items():
            result.report['fine_div/%s/%s' % (name, key)] = value
    result.report['residual/two_path'] = two_path_residual(ctx, gamma)
    return result

def __eigh__(A, B, count, what):
    
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    count = min(count, A.shape[0])
    try:
        return sla.eigh(A, B, subset_by_index=[0, count - 1])
    except (np.linalg.LinAlgError, ValueError) as err:
        raise EigensolverFailure('Dense %s eigenproblem failed: %s' % (what, err))

def __eigsh__(A, B, count, what, seed):
    
    count = min(count, A.shape[0] - 2)
    v0 = np.random.RandomState(seed).rand(A.shape[0])
    try:
        scale = float(abs(spla.eigsh(A, k=1, M=B, which='LM', v0=v0, return_eigenvectors=False)[0]))
        vals, vecs = spla.eigsh(A, k=count, M=B, sigma=-1e-6 * scale, which='LM', v0=v0)
    except (spla.ArpackNoConvergence, RuntimeError) as err:
        raise EigensolverFailure('Shift-invert %s eigenproblem failed: %s' % (what, err))
    order = np.argsort(vals)
    return vals[order], vecs[:, order]

def __is_block_diagonal__(M):
    
    coo = sp.coo_matrix(M)
    return bool(np.all(coo.row // 2 == coo.col // 2))

def hodge_spectrum(D0, C, M, MV, ME, count=20, dense_limit=4000, tol=1e-8, seed=0, harmonic=True):
    """Lowest eigenpairs of the Gamma Hodge Laplacian, split by family.

    The exact family comes from ``(D0^T M D0) phi = lam MV phi`` and the
    coexact family from ``(C M^-1 C^T) psi = mu ME psi``; the corresponding
    Hodge eigenfields are ``D0 phi`` and ``M^-1 C^T psi``. Constant kernels are
    dropped and the harmonic zeros are prepended to the merged list.
    """
    
    D0, C = sp.csr_matrix(D0), sp.csr_matrix(C)
    M, MV, ME = sp.csr_matrix(M), sp.csr_matrix(MV), sp.csr_matrix(ME)
    nv, ne, ng = D0.shape[1], C.shape[0], M.shape[0]
    
    L_V = (D0.T @ M @ D0).tocsr()
    if nv <= dense_limit:
        lam, phi = __eigh__(L_V.toarray(), MV.toarray(), count + 1, 'vertex')
    else:
        lam, phi = __eigsh__(L_V.tocsc(), MV.tocsc(), count + 1, 'vertex', seed)
    
    if max(ne, ng) <= dense_limit:
        Minv_Ct = np.linalg.solve(M.toarray(), C.T.toarray())
        mu, psi = __eigh__(C.toarray() @ Minv_Ct, ME.toarray(), count + 1, 'edge')
    elif __is_block_diagonal__(M):
        L_E = (C @ block_inverse(M) @ C.T).tocsc()
        mu, psi = __eigsh__(L_E, ME.tocsc(), count + 1, 'edge', seed)
    else:
        raise EigensolverFailure('Sparse coexact spectrum needs a block-diagonal Gamma mass; raise DENSE_LIMIT')
    
    keep_v = lam > tol * max(abs(lam[-1]), np.finfo(float).tiny)
    keep_e = mu > tol * max(abs(mu[-1]), np.finfo(float).tiny)
    lam, phi, mu, psi = lam[keep_v], phi[:, keep_v], mu[keep_e], psi[:, keep_e]
    
    dim = 0
    if harmonic:
        dim, _, _ = harmonic_space(D0, C, M, MV, ME, dense_limit=dense_limit, seed=seed)
    
    values = np.concatenate([np.zeros(dim), lam, mu])
    kinds = np.array(['harmonic'] * dim + ['exact'] * lam.size + ['coexact'] * mu.size)
    order = np.argsort(values, kind='stable')[:count]
    return HodgeSpectrum(lam, phi, mu, psi, dim, values[order], kinds[order].tolist())

def spectrum_residuals(ctx, spectrum):
    """Relative residuals of ``L_Gamma x = lam x`` for every computed Hodge eigenfield."""
    
    ops = sem_operators(ctx)
    L = ops['L_gamma']
    D0, C, M = ops['d0_gamma'], ops['C_gamma'], ops['M_gamma']
    solve = spla.factorized(sp.csc_matrix(M))
    out = {'exact': [], 'coexact': []}
    for lam, phi in zip(spectrum.exact_values, spectrum.exact_vectors.T):
        x = D0 @ phi
        out['exact'].append(relative_residual(L @ x, lam * x))
    for mu, psi in zip(spectrum.coexact_values, spectrum.coexact_vectors.T):
        x = solve(C.T @ psi)
        out['coexact'].append(relative_residual(L @ x, mu * x))
    return out

def sem_hodge_spectrum(ctx, count=20, dense_limit=4000, tol=1e-8, seed=0):
    """Hodge spectrum of the coarse mesh with restricted masses; plain FEM for an unrefined context."""
    
    if not ctx.coarse.is_closed:
        raise BoundaryMeshUnsupported('SEM Hodge spectrum needs a closed mesh')
    M = ctx.masses
    return hodge_spectrum(d0_gamma(ctx.coarse).matrix, curl_gamma(ctx.coarse).matrix,
                          M['Gamma'], M['V'], M['E'], count, dense_limit, tol, seed)

def fem_hodge_spectrum(mesh, count=20, dense_limit=4000, tol=1e-8, seed=0):
    
    if not mesh.is_closed:
        raise BoundaryMeshUnsupported('Hodge spectrum needs a closed mesh')
    return hodge_spectrum(d0_gamma(mesh).matrix, curl_gamma(mesh).matrix, mass_gamma(mesh).matrix,
                          mass_vertex(mesh).matrix, mass_edge(mesh).matrix, count, dense_limit, tol, seed)
