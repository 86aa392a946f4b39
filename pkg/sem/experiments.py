import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from tqdm import tqdm
from sklearn.linear_model import LinearRegression
from halfedge import d0_gamma, curl_gamma, mass_gamma
from operators import mass_edge_dual
from utils.exceptions import SolverFailure, BoundaryMeshUnsupported
from .fields import sample_field
from .hodge import sem_hodge_spectrum, fem_hodge_spectrum


def solve_hodge_system(D0, C, M, MV, ME, b):
    """Solve the pointwise Hodge-Laplace equation ``L_Gamma gamma = b``.

    Posed as the symmetric block system in ``(gamma, p, q)``
    ``[[0, M D0, C^T], [D0^T M, -MV, 0], [C, 0, -ME]]`` with right-hand side
    ``(M b, 0, 0)``, which avoids every explicit inverse mass.
    """
    
    D0, C, M = sp.csr_matrix(D0), sp.csr_matrix(C), sp.csr_matrix(M)
    MD0 = M @ D0
    K = sp.bmat([
        [None, MD0, C.T],
        [MD0.T, -sp.csr_matrix(MV), None],
        [C, None, -sp.csr_matrix(ME)]
    ], format='csc')
    rhs = np.concatenate([M @ b, np.zeros(D0.shape[1] + C.shape[0])])
    try:
        sol = spla.splu(K).solve(rhs)
    except RuntimeError as err:
        raise SolverFailure('Hodge system solve failed: %s' % err)
    if not np.all(np.isfinite(sol)):
        raise SolverFailure('Hodge system solve produced non-finite values')
    return sol[:M.shape[0]]

def sem_solve(ctx, b):
    M = ctx.masses
    return solve_hodge_system(d0_gamma(ctx.coarse).matrix, curl_gamma(ctx.coarse).matrix, M['Gamma'], M['V'], M['E'], b)

def __errors__(mesh, delta):
    """L2, Linf and curl-L2 of a fine-level difference, normalized by the total mass."""
    
    M = mass_gamma(mesh).matrix
    MEd = mass_edge_dual(mesh).matrix
    curl = curl_gamma(mesh).matrix @ delta
    return {
        'L2': float(np.sqrt(max(delta @ (M @ delta), 0.0) / M.sum())),
        'Linf': float(np.abs(delta).max()),
        'curl_L2': float(np.sqrt(max(curl @ (MEd @ curl), 0.0) / MEd.sum()))
    }

def __check_sphere__(mesh):
    """The pointwise Hodge system is nonsingular only without harmonic fields."""
    
    if not mesh.is_closed:
        raise BoundaryMeshUnsupported('Poisson experiments need a closed mesh')
    if mesh.genus != 0:
        raise ValueError('Poisson experiments need a genus-0 mesh, got genus %d' % mesh.genus)

def fit_slope(h, err):
    """Least-squares slope of log error against log mean edge length."""
    
    h, err = np.asarray(h, dtype=float), np.asarray(err, dtype=float)
    ok = err > 0
    if ok.sum() < 2:
        return float('nan')
    model = LinearRegression().fit(np.log(h[ok]).reshape(-1, 1), np.log(err[ok]))
    return float(model.coef_[0])

def projection_error_experiment(ctx, field='smooth', progress=False):
    """SEM and FEM solutions at every level against the finest FEM solution.

    The right-hand side is sampled at level 0 and subdivided to each level;
    coarse solutions are subdivided to level ``l`` before measuring.
    """
    
    __check_sphere__(ctx.coarse)
    l = ctx.level
    b0, _ = sample_field(ctx.coarse, field)
    meshes = [ctx.coarse] + [s.fine for s in ctx.sets]
    rhs = [b0]
    for s in ctx.sets:
        rhs.append(s.S_gamma @ rhs[-1])
    
    truth = sem_solve(ctx.sub_context(l), rhs[l])
    records = []
    for k in tqdm(range(l + 1), desc='projection error', disable=not progress):
        sub = ctx.sub_context(k)
        sem = sub.subdivide(sem_solve(sub, rhs[k]))
        fem = sub.subdivide(sem_solve(sub.fem_context(), rhs[k]))
        record = {'level': k, 'h': meshes[k].mean_edge_length}
        for method, value in [('sem', sem), ('fem', fem)]:
            for key, err in __errors__(ctx.fine, truth - value).items():
                record['%s/%s' % (method, key)] = err
        records.append(record)
    
    fit = records[1:l] if l >= 3 else records[:l]
    slopes = {}
    for key in records[0]:
        if '/' in key:
            slopes[key] = fit_slope([r['h'] for r in fit], [r[key] for r in fit])
    return {'experiment': 'projection', 'field': field, 'level': l, 'records': records, 'slopes': slopes}

def operator_error_experiment(ctx, field='smooth', progress=False):
    """Coarse solutions with masses restricted from level ``k`` against the ``k = l`` solution."""
    
    __check_sphere__(ctx.coarse)
    l = ctx.level
    b0, _ = sample_field(ctx.coarse, field)
    
    def restricted_from(k):
        if k == 0:
            return ctx.fem_context()
        return type(ctx)(ctx.coarse, ctx.sets[:k])
    
    reference = ctx.subdivide(sem_solve(ctx, b0))
    records = []
    for k in tqdm(range(l + 1), desc='operator error', disable=not progress):
        sol = ctx.subdivide(sem_solve(restricted_from(k), b0))
        err = __errors__(ctx.fine, reference - sol)
        records.append({'level': k, 'L2': err['L2'], 'Linf': err['Linf']})
    return {'experiment': 'operator', 'field': field, 'level': l, 'records': records}

def spectrum_experiment(ctx, count=20, dense_limit=4000, seed=0):
    """SEM and FEM coarse Hodge spectra against the FEM spectrum of the fine mesh."""
    
    sem = sem_hodge_spectrum(ctx, count, dense_limit, seed=seed)
    fem = fem_hodge_spectrum(ctx.coarse, count, dense_limit, seed=seed)
    fine = fem_hodge_spectrum(ctx.fine, count, dense_limit, seed=seed)
    
    n = min(len(sem.values), len(fem.values), len(fine.values))
    records = []
    for i in range(n):
        ref = fine.values[i]
        scale = ref if ref > 1e-12 else 1.0
        records.append({
            'index': i,
            'kind': fine.kinds[i],
            'fine': float(ref),
            'sem': float(sem.values[i]),
            'fem': float(fem.values[i]),
            'sem/rel_error': float(abs(sem.values[i] - ref) / scale),
            'fem/rel_error': float(abs(fem.values[i] - ref) / scale)
        })
    better = [r['sem/rel_error'] <= r['fem/rel_error'] for r in records if r['kind'] != 'harmonic']
    return {
        'experiment': 'spectrum',
        'level': ctx.level,
        'records': records,
        'harmonic/sem': sem.harmonic_dim,
        'harmonic/fem': fem.harmonic_dim,
        'harmonic/fine': fine.harmonic_dim,
        'sem_better_share': float(np.mean(better)) if better else float('nan')
    }


avail_experiments = {
    'projection-error': projection_error_experiment,
    'operator-error': operator_error_experiment,
    'spectrum': spectrum_experiment
}
