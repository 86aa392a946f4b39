import numpy as np
from subdivision import StencilSet, build_subdivision_set
from halfedge import curl_gamma
from .field import DirectionalField
from .matching import covering_mesh, fine_matching, vertex_indices


def subdivide_cover(mesh, matching, N, gammas, stencils, progress=False):
    """One level of branched subdivision through the N-sheeted cover.

    ``gammas`` are the branch-major packed forms ``(N, 2|F|)``; returns the
    fine forms, the fine matching and the cover subdivision set.
    """
    
    cover = covering_mesh(mesh, matching, N)
    s = build_subdivision_set(cover.mesh, stencils, geometry='midpoint', progress=progress)
    fine = s.S_gamma @ np.asarray(gammas, dtype=float).ravel()
    return fine.reshape(N, -1), s

def branched_subdivide(ctx, field, stencils=None, progress=False):
    """Subdivide an N-directional field through every level of ``ctx``.

    Each level conjugates single-field subdivision with the unfolding of all
    vertices; even child edges keep their parent's matching, odd edges get
    the trivial one. Returns ``(fine field, fine matching, report)``.
    """
    
    stencils = stencils or StencilSet()
    N = field.N
    mesh, matching = ctx.coarse, field.matching
    gammas = field.to_gamma(mesh)
    before = vertex_indices(mesh, matching=matching, N=N)
    
    report = {'N': N, 'levels': []}
    for s in ctx.sets:
        gammas, cover_set = subdivide_cover(mesh, matching, N, gammas, stencils, progress)
        matching = fine_matching(s.coarse, s.fine, matching)
        mesh = s.fine
        level = {key: cover_set.report[key] for key in ('curl', 'gamma_exactness', 'null_sum')}
        level['cover_vertices'] = cover_set.coarse.num_vertices
        report['levels'].append(level)
    
    after = vertex_indices(mesh, matching=matching, N=N)
    nv = ctx.coarse.num_vertices
    even = np.isnan(before.indices) | np.isclose(before.indices, after.indices[:nv])
    odd_regular = [kind in ('regular', 'unclassified') for kind in after.kinds[nv:]]
    report['singularities/preserved'] = bool(np.all(even) and all(odd_regular))
    report['singularities/coarse'] = [v for v, kind in enumerate(before.kinds) if kind == 'fractional']
    report['singularities/fine'] = [v for v, kind in enumerate(after.kinds) if kind == 'fractional']
    
    if ctx.sets:
        curl = curl_gamma(cover_set.fine).matrix @ gammas.ravel()
        report['curl/fine_max'] = float(np.abs(curl).max())
        report['curl/relative'] = float(np.linalg.norm(curl) / max(np.linalg.norm(gammas), 1e-300))
    return DirectionalField.from_gamma(mesh, gammas, matching), matching, report
