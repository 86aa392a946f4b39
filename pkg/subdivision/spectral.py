import numpy as np
from tqdm import tqdm
from scipy.spatial import cKDTree
from .patches import canonical_patch
from .builder import build_subdivision_set

SIGNED = {'S_1': True, 'S_V': False, 'S_F': False, 'S_E': False}
SPACE = {'S_V': 'V', 'S_1': 'E', 'S_E': 'E', 'S_F': 'F'}


def __centroids__(mesh, space):
    
    if space == 'V':
        return mesh.vertices
    if space == 'E':
        return 0.5 * (mesh.vertices[mesh.edges[:, 0]] + mesh.vertices[mesh.edges[:, 1]])
    return mesh.vertices[mesh.faces].mean(axis=1)

def local_elements(mesh, space, center=0):
    """Elements of the one-ring of ``center`` in the given space."""
    
    ring = mesh.rings[center]
    if space == 'V':
        return [center] + list(ring.neighbors)
    if space == 'F':
        return list(ring.faces)
    spokes = [mesh.edge_index(center, w)[0] for w in ring.neighbors]
    rims = []
    for f in ring.faces:
        others = [int(u) for u in mesh.faces[f] if u != center]
        rims.append(mesh.edge_index(others[0], others[1])[0])
    return spokes + rims

def local_subdivision_matrix(s, operator, center=0):
    """Square block of an operator acting on the one-ring of ``center``.

    Fine elements are matched to coarse ones through the half-scale map of
    the canonical patch (coarse centroid ``c`` corresponds to fine ``c / 2``);
    1-form rows are re-signed to the coarse orientation.
    """
    
    space = SPACE[operator]
    S = getattr(s, operator).toarray()
    coarse = local_elements(s.coarse, space, center)
    cc = __centroids__(s.coarse, space)
    dist, fine = cKDTree(__centroids__(s.fine, space)).query(cc[coarse] / 2)
    if dist.max() > 1e-9:
        raise ValueError('Only canonical patches with midpoint geometry are supported.')
    fine = fine.tolist()
    
    M = S[np.ix_(fine, coarse)]
    if SIGNED[operator]:
        dc = s.coarse.edge_vectors[coarse]
        df = s.fine.edge_vectors[fine]
        M = np.sign((dc * df).sum(axis=1))[:, None] * M
    return M

def __analyze__(M, is_vertex):
    
    vals = np.linalg.eigvals(M)
    vals = vals[np.argsort(-np.abs(vals), kind='stable')]
    mags = np.abs(vals)
    sub = float(mags[1]) if mags.size > 1 else 0.0
    if np.abs(vals.imag).max() < 1e-10:
        vals = vals.real
    # subdivided vertex functions keep the constant (eigenvalue 1)
    limit = sub if is_vertex else float(mags[0])
    return {
        'eigenvalues': vals,
        'dominant': float(mags[0]),
        'subdominant': sub,
        'flagged': bool(limit >= 1.0 + 1e-12)
    }

def spectral_check(stencils, valence, boundary=False, operator='S_E', rings=4, subdivision=None):
    """Eigen-structure of the local subdivision matrix around a vertex of the given valence."""
    
    if operator not in SPACE:
        raise ValueError('Only %s operators are supported.' % ', '.join(sorted(SPACE)))
    if subdivision is None:
        mesh, _ = canonical_patch(valence, boundary, rings)
        subdivision = build_subdivision_set(mesh, stencils, geometry='midpoint')
    return __analyze__(local_subdivision_matrix(subdivision, operator), operator == 'S_V')

def __label_edge__(labels, mesh, e):
    a, b = mesh.edges[e]
    return '%s->%s' % (labels[a], labels[b])

def __label_face__(labels, mesh, f):
    return '(%s)' % ','.join(labels[u] for u in mesh.faces[f])

def __stencil__(M, i, labeler):
    
    row = M.getrow(i).tocoo()
    entries = [{'element': labeler(j), 'coefficient': float(v)} for j, v in zip(row.col, row.data) if abs(v) > 1e-15]
    return sorted(entries, key=lambda x: x['element'])

def derive_constrained_stencils(stencils, valences=None, boundary_valences=None, rings=4, progress=False):
    """Solve the stencil constraint systems and audit them on canonical patches.

    The coefficient systems are solved first (errors propagate as
    InfeasibleConstraints or UnresolvedDOF). Every patch is then subdivided
    with midpoint geometry, which fills ``stencils.tables`` (rows of the
    fine elements at the patch center), ``stencils.residuals`` (largest
    commutation residual per patch) and ``stencils.spectra`` (local
    eigen-structure per operator).
    """
    
    stencils.solve()
    if valences is None:
        valences = stencils.valences
    if boundary_valences is None:
        boundary_valences = range(1, stencils.max_valence // 2 + 1)
    cases = [(d, False) for d in valences] + [(d, True) for d in boundary_valences]
    
    for d, boundary in tqdm(cases, desc='stencils', disable=not progress):
        mesh, labels = canonical_patch(d, boundary, rings)
        s = build_subdivision_set(mesh, stencils, geometry='midpoint')
        stencils.residuals[(d, boundary)] = max(v for k, v in s.report.items() if not k.startswith('stencils/'))
        
        f0 = mesh.rings[0].faces[0]
        c0 = int(np.flatnonzero(mesh.faces[f0] == 0)[0])
        # an interior spoke on boundary fans
        mid = len(mesh.rings[0].faces) // 2 if boundary else 0
        spoke, _ = mesh.edge_index(0, mesh.rings[0].neighbors[mid])
        half = 0 if mesh.edges[spoke, 0] == 0 else 1
        even_edge = s.maps.even_edges[spoke, half]
        odd_edge = s.maps.odd_edges[f0, c0]
        
        lv = lambda j: labels[j]
        le = lambda j: __label_edge__(labels, mesh, j)
        lf = lambda j: __label_face__(labels, mesh, j)
        rows = {
            ('S_V', 'even'): (s.S_V, 0, lv),
            ('S_V', 'odd'): (s.S_V, s.maps.odd_vertices[spoke], lv),
            ('S_1', 'even'): (s.S_1, even_edge, le),
            ('S_1', 'odd'): (s.S_1, odd_edge, le),
            ('S_F', 'even'): (s.S_F, s.maps.faces[f0, c0], lf),
            ('S_F', 'odd'): (s.S_F, s.maps.faces[f0, 3], lf),
            ('S_E', 'even'): (s.S_E, even_edge, le),
            ('S_E', 'odd'): (s.S_E, odd_edge, le)
        }
        for (op, parity), (M, i, labeler) in rows.items():
            stencils.tables[(op, d, parity, boundary)] = __stencil__(M, i, labeler)
        for op in SPACE:
            stencils.spectra[(op, d, boundary)] = __analyze__(local_subdivision_matrix(s, op), op == 'S_V')
    
    return stencils
