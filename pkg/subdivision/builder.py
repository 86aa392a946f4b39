import numpy as np
import scipy.sparse as sp
from tqdm import tqdm
from collections import namedtuple
from mesh import quadrisect
from operators import d0, d1
from halfedge import (
    d0_gamma,
    curl_gamma,
    null_sum_incidence,
    mean_curl_operator,
    mean_curl_operator_inv
)
from utils.report import relative_residual
from .closed_forms import (
    ODD_ONE_FORM,
    BOUNDARY_ONE_FORM,
    HALFBOX_CENTER,
    loop_alpha,
    halfbox_corner,
    one_form_eta,
    one_form_theta
)
from .local import prune

SubdivisionSet = namedtuple(
    'SubdivisionSet',
    ['coarse', 'fine', 'maps', 'S_V', 'S_1', 'S_F', 'S_E', 'S_gamma', 'report']
)


def edge_apex(mesh):
    """Vertex opposite each edge in its left and right face (-1 when missing)."""

    apex = -np.ones((mesh.num_edges, 2), dtype=np.int64)
    for i in range(3):
        side = (mesh.face_signs[:, i] < 0).astype(np.int64)
        apex[mesh.face_edges[:, i], side] = mesh.faces[:, (i + 2) % 3]
    return apex


class LocalFace:
    """Corner ``i`` of face ``t`` seen as ``(a, b, c)`` with the faces and apexes across its edges."""

    def __init__(self, mesh, apex, t, i):

        self.t = int(t)
        self.a, self.b, self.c = (int(mesh.faces[t, (i + j) % 3]) for j in range(3))
        self.ab, self.bc, self.ca = (int(mesh.face_edges[t, (i + j) % 3]) for j in range(3))
        self.p, self.face_ab = self.__across__(mesh, apex, t, i)
        self.q, self.face_bc = self.__across__(mesh, apex, t, (i + 1) % 3)
        self.r, self.face_ca = self.__across__(mesh, apex, t, (i + 2) % 3)

    @staticmethod
    def __across__(mesh, apex, t, j):

        e = mesh.face_edges[t, j]
        other = 1 if mesh.face_signs[t, j] > 0 else 0
        return int(apex[e, other]), int(mesh.edge_faces[e, other])

    @property
    def boundary(self):
        return self.face_ab < 0, self.face_ca < 0


def __one_form__(mesh, row, a, b, coef):
    """Add ``coef * omega(a -> b)``."""

    e, s = mesh.edge_index(a, b)
    row[e] = row.get(e, 0.0) + s * coef

def __circulation__(mesh, row, g, coef):

    for i in range(3):
        e = int(mesh.face_edges[g, i])
        row[e] = row.get(e, 0.0) + coef * float(mesh.face_signs[g, i])

def __edge__(mesh, row, a, b, coef):
    """Add ``coef * eps(a, b)`` for the unsigned edge quantity."""

    e, _ = mesh.edge_index(a, b)
    row[e] = row.get(e, 0.0) + coef

def __to_csr__(rows, shape):

    r, c, v = [], [], []
    for i, row in enumerate(rows):
        for j, val in row.items():
            r.append(i)
            c.append(j)
            v.append(val)
    return sp.csr_matrix((v, (r, c)), shape=shape)

def __even_child__(coarse, maps, v, w):
    """Fine half of edge ``(v, w)`` at ``v`` and the sign of ``v -> m`` against its stored direction."""

    e, s = coarse.edge_index(v, w)
    return int(maps.even_edges[e, 0 if s > 0 else 1]), float(s)

def build_S_V(mesh):
    """Loop subdivision with the Biermann boundary rules."""

    nv, ne = mesh.num_vertices, mesh.num_edges
    rows, cols, vals = [], [], []
    for v, ring in enumerate(mesh.rings):
        nb = ring.neighbors
        if ring.boundary:
            rows += [v, v, v]
            cols += [v, nb[0], nb[-1]]
            vals += [0.75, 0.125, 0.125]
        else:
            alpha = loop_alpha(len(nb))
            rows += [v] * (len(nb) + 1)
            cols += [v] + list(nb)
            vals += [1 - len(nb) * alpha] + [alpha] * len(nb)

    apex = edge_apex(mesh)
    odd = nv + np.arange(ne)
    bnd = mesh.boundary_edges
    half = np.where(bnd, 0.5, 0.375)
    rows += np.concatenate([odd, odd]).tolist()
    cols += np.concatenate([mesh.edges[:, 0], mesh.edges[:, 1]]).tolist()
    vals += np.concatenate([half, half]).tolist()
    inner = np.flatnonzero(~bnd)
    rows += np.concatenate([odd[inner], odd[inner]]).tolist()
    cols += np.concatenate([apex[inner, 0], apex[inner, 1]]).tolist()
    vals += [0.125] * (2 * inner.size)

    return sp.csr_matrix((vals, (rows, cols)), shape=(nv + ne, nv))

def __boundary_spoke_row__(mesh, v, nb, j):
    """Even 1-form row ``v -> m_j`` at a boundary vertex whose fan has ``len(nb) - 1`` faces."""

    w, n = BOUNDARY_ONE_FORM, len(nb) - 1
    row = {}
    if j in (0, n):
        __one_form__(mesh, row, v, nb[j], w['spoke'])
        __one_form__(mesh, row, v, nb[n - j], w['opposite'])
        return row
    __one_form__(mesh, row, v, nb[j], w['spoke'])
    for k in (j - 1, j + 1):
        __one_form__(mesh, row, v, nb[k], w['neighbor'])
    for k in (0, n):
        __one_form__(mesh, row, v, nb[k], w['opposite'])
    return row

def __interior_spoke_row__(mesh, v, nb, j):

    d = len(nb)
    eta, theta = one_form_eta(d), one_form_theta(d)
    row = {}
    for k in range(d):
        __one_form__(mesh, row, v, nb[(j + k) % d], eta[k])
        __one_form__(mesh, row, nb[(j + k) % d], nb[(j + k + 1) % d], theta[k])
    return row

def __odd_one_form_row__(mesh, lf, stencils):
    """1-form row of the odd edge ``m_ab -> m_ca`` of corner ``a``."""

    o, w = ODD_ONE_FORM, BOUNDARY_ONE_FORM
    at_ab, at_ca = lf.boundary
    row = {}
    if at_ab and at_ca:
        __one_form__(mesh, row, lf.b, lf.c, w['corner'])
        __circulation__(mesh, row, lf.t, stencils.boundary('S_1', 'corner'))
    elif at_ab:
        __one_form__(mesh, row, lf.b, lf.c, w['parallel'])
        __one_form__(mesh, row, lf.a, lf.r, w['apex'])
        __circulation__(mesh, row, lf.t, stencils.boundary('S_1', 'side'))
        __circulation__(mesh, row, lf.face_ca, stencils.boundary('S_1', 'next'))
    elif at_ca:
        __one_form__(mesh, row, lf.b, lf.c, w['parallel'])
        __one_form__(mesh, row, lf.p, lf.a, w['apex'])
        __circulation__(mesh, row, lf.t, stencils.boundary('S_1', 'side'))
        __circulation__(mesh, row, lf.face_ab, stencils.boundary('S_1', 'next'))
    else:
        __one_form__(mesh, row, lf.b, lf.c, o['parallel'])
        __one_form__(mesh, row, lf.a, lf.b, o['side'])
        __one_form__(mesh, row, lf.c, lf.a, o['side'])
        __one_form__(mesh, row, lf.p, lf.a, o['spoke'])
        __one_form__(mesh, row, lf.a, lf.r, o['spoke'])
        __one_form__(mesh, row, lf.p, lf.b, o['outer'])
        __one_form__(mesh, row, lf.c, lf.r, o['outer'])
    return row

def build_S_1(coarse, fine, maps, stencils, progress=False):
    """1-form subdivision, ``S_1 d0 = d0 S_V``.

    Even rows use the ring stencils of their coarse vertex, odd rows the
    stencil of their corner; next to the boundary the odd rows carry the
    solved multiples of the adjacent face circulations.
    """

    rows = [None] * fine.num_edges
    for v, ring in enumerate(tqdm(coarse.rings, desc='S_1 even', disable=not progress)):
        nb = ring.neighbors
        for j, w in enumerate(nb):
            fe, sign = __even_child__(coarse, maps, v, w)
            row = __boundary_spoke_row__(coarse, v, nb, j) if ring.boundary else __interior_spoke_row__(coarse, v, nb, j)
            rows[fe] = {e: sign * c for e, c in row.items()}

    apex = edge_apex(coarse)
    nv = coarse.num_vertices
    for t in tqdm(range(coarse.num_faces), desc='S_1 odd', disable=not progress):
        for i in range(3):
            lf = LocalFace(coarse, apex, t, i)
            fe = int(maps.odd_edges[t, i])
            sign = 1.0 if fine.edges[fe, 0] == nv + lf.ab else -1.0
            rows[fe] = {e: sign * c for e, c in __odd_one_form_row__(coarse, lf, stencils).items()}

    return __to_csr__([prune(row) for row in rows], (fine.num_edges, coarse.num_edges))

def __corner_faces__(ring, k, stencils):
    """Integrated face weights of the corner child in ring face ``k``."""

    faces, row = ring.faces, {}
    if not ring.boundary:
        d = len(faces)
        for m, c in enumerate(halfbox_corner(d)):
            g = faces[(k + m) % d]
            row[g] = row.get(g, 0.0) + c
        return row
    n = len(faces)
    F = lambda kind: stencils.boundary('S_F', kind)
    if n == 1:
        return {faces[0]: F('single')}
    if k == 0:
        return {faces[0]: F('end'), faces[1]: F('end_next')}
    if k == n - 1:
        return {faces[k]: F('end'), faces[k - 1]: F('end_next')}
    return {faces[k - 1]: F('middle_side'), faces[k]: F('middle'), faces[k + 1]: F('middle_side')}

def build_S_F(coarse, fine, maps, stencils, progress=False):
    """Integrated face subdivision, ``S_F* d1 = d1 S_1``."""

    rows = [None] * fine.num_faces
    for t in tqdm(range(coarse.num_faces), desc='S_F*', disable=not progress):
        nbrs = [int(g) for e in coarse.face_edges[t] for g in coarse.edge_faces[e] if g >= 0 and g != t]
        nb = 3 - len(nbrs)
        if nb == 0:
            own, other = HALFBOX_CENTER, HALFBOX_CENTER
        else:
            own = stencils.boundary('S_F', 'center_%d' % nb)
            other = stencils.boundary('S_F', 'center_nbr_%d' % nb) if nb < 3 else 0.0
        row = {t: own}
        for g in nbrs:
            row[g] = row.get(g, 0.0) + other
        rows[maps.faces[t, 3]] = row
        for i in range(3):
            ring = coarse.rings[coarse.faces[t, i]]
            rows[maps.faces[t, i]] = __corner_faces__(ring, ring.faces.index(t), stencils)

    return __to_csr__([prune(row) for row in rows], (fine.num_faces, coarse.num_faces))

def __even_edge_row__(mesh, v, ring, j, stencils):

    nb = ring.neighbors
    row = {}
    if not ring.boundary:
        d = len(nb)
        spoke, rim = stencils.edge_even(d)
        for k in range(d):
            __edge__(mesh, row, v, nb[(j + k) % d], spoke[k])
            __edge__(mesh, row, nb[(j + k) % d], nb[(j + k + 1) % d], rim[k])
        return row
    E = lambda kind: stencils.boundary('S_E', kind)
    __edge__(mesh, row, v, nb[j], E('fan_spoke'))
    for k in (j - 1, j + 1):
        __edge__(mesh, row, v, nb[k], E('fan_side'))
    for k in (j - 1, j):
        __edge__(mesh, row, nb[k], nb[k + 1], E('fan_rim'))
    return row

def __odd_edge_row__(mesh, lf, stencils):

    at_ab, at_ca = lf.boundary
    E = lambda kind: stencils.boundary('S_E', kind)
    row = {}
    if at_ab and at_ca:
        __edge__(mesh, row, lf.b, lf.c, E('corner'))
    elif at_ab:
        __edge__(mesh, row, lf.b, lf.c, E('parallel'))
        __edge__(mesh, row, lf.c, lf.a, E('side'))
        __edge__(mesh, row, lf.a, lf.r, E('spoke'))
    elif at_ca:
        __edge__(mesh, row, lf.b, lf.c, E('parallel'))
        __edge__(mesh, row, lf.a, lf.b, E('side'))
        __edge__(mesh, row, lf.a, lf.p, E('spoke'))
    else:
        odd = stencils.edge_odd()
        __edge__(mesh, row, lf.b, lf.c, odd['parallel'])
        __edge__(mesh, row, lf.a, lf.b, odd['side'])
        __edge__(mesh, row, lf.c, lf.a, odd['side'])
        __edge__(mesh, row, lf.a, lf.p, odd['spoke'])
        __edge__(mesh, row, lf.a, lf.r, odd['spoke'])
        __edge__(mesh, row, lf.b, lf.p, odd['outer'])
        __edge__(mesh, row, lf.c, lf.r, odd['outer'])
    return row

def build_S_E(coarse, fine, maps, stencils, progress=False):
    """Unsigned integrated edge subdivision, ``A S_E* = S_F* A``.

    Fine boundary edges carry no curl and get empty rows; coarse boundary
    columns are dropped for the same reason.
    """

    rows = [{} for _ in range(fine.num_edges)]
    for v, ring in enumerate(tqdm(coarse.rings, desc='S_E* even', disable=not progress)):
        for j, w in enumerate(ring.neighbors):
            fe, _ = __even_child__(coarse, maps, v, w)
            if not fine.boundary_edges[fe]:
                rows[fe] = __even_edge_row__(coarse, v, ring, j, stencils)

    apex = edge_apex(coarse)
    for t in tqdm(range(coarse.num_faces), desc='S_E* odd', disable=not progress):
        for i in range(3):
            rows[maps.odd_edges[t, i]] = __odd_edge_row__(coarse, LocalFace(coarse, apex, t, i), stencils)

    S_E = __to_csr__([prune(row) for row in rows], (fine.num_edges, coarse.num_edges))
    S_E = (S_E @ sp.diags((~coarse.boundary_edges).astype(float))).tocsr()
    S_E.eliminate_zeros()
    return S_E

def build_S_gamma(coarse, fine, S_1, S_E):
    """S_Gamma = W_fine^-1 blockdiag(S_1, S_E*) W_coarse."""

    block = sp.block_diag([S_1, S_E], format='csr')
    return (mean_curl_operator_inv(fine).matrix @ block @ mean_curl_operator(coarse).matrix).tocsr()

def commutation_residuals(s):
    """Relative Frobenius residuals of every commutation relation of one level."""

    c, f = s.coarse, s.fine
    return {
        'exactness': relative_residual(s.S_1 @ d0(c).matrix, d0(f).matrix @ s.S_V),
        'closedness': relative_residual(s.S_F @ d1(c).matrix, d1(f).matrix @ s.S_1),
        'null_sum': relative_residual(s.S_F @ null_sum_incidence(c).matrix, null_sum_incidence(f).matrix @ s.S_E),
        'curl': relative_residual(curl_gamma(f).matrix @ s.S_gamma, s.S_E @ curl_gamma(c).matrix),
        'gamma_exactness': relative_residual(s.S_gamma @ d0_gamma(c).matrix, d0_gamma(f).matrix @ s.S_V),
        'boundary_curl': float(abs(curl_gamma(f).matrix[np.flatnonzero(f.boundary_edges)] @ s.S_gamma).max()) if f.boundary_edges.any() else 0.0
    }

def build_subdivision_set(coarse, stencils, geometry='loop', progress=False):
    """All subdivision operators of one refinement level.

    ``geometry`` selects the fine positions: ``loop`` applies S_V to the
    coarse positions, ``midpoint`` keeps the refinement midpoints.
    """

    if geometry not in ('loop', 'midpoint'):
        raise ValueError('Only loop and midpoint fine geometries are supported.')
    stencils.solve(int(max(coarse.valence)))
    fine, maps = quadrisect(coarse)
    S_V = build_S_V(coarse)
    if geometry == 'loop':
        fine = fine.with_vertices(S_V @ coarse.vertices)

    S_1 = build_S_1(coarse, fine, maps, stencils, progress)
    S_F = build_S_F(coarse, fine, maps, stencils, progress)
    S_E = build_S_E(coarse, fine, maps, stencils, progress)
    S_gamma = build_S_gamma(coarse, fine, S_1, S_E)

    report = {'stencils/%s' % k: v for k, v in stencils.system_residuals.items()}
    s = SubdivisionSet(coarse, fine, maps, S_V, S_1, S_F, S_E, S_gamma, report)
    report.update(commutation_residuals(s))
    return s

def build_hierarchy(mesh, levels, stencils, geometry='loop', progress=False):

    sets = []
    for _ in tqdm(range(levels), desc='levels', disable=not progress):
        s = build_subdivision_set(mesh, stencils, geometry, progress)
        sets.append(s)
        mesh = s.fine
    return sets

def aggregate(sets, space='S_gamma'):
    """Product ``S^{l-1} ... S^0`` of one operator family over consecutive levels."""

    if not sets:
        raise ValueError('Only non-empty level ranges can be aggregated.')
    total = getattr(sets[0], space)
    for s in sets[1:]:
        total = getattr(s, space) @ total
    return total.tocsr()

def pointwise_edge_prolongation(S_E, coarse_mass, fine_mass):
    """Prolongation of pointwise edge functions, ``M_E_fine^-1 S_E* M_E_coarse``."""
    return (sp.diags(1.0 / fine_mass) @ S_E @ sp.diags(coarse_mass)).tocsr()
