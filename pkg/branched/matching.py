import math
import numpy as np
from collections import namedtuple
from mesh import build_mesh
from utils.exceptions import SingularVertex

SingularityReport = namedtuple('SingularityReport', ['shifts', 'indices', 'geometric', 'kinds'])
Unfolding = namedtuple('Unfolding', ['rings', 'fold', 'closed'])


def trivial_matching(mesh):
    return np.zeros(mesh.num_edges, dtype=np.int64)

def __crossings__(mesh, matching, v):
    """Index shift when stepping from ``faces[k-1]`` to ``faces[k]`` of the CCW ring of ``v``.

    Entry 0 is the closing step of an interior ring and 0 on a boundary fan.
    """
    
    ring = mesh.rings[v]
    shifts = np.zeros(len(ring.faces), dtype=np.int64)
    for k in range(len(ring.faces)):
        if ring.boundary and k == 0:
            continue
        e, _ = mesh.edge_index(v, ring.neighbors[k])
        prev = ring.faces[k - 1]
        shifts[k] = matching[e] if mesh.edge_faces[e, 0] == prev else -matching[e]
    return shifts

def ring_shift(mesh, matching, v):
    """Total matching shift accumulated once around an interior vertex (0 on the boundary)."""
    
    if mesh.rings[v].boundary:
        return 0
    return int(__crossings__(mesh, matching, v).sum())

def ring_permutation(mesh, matching, N, v):
    """Permutation of the N vector indices after one CCW loop around ``v``."""
    return np.mod(np.arange(N) + ring_shift(mesh, matching, v), N)

def modular_index(shift, N):
    """``shift / N`` reduced modulo 1 into ``(-1/2, 1/2]``."""
    
    r = shift % N
    if 2 * r > N:
        r -= N
    return r / N

def __angle__(t, u, n):
    return math.atan2(np.dot(np.cross(t, u), n), np.dot(t, u))

def __wrap__(a):
    return a - 2 * np.pi * np.ceil((a - np.pi) / (2 * np.pi))

def geometric_index(mesh, field, v, branch=0):
    """Turning of the field around ``v``: transported angle differences plus the angle defect, over 2 pi."""
    
    ring = mesh.rings[v]
    if ring.boundary:
        return float('nan')
    normals = mesh.face_normals
    shifts = __crossings__(mesh, field.matching, v)
    d = len(ring.faces)
    k_cur = branch
    total = 0.0
    for k in list(range(1, d)) + [0]:
        a, b = ring.faces[k - 1], ring.faces[k]
        t = mesh.vertices[ring.neighbors[k]] - mesh.vertices[v]
        k_next = (k_cur + shifts[k]) % field.N
        alpha = __angle__(t, field.vectors[a, k_cur], normals[a])
        beta = __angle__(t, field.vectors[b, k_next], normals[b])
        total += __wrap__(beta - alpha)
        k_cur = k_next
    return float((total + mesh.angle_defect[v]) / (2 * np.pi))

def vertex_indices(mesh, field=None, matching=None, N=None):
    """Per-vertex singularity report.

    ``indices`` is the matching index ``T_v / N`` reduced into ``(-1/2, 1/2]``;
    with vector values the ``geometric`` index also separates integral
    singularities from regular vertices. Boundary vertices are ``unclassified``.
    """
    
    if field is not None:
        matching, N = field.matching, field.N
    shifts = np.zeros(mesh.num_vertices, dtype=np.int64)
    indices = np.full(mesh.num_vertices, np.nan)
    geometric = np.full(mesh.num_vertices, np.nan)
    kinds = []
    for v in range(mesh.num_vertices):
        if mesh.rings[v].boundary:
            kinds.append('unclassified')
            continue
        shifts[v] = ring_shift(mesh, matching, v)
        indices[v] = modular_index(shifts[v], N)
        if field is not None:
            geometric[v] = geometric_index(mesh, field, v)
        if shifts[v] % N:
            kinds.append('fractional')
        elif field is not None and abs(geometric[v]) > 0.5:
            kinds.append('integral')
        else:
            kinds.append('regular')
    return SingularityReport(shifts, indices, geometric, kinds)

def comb_offsets(mesh, matching, N, v):
    """Per-face offsets around ``v`` that make every ring-interior matching zero.

    Returns ``{face: offset}`` with the first ring face at offset 0.
    """
    
    ring = mesh.rings[v]
    shifts = __crossings__(mesh, matching, v)
    if not ring.boundary and shifts.sum() % N:
        raise SingularVertex(v, modular_index(int(shifts.sum()), N))
    offsets = {ring.faces[0]: 0}
    c = 0
    for k in range(1, len(ring.faces)):
        c = (c + shifts[k]) % N
        offsets[ring.faces[k]] = int(c)
    return offsets

def comb(mesh, field, v):
    """Re-index the faces around a regular vertex so its ring matchings vanish.

    Only indices move, vector values are untouched; ``uncomb`` with the same
    offsets restores the input.
    """
    
    offsets = np.zeros(mesh.num_faces, dtype=np.int64)
    for f, c in comb_offsets(mesh, field.matching, field.N, v).items():
        offsets[f] = c
    return field.permuted(offsets, mesh), offsets

def uncomb(mesh, field, offsets):
    return field.permuted(-np.asarray(offsets), mesh)

def unfold(mesh, v, matching, N):
    """Single-vector rings around ``v``.

    Each ring is the cycle of ``(face, index)`` pairs met when following one
    vector around ``v``; there are ``gcd(T_v, N)`` of them. ``fold`` maps a
    pair to ``(ring, position)``. Boundary fans give N open chains.
    """
    
    ring = mesh.rings[v]
    shifts = __crossings__(mesh, matching, v)
    d = len(ring.faces)
    fold, rings = {}, []
    for start in range(N):
        if (ring.faces[0], start) in fold:
            continue
        r, cycle, k, pos = len(rings), [], start, 0
        while True:
            fold[(ring.faces[pos], k)] = (r, len(cycle))
            cycle.append((ring.faces[pos], k))
            pos += 1
            if pos == d:
                if ring.boundary:
                    break
                pos = 0
            k = (k + shifts[pos]) % N
            if pos == 0 and k == start:
                break
        rings.append(cycle)
    return Unfolding(rings, fold, not ring.boundary)

def fine_matching(coarse, fine, matching):
    """Even child edges copy their parent's matching, odd edges are trivial."""
    
    out = np.zeros(fine.num_edges, dtype=np.int64)
    E0 = coarse.num_edges
    out[0:2 * E0:2] = matching
    out[1:2 * E0:2] = matching
    return out

CoveringMesh = namedtuple('CoveringMesh', ['mesh', 'base_vertex', 'N'])


def covering_mesh(mesh, matching, N):
    """N-sheeted cover obtained by unfolding every vertex.

    Cover face ``k |F| + f`` carries vector ``k`` of face ``f``; cover vertices
    are numbered by base vertex, then by unfolded ring. Adjacent fractional
    singularities make the cover non-manifold and raise ``NonManifold``.
    """
    
    F = mesh.num_faces
    corner = np.zeros((N * F, 3), dtype=np.int64)
    base = []
    for v in range(mesh.num_vertices):
        unf = unfold(mesh, v, matching, N)
        first = len(base)
        base += [v] * len(unf.rings)
        for (f, k), (r, _) in unf.fold.items():
            slot = int(np.flatnonzero(mesh.faces[f] == v)[0])
            corner[k * F + f, slot] = first + r
    base = np.array(base, dtype=np.int64)
    cover = build_mesh(mesh.vertices[base], corner, area_tol=0.0)
    return CoveringMesh(cover, base, N)
