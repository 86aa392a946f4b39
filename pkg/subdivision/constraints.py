"""Coefficient systems of the stencils without closed form.

Every relation is written over named local elements: spokes ``('s', k)`` and
rims ``('r', k)`` of a vertex ring, or the edges of a face and its
neighbours (``ab``, ``bc``, ``ca``, ``p``/``q``/``r`` the apexes across
``ab``/``bc``/``ca``). Elements that coincide on a mesh simply add their
coefficients, so a stencil satisfying these identities commutes on any mesh.
"""
import numpy as np
from .closed_forms import (
    ODD_ONE_FORM,
    BOUNDARY_ONE_FORM,
    HALFBOX_CENTER,
    halfbox_corner
)
from .local import LinearSystem, put, put_form

# boundary fans instantiated per relation
FAN_SIZES = (1, 2, 3, 4)


def even_unknown(d, kind, i):
    return ('S_E', d, kind, i)

def odd_unknown(kind):
    return ('S_E', 'odd', kind)

def boundary_unknown(op, kind):
    return (op, 'boundary', kind)

def __odd_edge_row__(row, parallel, sides, spokes, outer, coefficient):
    """Unsigned odd stencil with the support of the odd 1-form stencil."""

    put(row, parallel, *coefficient('parallel'))
    for group, kind in ((sides, 'side'), (spokes, 'spoke'), (outer, 'outer')):
        for element in group:
            put(row, element, *coefficient(kind))
    return row

def __symbolic__(kind):
    return odd_unknown(kind), 1.0

def interior_edge_system(valences, z, tie_break='positivity', tol=1e-12):
    """Unsigned edge stencils ``S_E*`` of interior vertices and faces from ``S_F* A = A S_E*``."""

    system = LinearSystem('interior S_E*', tie_break, tol)

    # center child of an interior face
    row = {}
    corners = [
        ('bc', ('ab', 'ca'), ('ap', 'ar'), ('bp', 'cr')),
        ('ca', ('bc', 'ab'), ('bq', 'bp'), ('cq', 'ap')),
        ('ab', ('ca', 'bc'), ('cr', 'cq'), ('ar', 'bq'))
    ]
    for parallel, sides, spokes, outer in corners:
        __odd_edge_row__(row, parallel, sides, spokes, outer, __symbolic__)
    put_form(row, {'ab': 1.0, 'bc': 1.0, 'ca': 1.0}, scale=-HALFBOX_CENTER)
    for nbr in (('ab', 'ap', 'bp'), ('bc', 'bq', 'cq'), ('ca', 'cr', 'ar')):
        put_form(row, dict.fromkeys(nbr, 1.0), scale=-HALFBOX_CENTER)
    system.add_rows(row, 'center')

    for d in valences:
        # corner child in ring face f_0 at a valence-d vertex
        row = {}
        for j in (0, 1):
            for i in range(d):
                put(row, ('s', (j + i) % d), even_unknown(d, 'spoke', i))
                put(row, ('r', (j + i) % d), even_unknown(d, 'rim', i))
        __odd_edge_row__(
            row,
            ('r', 0),
            (('s', 0), ('s', 1 % d)),
            (('s', d - 1), ('s', 2 % d)),
            (('r', d - 1), ('r', 1 % d)),
            __symbolic__
        )
        for k, c in enumerate(halfbox_corner(d)):
            put_form(row, {('s', k): 1.0, ('s', (k + 1) % d): 1.0, ('r', k): 1.0}, scale=-c)
        system.add_rows(row, 'corner/%d' % d)

        # mirror symmetry about the target spoke
        for i in range(1, d):
            if i >= d - i:
                continue
            system.add({even_unknown(d, 'spoke', i): 1.0, even_unknown(d, 'spoke', d - i): -1.0}, ('mirror', d))
        for i in range(d):
            if i >= d - 1 - i:
                continue
            system.add({even_unknown(d, 'rim', i): 1.0, even_unknown(d, 'rim', d - 1 - i): -1.0}, ('mirror', d))

        if tie_break == 'none':
            continue
        if d >= 7:
            # zero outside the support of the corner S_F* stencil
            for i in range(3, d - 2):
                system.add({even_unknown(d, 'spoke', i): 1.0}, ('support', d))
            for i in range(2, d - 2):
                system.add({even_unknown(d, 'rim', i): 1.0}, ('support', d))
        if d == 4:
            system.add({even_unknown(4, 'spoke', 1): 1.0, None: -z}, ('z', 4))

    positive = [even_unknown(6, kind, i) for kind in ('spoke', 'rim') for i in range(6)] if 6 in valences else []
    return system, positive

def __fan_spoke_form__(n, j):
    """Even 1-form stencil at a boundary vertex with ``n`` fan faces, towards ``w_j``."""

    w = BOUNDARY_ONE_FORM
    row = {}
    if j == 0 or j == n:
        row[('s', j)] = w['spoke']
        row[('s', n - j)] = row.get(('s', n - j), 0.0) + w['opposite']
        return row
    for k, v in ((j, w['spoke']), (j - 1, w['neighbor']), (j + 1, w['neighbor']), (0, w['opposite']), (n, w['opposite'])):
        row[('s', k)] = row.get(('s', k), 0.0) + v
    return row

def __fan_circulation__(k):
    return {('s', k): 1.0, ('r', k): 1.0, ('s', k + 1): -1.0}

def __fan_odd_form__(row, n, k):
    """Odd 1-form stencil in fan face ``f_k``, edge ``m_k -> m_{k+1}``."""

    w, o = BOUNDARY_ONE_FORM, ODD_ONE_FORM
    if n == 1:
        put_form(row, {('r', 0): w['corner']})
        put_form(row, __fan_circulation__(0), boundary_unknown('S_1', 'corner'))
    elif k == 0:
        put_form(row, {('r', 0): w['parallel'], ('s', 2): w['apex']})
        put_form(row, __fan_circulation__(0), boundary_unknown('S_1', 'side'))
        put_form(row, __fan_circulation__(1), boundary_unknown('S_1', 'next'))
    elif k == n - 1:
        put_form(row, {('r', k): w['parallel'], ('s', k - 1): -w['apex']})
        put_form(row, __fan_circulation__(k), boundary_unknown('S_1', 'side'))
        put_form(row, __fan_circulation__(k - 1), boundary_unknown('S_1', 'next'))
    else:
        put_form(row, {
            ('r', k): o['parallel'],
            ('s', k): o['side'],
            ('s', k + 1): -o['side'],
            ('s', k - 1): -o['spoke'],
            ('s', k + 2): o['spoke'],
            ('r', k - 1): o['outer'],
            ('r', k + 1): o['outer']
        })
    return row

def __fan_faces__(n, k):
    """Boundary S_F* unknowns of the corner child in ``f_k`` as ``{ring face: unknown}``."""

    F = lambda kind: boundary_unknown('S_F', kind)
    if n == 1:
        return {0: F('single')}
    if k == 0:
        return {0: F('end'), 1: F('end_next')}
    if k == n - 1:
        return {k: F('end'), k - 1: F('end_next')}
    return {k - 1: F('middle_side'), k: F('middle'), k + 1: F('middle_side')}

def __center_forms__():
    """Directed face circulations of ``t = (a, b, c)`` and its neighbours across ``ca`` and ``bc``."""

    D_t = {'ab': 1.0, 'bc': 1.0, 'ca': 1.0}
    D_ca = {'ca': -1.0, 'cr': 1.0, 'ra': 1.0}
    D_bc = {'bc': -1.0, 'bq': 1.0, 'qc': 1.0}
    return D_t, D_ca, D_bc

def boundary_system(interior, tie_break='positivity', tol=1e-12):
    """Boundary stencils of ``S_1``, ``S_F*`` and ``S_E*`` from closedness and the null-sum relation.

    ``interior`` holds the solved interior unknowns; odd edges of corners
    away from the boundary keep the interior stencil.
    """

    system = LinearSystem('boundary stencils', tie_break, tol)
    w, o = BOUNDARY_ONE_FORM, ODD_ONE_FORM
    lam = lambda kind: boundary_unknown('S_1', kind)
    F = lambda kind: boundary_unknown('S_F', kind)
    E = lambda kind: boundary_unknown('S_E', kind)
    odd = lambda kind: (None, interior[odd_unknown(kind)])

    for n in FAN_SIZES:
        for k in range(n):
            # closedness of the corner child in f_k
            row = {}
            put_form(row, __fan_spoke_form__(n, k))
            __fan_odd_form__(row, n, k)
            put_form(row, __fan_spoke_form__(n, k + 1), scale=-1.0)
            for j, unknown in __fan_faces__(n, k).items():
                put_form(row, __fan_circulation__(j), unknown, -1.0)
            system.add_rows(row, 'fan closedness %d/%d' % (n, k))

            # null-sum of the corner child in f_k, boundary spokes carry no curl
            row = {}
            for j in (k, k + 1):
                if 0 < j < n:
                    put(row, ('s', j), E('fan_spoke'))
                    put(row, ('s', j - 1), E('fan_side'))
                    put(row, ('s', j + 1), E('fan_side'))
                    put(row, ('r', j - 1), E('fan_rim'))
                    put(row, ('r', j), E('fan_rim'))
            if n == 1:
                put(row, ('r', 0), E('corner'))
            elif k == 0:
                put(row, ('r', 0), E('parallel'))
                put(row, ('s', 1), E('side'))
                put(row, ('s', 2), E('spoke'))
            elif k == n - 1:
                put(row, ('r', k), E('parallel'))
                put(row, ('s', k), E('side'))
                put(row, ('s', k - 1), E('spoke'))
            else:
                __odd_edge_row__(
                    row,
                    ('r', k),
                    (('s', k), ('s', k + 1)),
                    (('s', k - 1), ('s', k + 2)),
                    (('r', k - 1), ('r', k + 1)),
                    odd
                )
            for j, unknown in __fan_faces__(n, k).items():
                put_form(row, {('s', j): 1.0, ('s', j + 1): 1.0, ('r', j): 1.0}, unknown, -1.0)
            system.add_rows(row, 'fan null-sum %d/%d' % (n, k), skip=(('s', 0), ('s', n)))

    D_t, D_ca, D_bc = __center_forms__()
    O1_a = {'bc': w['parallel'], 'ra': -w['apex']}
    O1_b = {'ca': w['parallel'], 'bq': -w['apex']}
    O1_c = {'ab': w['parallel'], 'qc': -w['apex']}
    O0_c = {
        'ab': o['parallel'],
        'ca': o['side'],
        'bc': o['side'],
        'cr': -o['spoke'],
        'qc': -o['spoke'],
        'ra': o['outer'],
        'bq': o['outer']
    }

    # closedness of the center child; one boundary edge ab
    row = {}
    put_form(row, O1_a, scale=-1.0)
    put_form(row, D_t, lam('side'), -1.0)
    put_form(row, D_ca, lam('next'), -1.0)
    put_form(row, O1_b, scale=-1.0)
    put_form(row, D_t, lam('side'), -1.0)
    put_form(row, D_bc, lam('next'), -1.0)
    put_form(row, O0_c, scale=-1.0)
    put_form(row, D_t, F('center_1'), -1.0)
    put_form(row, D_ca, F('center_nbr_1'), -1.0)
    put_form(row, D_bc, F('center_nbr_1'), -1.0)
    system.add_rows(row, 'center closedness 1')

    # boundary edges ab and ca
    row = {}
    put_form(row, {'bc': w['corner']}, scale=-1.0)
    put_form(row, D_t, lam('corner'), -1.0)
    for base in (O1_b, O1_c):
        put_form(row, base, scale=-1.0)
        put_form(row, D_t, lam('side'), -1.0)
        put_form(row, D_bc, lam('next'), -1.0)
    put_form(row, D_t, F('center_2'), -1.0)
    put_form(row, D_bc, F('center_nbr_2'), -1.0)
    system.add_rows(row, 'center closedness 2')

    # isolated face
    row = {}
    put_form(row, D_t, scale=-w['corner'])
    put_form(row, D_t, lam('corner'), -3.0)
    put_form(row, D_t, F('center_3'), -1.0)
    system.add_rows(row, 'center closedness 3')

    # null-sum of the center child; one boundary edge ab
    row = {}
    put_form(row, {'bc': 1.0}, E('parallel'))
    put_form(row, {'ca': 1.0}, E('side'))
    put_form(row, {'ar': 1.0}, E('spoke'))
    put_form(row, {'ca': 1.0}, E('parallel'))
    put_form(row, {'bc': 1.0}, E('side'))
    put_form(row, {'bq': 1.0}, E('spoke'))
    __odd_edge_row__(row, 'ab', ('ca', 'bc'), ('cr', 'cq'), ('ar', 'bq'), odd)
    put_form(row, {'bc': 1.0, 'ca': 1.0}, F('center_1'), -1.0)
    put_form(row, {'ca': 1.0, 'cr': 1.0, 'ar': 1.0}, F('center_nbr_1'), -1.0)
    put_form(row, {'bc': 1.0, 'bq': 1.0, 'cq': 1.0}, F('center_nbr_1'), -1.0)
    system.add_rows(row, 'center null-sum 1', skip=('ab',))

    # boundary edges ab and ca
    row = {}
    put_form(row, {'bc': 1.0}, E('corner'))
    put_form(row, {'bc': 1.0}, E('side'))
    put_form(row, {'bq': 1.0}, E('spoke'))
    put_form(row, {'bc': 1.0}, E('side'))
    put_form(row, {'cq': 1.0}, E('spoke'))
    put_form(row, {'bc': 1.0}, F('center_2'), -1.0)
    put_form(row, {'bc': 1.0, 'bq': 1.0, 'cq': 1.0}, F('center_nbr_2'), -1.0)
    system.add_rows(row, 'center null-sum 2')

    positive = [k for k in system.index if k[0] == 'S_F']
    return system, positive

def solve_stencil_constraints(valences, z, tie_break='positivity', tol=1e-12):
    """Solve the interior and boundary coefficient systems.

    Returns the solved unknowns and the relative residual of each system.
    """

    valences = sorted(set(valences))
    system, positive = interior_edge_system(valences, z, tie_break, tol)
    interior, res_interior = system.solve(positive)
    system, positive = boundary_system(interior, tie_break, tol)
    boundary, res_boundary = system.solve(positive)
    solution = dict(interior)
    solution.update(boundary)
    return solution, {'interior': res_interior, 'boundary': res_boundary}

def even_edge_stencil(solution, d):
    """Spoke and rim coefficients of the interior even ``S_E*`` stencil of valence ``d``."""

    spoke = np.array([solution[even_unknown(d, 'spoke', i)] for i in range(d)])
    rim = np.array([solution[even_unknown(d, 'rim', i)] for i in range(d)])
    return spoke, rim
