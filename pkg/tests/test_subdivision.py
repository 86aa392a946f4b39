import numpy as np
import pytest
from mesh import quadrisect, load_mesh
from operators import d0
from halfedge import d0_gamma, curl_gamma
from utils.exceptions import UnresolvedDOF
from subdivision import (
    StencilSet,
    Z_VALENCE4,
    loop_alpha,
    halfbox_beta,
    halfbox_deltas,
    halfbox_corner,
    one_form_eta,
    one_form_theta,
    build_S_V,
    build_subdivision_set,
    build_hierarchy,
    commutation_residuals,
    aggregate,
    canonical_patch,
    spectral_check,
    derive_constrained_stencils
)

GATED = ['exactness', 'closedness', 'null_sum', 'curl', 'gamma_exactness', 'boundary_curl']


def __relative__(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


@pytest.mark.parametrize('name', ['tetrahedron', 'octahedron', 'icosphere', 'torus', 'flap', 'disk'])
def test_commutation_relations(name, request, stencils):

    mesh = request.getfixturevalue(name)
    s = build_subdivision_set(mesh, stencils)
    for key in GATED:
        assert s.report[key] <= 1e-10, (name, key, s.report[key])
    assert s.fine.num_faces == 4 * mesh.num_faces
    assert s.S_gamma.shape == (2 * s.fine.num_faces, 2 * mesh.num_faces)


@pytest.mark.parametrize('name', ['triangle', 'disk:1,3', 'disk:2,4', 'disk:2,5', 'disk:2,9', 'icosahedron'])
def test_commutation_on_irregular_patches(name, stencils):

    s = build_subdivision_set(load_mesh(name), stencils)
    for key in GATED:
        assert s.report[key] <= 1e-10, (name, key, s.report[key])


def test_commutation_on_two_levels(icosphere_ctx):

    for s in icosphere_ctx.sets:
        residuals = commutation_residuals(s)
        assert max(residuals[k] for k in GATED) <= 1e-10


def test_random_fields_commute(torus, stencils, rng):

    s = build_subdivision_set(torus, stencils)
    C0, C1 = curl_gamma(torus).matrix, curl_gamma(s.fine).matrix
    G0, G1 = d0_gamma(torus).matrix, d0_gamma(s.fine).matrix
    D0, D1 = d0(torus).matrix, d0(s.fine).matrix
    for _ in range(100):
        gamma = rng.randn(2 * torus.num_faces)
        assert __relative__(C1 @ (s.S_gamma @ gamma), s.S_E @ (C0 @ gamma)) <= 1e-10
        f = rng.randn(torus.num_vertices)
        assert __relative__(s.S_gamma @ (G0 @ f), G1 @ (s.S_V @ f)) <= 1e-12
        assert __relative__(s.S_1 @ (D0 @ f), D1 @ (s.S_V @ f)) <= 1e-12


def test_curl_free_fields_stay_curl_free(icosphere_ctx, rng):

    mesh = icosphere_ctx.coarse
    gamma = d0_gamma(mesh) @ rng.randn(mesh.num_vertices)
    fine = icosphere_ctx.subdivide(gamma)
    assert np.abs(curl_gamma(icosphere_ctx.fine) @ fine).max() <= 1e-12 * np.linalg.norm(gamma)


def test_vertex_subdivision_is_affine(icosphere, disk):

    for mesh in [icosphere, disk]:
        S_V = build_S_V(mesh)
        assert np.abs(S_V @ np.ones(mesh.num_vertices) - 1.0).max() < 1e-14


@pytest.mark.parametrize('name', ['tetrahedron', 'octahedron', 'disk', 'flap'])
def test_face_subdivision_keeps_integrals(name, request, stencils):

    mesh = request.getfixturevalue(name)
    S_F = build_subdivision_set(mesh, stencils).S_F.toarray()
    assert np.abs(S_F.sum(axis=0) - 1.0).max() < 1e-14
    assert S_F.min() >= 0.0
    assert np.all(S_F.sum(axis=1) > 0.0)


def test_boundary_edges_carry_no_curl(flap, disk, stencils):

    for mesh in [flap, disk]:
        s = build_subdivision_set(mesh, stencils)
        S_E = s.S_E.toarray()
        assert np.abs(S_E[s.fine.boundary_edges]).max() == 0.0
        assert np.abs(S_E[:, mesh.boundary_edges]).max() == 0.0
        assert np.abs(S_E[:, ~mesh.boundary_edges]).max() > 0.0


def test_loop_geometry_moves_vertices(icosphere, stencils):

    loop = build_subdivision_set(icosphere, stencils, geometry='loop')
    midpoint = build_subdivision_set(icosphere, stencils, geometry='midpoint')
    refined, _ = quadrisect(icosphere)
    assert np.abs(midpoint.fine.vertices - refined.vertices).max() == 0.0
    assert np.abs(loop.fine.vertices - loop.S_V @ icosphere.vertices).max() < 1e-14
    with pytest.raises(ValueError):
        build_subdivision_set(icosphere, stencils, geometry='butterfly')


def test_hierarchy_and_aggregation(octahedron, stencils):

    sets = build_hierarchy(octahedron, 2, stencils)
    assert sets[1].coarse is sets[0].fine
    total = aggregate(sets, 'S_V')
    assert np.abs((total - sets[1].S_V @ sets[0].S_V).toarray()).max() == 0.0
    with pytest.raises(ValueError):
        aggregate([], 'S_V')


def test_closed_form_coefficients():

    assert loop_alpha(6) == pytest.approx(1.0 / 16.0)
    assert loop_alpha(3) == pytest.approx(3.0 / 16.0)
    assert halfbox_beta(6) == pytest.approx(0.25)
    assert halfbox_beta(5) == pytest.approx(0.25 - np.sin(2 * np.pi / 5) ** 2 / 16.0)
    assert one_form_eta(6)[0] == pytest.approx(0.25)
    assert one_form_theta(6).sum() == pytest.approx(0.0)
    for d in range(3, 13):
        # the row of v -> m reproduces S_V[m] - S_V[v] on the center value
        assert one_form_eta(d).sum() == pytest.approx(0.625 - d * loop_alpha(d), abs=1e-15)
    assert halfbox_deltas(3)[2] == pytest.approx(halfbox_beta(3))
    assert halfbox_deltas(7)[2] == pytest.approx(0.125)


def test_halfbox_corner_rows():

    assert halfbox_corner(3) == pytest.approx([1 / 6, 1 / 24, 1 / 24], abs=1e-15)
    assert halfbox_corner(4) == pytest.approx([5 / 32, 1 / 32, 1 / 32, 1 / 32], abs=1e-15)
    assert halfbox_corner(6) == pytest.approx([1 / 8, 1 / 32, 1 / 32, 0, 1 / 32, 1 / 32], abs=1e-15)
    for d in range(3, 13):
        assert halfbox_corner(d).sum() == pytest.approx(0.25, abs=1e-15)


def test_derived_interior_edge_stencils(stencils):

    expected = {
        3: ([11 / 48, -1 / 48, -1 / 48], [1 / 48] * 3),
        4: ([5 / 32, Z_VALENCE4, -1 / 32, Z_VALENCE4], [1 / 64] * 4),
        6: ([5 / 32, 0, 0, 1 / 32, 0, 0], [0, 1 / 32, 0, 0, 1 / 32, 0]),
        7: ([3 / 16, -1 / 32, 1 / 32, 0, 0, 1 / 32, -1 / 32], [0, 1 / 32, 0, 0, 0, 1 / 32, 0])
    }
    for d, (spoke, rim) in expected.items():
        got_spoke, got_rim = stencils.edge_even(d)
        assert got_spoke == pytest.approx(spoke, abs=1e-12), d
        assert got_rim == pytest.approx(rim, abs=1e-12), d
    assert stencils.edge_odd() == pytest.approx({'parallel': 1 / 8, 'side': 0.0, 'spoke': 1 / 16, 'outer': 0.0}, abs=1e-12)
    # valences beyond the support of the corner face stencil share one stencil
    assert stencils.edge_even(12)[0][:3] == pytest.approx(stencils.edge_even(8)[0][:3], abs=1e-12)
    assert max(stencils.system_residuals.values()) <= 1e-12


def test_derived_boundary_stencils(stencils):

    expected = {
        ('S_1', 'side'): -5 / 32,
        ('S_1', 'next'): 1 / 32,
        ('S_1', 'corner'): -1 / 4,
        ('S_F', 'single'): 1 / 4,
        ('S_F', 'end'): 7 / 32,
        ('S_F', 'end_next'): 1 / 32,
        ('S_F', 'middle'): 3 / 16,
        ('S_F', 'middle_side'): 1 / 32,
        ('S_F', 'center_1'): 1 / 8,
        ('S_F', 'center_nbr_1'): 1 / 16,
        ('S_F', 'center_2'): 3 / 16,
        ('S_F', 'center_nbr_2'): 1 / 16,
        ('S_F', 'center_3'): 1 / 4,
        ('S_E', 'parallel'): 3 / 16,
        ('S_E', 'side'): 0.0,
        ('S_E', 'spoke'): 1 / 16,
        ('S_E', 'corner'): 1 / 4,
        ('S_E', 'fan_spoke'): 1 / 4,
        ('S_E', 'fan_side'): -1 / 32,
        ('S_E', 'fan_rim'): 1 / 32
    }
    for (op, kind), value in expected.items():
        assert stencils.boundary(op, kind) == pytest.approx(value, abs=1e-12), (op, kind)


def test_stencil_set_settings():

    with pytest.raises(ValueError):
        StencilSet(tie_break='random')
    with pytest.raises(UnresolvedDOF):
        StencilSet(tie_break='none').solve()
    s = StencilSet(max_valence=6)
    assert sorted(k for k in s.closed_forms() if k.isdigit()) == ['3', '4', '5', '6']
    dump = s.dump()
    assert dump['settings']['tie_break'] == 'positivity'
    assert dump['settings']['z'] == Z_VALENCE4
    assert dump['derived']['S_E/interior/4/even']['spoke'][1] == pytest.approx(Z_VALENCE4)
    assert 'valence4_edge_spectrum' not in dump


def test_valence4_edge_spectrum(stencils):

    spectrum = np.sort(np.real(spectral_check(stencils, 4, rings=3)['eigenvalues']))[::-1]
    assert spectrum == pytest.approx([1 / 4, 3 / 16, 3 / 16, 1 / 8, 1 / 8, 1 / 8, 1 / 16, 1 / 16], abs=1e-12)
    other = StencilSet(z=1.0 / 16.0)
    spectrum = np.sort(np.real(spectral_check(other, 4, rings=3)['eigenvalues']))
    assert spectrum[0] == pytest.approx(3 / 16 - 4 / 16, abs=1e-12)
    assert other.edge_even(6)[0] == pytest.approx(stencils.edge_even(6)[0], abs=1e-12)


@pytest.mark.parametrize('valence', range(3, 13))
def test_local_spectra_contract(valence, stencils):

    vertex = spectral_check(stencils, valence, operator='S_V', rings=2)
    edge = spectral_check(stencils, valence, operator='S_E', rings=2)
    assert vertex['dominant'] == pytest.approx(1.0, abs=1e-10)
    assert vertex['subdominant'] < 1.0 and not vertex['flagged']
    assert edge['dominant'] < 1.0 and not edge['flagged']


@pytest.mark.parametrize('valence', [3, 5, 7])
def test_canonical_patch_valence(valence):

    mesh, labels = canonical_patch(valence, rings=2)
    assert mesh.valence[0] == valence
    assert labels[0] == 'c'
    assert not mesh.rings[0].boundary
    fan, _ = canonical_patch(valence, boundary=True, rings=2)
    assert fan.rings[0].boundary
    assert len(fan.rings[0].faces) == valence


def test_spectral_check_on_regular_patch(stencils):

    vertex = spectral_check(stencils, 6, operator='S_V', rings=3)
    assert vertex['dominant'] == pytest.approx(1.0, abs=1e-10)
    assert not vertex['flagged']
    with pytest.raises(ValueError):
        spectral_check(stencils, 6, operator='S_X')


def test_derived_tables():

    stencils = StencilSet(max_valence=6)
    derive_constrained_stencils(stencils, valences=[3, 4, 6], boundary_valences=[1, 2, 3], rings=3)
    assert max(stencils.residuals.values()) <= 1e-10
    assert ('S_E', 6, 'even', False) in stencils.tables
    assert ('S_F', 2, 'odd', True) in stencils.tables
    assert all(entry['coefficient'] != 0.0 for entry in stencils.tables[('S_V', 6, 'odd', False)])
    assert len(stencils.tables[('S_V', 6, 'odd', False)]) == 4
    # corner child of a valence-3 vertex sees all three ring faces
    assert len(stencils.tables[('S_F', 3, 'even', False)]) == 3
    dump = stencils.dump()
    assert 'S_E/interior/6/even' in dump['tables']
    assert len(dump['valence4_edge_spectrum']) == 8
