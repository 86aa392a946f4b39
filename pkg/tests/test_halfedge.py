import numpy as np
import pytest
from operators import curl, mass_x, mass_one_form, d0, gradient_vertex
from halfedge import (
    MeanCurlForm,
    project_P,
    project_P_inv,
    d0_gamma,
    curl_gamma,
    mass_gamma,
    mass_gamma_inv,
    block_inverse,
    div_gamma,
    mean_curl_operator,
    mean_curl_operator_inv,
    to_mean_curl,
    from_mean_curl,
    null_sum_residual,
    to_gamma,
    to_vectors,
    dec_divergence_defect,
    hodge_decompose_gamma,
    harmonic_basis,
    harmonic_threshold,
    read_gamma,
    write_gamma,
    read_mean_curl,
    write_mean_curl
)
from utils import BrokenNullSum, BoundaryMeshUnsupported, DimensionMismatch, ParseError


def __tangent_field__(mesh, rng):
    
    v = rng.randn(mesh.num_faces, 3)
    n = mesh.face_normals
    return v - (v * n).sum(axis=1)[:, None] * n


def test_projection_pair(icosphere, flap, rng):
    
    for mesh in [icosphere, flap]:
        P, Pinv = project_P(mesh), project_P_inv(mesh)
        assert np.abs((P @ Pinv).toarray() - np.eye(2 * mesh.num_faces)).max() < 1e-12
        v = __tangent_field__(mesh, rng)
        assert np.abs(to_vectors(mesh, to_gamma(mesh, v)[0]) - v).max() < 1e-12


def test_to_gamma_reports_normal_component(tetrahedron):
    
    gamma, residual = to_gamma(tetrahedron, tetrahedron.face_normals)
    assert residual == pytest.approx(1.0)
    assert np.abs(gamma).max() < 1e-12
    with pytest.raises(DimensionMismatch):
        to_gamma(tetrahedron, np.zeros((3, 3)))


def test_mass_gamma_is_pulled_back_face_mass(icosphere, flap):
    
    for mesh in [icosphere, flap]:
        Pinv = project_P_inv(mesh)
        pulled = (Pinv.T @ mass_x(mesh) @ Pinv).toarray()
        assert np.abs(mass_gamma(mesh).toarray() - pulled).max() < 1e-12


def test_mass_gamma_inverse(icosphere):
    
    M = mass_gamma(icosphere)
    eye = np.eye(2 * icosphere.num_faces)
    assert np.abs((mass_gamma_inv(icosphere) @ M).toarray() - eye).max() < 1e-10
    assert np.abs((block_inverse(M.matrix) @ M.matrix).toarray() - eye).max() < 1e-10


def test_curl_gamma_kills_gradients(icosphere, flap, torus, rng):
    
    for mesh in [icosphere, flap, torus]:
        f = rng.randn(mesh.num_vertices)
        assert np.abs(curl_gamma(mesh) @ (d0_gamma(mesh) @ f)).max() < 1e-12


def test_gradient_line_integrals(icosphere, rng):
    
    f = rng.randn(icosphere.num_vertices)
    gamma, _ = to_gamma(icosphere, (gradient_vertex(icosphere) @ f).reshape(-1, 3))
    assert np.abs(gamma - d0_gamma(icosphere) @ f).max() < 1e-10


def test_curl_gamma_matches_face_curl(icosphere, torus, rng):
    
    for mesh in [icosphere, torus]:
        v = __tangent_field__(mesh, rng)
        gamma, _ = to_gamma(mesh, v)
        assert np.abs(curl_gamma(mesh) @ gamma - curl(mesh) @ v.ravel()).max() < 1e-10


def test_mean_curl_round_trip(icosphere, flap, rng):
    
    for mesh in [icosphere, flap]:
        W, Winv = mean_curl_operator(mesh), mean_curl_operator_inv(mesh)
        assert np.abs((Winv @ W).toarray() - np.eye(2 * mesh.num_faces)).max() < 1e-12
        
        gamma = rng.randn(2 * mesh.num_faces)
        form = to_mean_curl(mesh, gamma)
        assert null_sum_residual(mesh, form) < 1e-12
        assert np.abs(form.eps[mesh.boundary_edges]).max(initial=0.0) == 0.0
        assert np.abs(from_mean_curl(mesh, form) - gamma).max() < 1e-12


def test_broken_null_sum_is_rejected(icosphere, rng):
    
    form = to_mean_curl(icosphere, rng.randn(2 * icosphere.num_faces))
    broken = MeanCurlForm(form.z1 + rng.randn(icosphere.num_edges), form.eps)
    assert null_sum_residual(icosphere, broken) > 1e-3
    with pytest.raises(BrokenNullSum):
        from_mean_curl(icosphere, broken)


def test_divergence_splits_into_dec_terms(icosphere, flap, rng):
    
    for mesh in [icosphere, flap]:
        gamma = rng.randn(2 * mesh.num_faces)
        form = to_mean_curl(mesh, gamma)
        lhs = div_gamma(mesh) @ gamma
        D0 = d0(mesh)
        rhs = D0.T @ (mass_one_form(mesh) @ form.z1) + dec_divergence_defect(mesh) @ form.eps
        assert np.abs(lhs - rhs).max() < 1e-10


def test_hodge_decomposition_on_torus(torus, rng):
    
    gamma = rng.randn(2 * torus.num_faces)
    result = hodge_decompose_gamma(torus, gamma)
    report = result.report
    assert report['harmonic/dimension'] == 2
    assert report['harmonic/expected'] == 2
    assert report['residual/reconstruction'] < 1e-8
    for key in ['orthogonality/exact_coexact', 'orthogonality/exact_harmonic', 'orthogonality/coexact_harmonic']:
        assert report[key] < 1e-8
    assert report['norm/harmonic'] > 1e-6 * report['norm/total']
    assert np.abs(result.eps - 0.5 * (curl_gamma(torus) @ gamma)).max() < 1e-12


def test_hodge_decomposition_on_sphere_has_no_harmonic_part(icosphere, rng):
    
    gamma = rng.randn(2 * icosphere.num_faces)
    result = hodge_decompose_gamma(icosphere, gamma)
    assert result.report['harmonic/dimension'] == 0
    assert result.report['norm/harmonic'] < 1e-8 * result.report['norm/total']


def test_hodge_decomposition_of_a_gradient(icosphere, rng):
    
    f = rng.randn(icosphere.num_vertices)
    gamma = d0_gamma(icosphere) @ f
    result = hodge_decompose_gamma(icosphere, gamma)
    report = result.report
    assert report['norm/coexact'] < 1e-8 * report['norm/total']
    assert report['norm/harmonic'] < 1e-8 * report['norm/total']
    assert np.abs(d0_gamma(icosphere) @ result.f - gamma).max() < 1e-8


def test_harmonic_basis_is_closed_and_coclosed(torus):
    
    basis = harmonic_basis(torus)
    assert basis.shape == (2 * torus.num_faces, 2)
    M = mass_gamma(torus).matrix
    assert np.abs(basis.T @ (M @ basis) - np.eye(2)).max() < 1e-8
    assert np.abs(curl_gamma(torus) @ basis).max() < 1e-6
    assert np.abs(div_gamma(torus) @ basis).max() < 1e-6


def test_hodge_decomposition_needs_closed_mesh(flap):
    with pytest.raises(BoundaryMeshUnsupported):
        hodge_decompose_gamma(flap, np.zeros(2 * flap.num_faces))


def test_gamma_files(icosphere, rng, tmp_path):
    
    gamma = rng.randn(2 * icosphere.num_faces)
    path = write_gamma(str(tmp_path / 'field.gamma'), gamma)
    assert np.array_equal(read_gamma(path, icosphere), gamma)
    
    form = to_mean_curl(icosphere, gamma)
    path = write_mean_curl(str(tmp_path / 'field.meancurl'), form)
    back = read_mean_curl(path, icosphere)
    assert np.array_equal(back.z1, form.z1) and np.array_equal(back.eps, form.eps)
    
    with pytest.raises(DimensionMismatch):
        read_gamma(write_gamma(str(tmp_path / 'short.gamma'), gamma[:-2]), icosphere)


def test_gamma_file_errors(tmp_path):
    
    bad = tmp_path / 'bad.gamma'
    bad.write_text('GAMMA 2\n1 2\n3 x\n')
    with pytest.raises(ParseError) as err:
        read_gamma(str(bad))
    assert err.value.line_no == 3
    
    bad.write_text('# comment\nGAMMA 3\n1 2\n3 4\n')
    with pytest.raises(ParseError):
        read_gamma(str(bad))
    
    bad.write_text('MEANCURL 1\n1 2\n')
    with pytest.raises(ParseError) as err:
        read_gamma(str(bad))
    assert err.value.line_no == 1


def test_gamma_divergence_matches_conforming_divergence(icosphere, rng):
    
    from operators import divergence
    v = __tangent_field__(icosphere, rng)
    gamma, _ = to_gamma(icosphere, v)
    assert np.abs(div_gamma(icosphere) @ gamma - divergence(icosphere) @ v.ravel()).max() < 1e-10


def test_harmonic_threshold_ignores_inflated_top():

    vals = np.array([1e-9, 3e-6, 0.5, 0.8, 1.2, 2.0, 5.0, 3e11])
    cut = harmonic_threshold(np.median(np.abs(vals)), vals[-1])
    assert (vals < cut).sum() == 2
    assert vals[-1] * 1e-8 > vals[2]
    assert harmonic_threshold(1.0, 0.0) == pytest.approx(1e-8)


def test_hodge_reports_genus_match(torus, rng):

    gamma = rng.randn(2 * torus.num_faces)
    result = hodge_decompose_gamma(torus, gamma)
    assert result.report['harmonic/dimension'] == result.report['harmonic/expected'] == 2
