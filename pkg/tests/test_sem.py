import numpy as np
import pytest
from operators import mass_vertex, mass_edge
from halfedge import d0_gamma, curl_gamma, mass_gamma, to_gamma
from mesh import load_mesh
from sem import (
    SemContext,
    restrict_mass,
    sem_operators,
    two_path_residual,
    sem_hodge_decompose,
    hodge_spectrum,
    sem_hodge_spectrum,
    fem_hodge_spectrum,
    spectrum_residuals,
    sample_field,
    solve_hodge_system,
    sem_solve,
    fit_slope,
    projection_error_experiment,
    operator_error_experiment,
    spectrum_experiment,
    avail_experiments,
    read_constraints,
    constraints_to_gamma,
    sem_energy,
    design_field
)
from utils import BoundaryMeshUnsupported, EmptyConstraints, ParseError


@pytest.fixture(scope='module')
def octahedron_ctx(octahedron, stencils):
    return SemContext.from_mesh(octahedron, 1, stencils)


@pytest.fixture(scope='module')
def deep_ctx(stencils):
    return SemContext.from_mesh(load_mesh('icosphere:0'), 4, stencils)


def test_unrefined_context_is_plain_fem(octahedron):
    
    ctx = SemContext(octahedron, [])
    assert ctx.level == 0 and ctx.fine is octahedron
    assert np.abs(ctx.masses['Gamma'] - mass_gamma(octahedron).matrix).max() == 0.0
    assert np.abs(ctx.masses['V'] - mass_vertex(octahedron).matrix).max() == 0.0
    assert np.abs(ctx.masses['E'] - mass_edge(octahedron).matrix).max() == 0.0


def test_restricted_masses(icosphere_ctx, rng):
    
    ctx = icosphere_ctx
    for space in ['Gamma', 'V', 'E']:
        M = restrict_mass(ctx, space)
        assert M.name == 'M0_' + space
        assert abs(M.matrix - M.matrix.T).max() < 1e-12
    
    gamma = rng.randn(2 * ctx.coarse.num_faces)
    fine = ctx.subdivide(gamma)
    lhs = gamma @ (ctx.masses['Gamma'] @ gamma)
    assert lhs == pytest.approx(fine @ (mass_gamma(ctx.fine).matrix @ fine), rel=1e-12)
    assert lhs > 0
    with pytest.raises(ValueError):
        restrict_mass(ctx, 'X')


def test_sub_contexts(icosphere_ctx):
    
    ctx = icosphere_ctx
    assert ctx.sub_context(0) is ctx
    top = ctx.sub_context(ctx.level)
    assert top.level == 0 and top.coarse is ctx.fine
    mid = ctx.sub_context(1)
    assert mid.level == 1 and mid.coarse is ctx.sets[1].coarse and mid.fine is ctx.fine
    assert ctx.fem_context().fine is ctx.coarse


def test_two_path_divergence(icosphere_ctx, torus_ctx, rng):
    
    for ctx in [icosphere_ctx, torus_ctx]:
        gamma = rng.randn(2 * ctx.coarse.num_faces)
        assert two_path_residual(ctx, gamma) <= 1e-10


def test_sem_exact_sequence(icosphere_ctx, rng):
    
    ops = sem_operators(icosphere_ctx)
    f = rng.randn(icosphere_ctx.coarse.num_vertices)
    assert np.abs(ops['C_gamma'] @ (ops['d0_gamma'] @ f)).max() < 1e-12
    
    # M^-1 C^T x is divergence-free in the SEM sense
    x = rng.randn(icosphere_ctx.coarse.num_edges)
    y = ops['L_E'] @ x
    coexact = np.linalg.solve(ops['M_gamma'].toarray(), ops['C_gamma'].T @ x)
    assert np.abs(ops['D_gamma'] @ coexact).max() <= 1e-10 * np.linalg.norm(ops['C_gamma'].T @ x)
    assert np.abs(y - ops['C_gamma'] @ coexact).max() < 1e-10 * np.linalg.norm(y)


def test_sem_laplacian_is_divergence_of_gradient(icosphere_ctx):
    
    ops = sem_operators(icosphere_ctx)
    expected = (ops['d0_gamma'].T @ ops['M_gamma'] @ ops['d0_gamma'])
    assert np.abs((ops['L_V'] - expected).toarray()).max() < 1e-12


def test_sem_hodge_decomposition(torus_ctx, icosphere_ctx, rng):
    
    gamma = rng.randn(2 * torus_ctx.coarse.num_faces)
    report = sem_hodge_decompose(torus_ctx, gamma).report
    assert report['harmonic/dimension'] == 2
    assert report['residual/reconstruction'] < 1e-8
    assert report['orthogonality/exact_coexact'] < 1e-8
    assert report['fine_div/coexact/restricted'] <= 1e-8
    assert report['fine_div/harmonic/restricted'] <= 1e-8
    assert report['residual/two_path'] <= 1e-10
    
    gamma, _ = sample_field(icosphere_ctx.coarse)
    report = sem_hodge_decompose(icosphere_ctx, gamma).report
    assert report['harmonic/dimension'] == 0
    assert report['fine_div/coexact/restricted'] <= 1e-8


def test_sem_hodge_needs_closed_mesh(flap, stencils):
    
    ctx = SemContext.from_mesh(flap, 1, stencils)
    with pytest.raises(BoundaryMeshUnsupported):
        sem_hodge_decompose(ctx, np.zeros(2 * flap.num_faces))
    with pytest.raises(BoundaryMeshUnsupported):
        sem_hodge_spectrum(ctx)


def test_spectrum_eigenpairs(torus_ctx):
    
    spectrum = sem_hodge_spectrum(torus_ctx, count=12)
    assert spectrum.harmonic_dim == 2
    assert spectrum.kinds[:2] == ['harmonic', 'harmonic']
    assert np.all(spectrum.values[:2] == 0.0)
    assert np.all(np.diff(spectrum.values) >= 0.0)
    assert len(spectrum.values) == 12
    residuals = spectrum_residuals(torus_ctx, spectrum)
    assert max(residuals['exact'] + residuals['coexact']) <= 1e-8


def test_dense_and_sparse_spectra_agree(octahedron_ctx):
    
    mesh = octahedron_ctx.fine
    args = (d0_gamma(mesh).matrix, curl_gamma(mesh).matrix, mass_gamma(mesh).matrix,
            mass_vertex(mesh).matrix, mass_edge(mesh).matrix)
    dense = hodge_spectrum(*args, count=6, harmonic=False)
    sparse = hodge_spectrum(*args, count=6, dense_limit=10, harmonic=False)
    assert dense.values == pytest.approx(sparse.values, rel=1e-6)


def test_hodge_system_solution(octahedron_ctx, rng):
    
    mesh = octahedron_ctx.coarse
    b = rng.randn(2 * mesh.num_faces)
    M = octahedron_ctx.masses
    gamma = sem_solve(octahedron_ctx, b)
    direct = solve_hodge_system(d0_gamma(mesh).matrix, curl_gamma(mesh).matrix, M['Gamma'], M['V'], M['E'], b)
    assert np.array_equal(gamma, direct)
    L = sem_operators(octahedron_ctx)['L_gamma']
    assert np.linalg.norm(L @ gamma - b) <= 1e-8 * np.linalg.norm(b)


def test_fit_slope():
    
    h = np.array([1.0, 0.5, 0.25])
    assert fit_slope(h, 3.0 * h ** 2) == pytest.approx(2.0)
    assert np.isnan(fit_slope(h, [0.0, 0.0, 1.0]))


def test_projection_error_vanishes_at_finest_level(icosphere_ctx):
    
    result = avail_experiments['projection-error'](icosphere_ctx, 'smooth')
    assert result['level'] == 2
    assert [r['level'] for r in result['records']] == [0, 1, 2]
    last = result['records'][-1]
    assert last['sem/L2'] <= 1e-12 and last['fem/L2'] <= 1e-12
    first = result['records'][0]
    assert first['sem/L2'] > 0 and first['h'] > last['h']
    assert set(result['slopes']) == {'sem/L2', 'sem/Linf', 'sem/curl_L2', 'fem/L2', 'fem/Linf', 'fem/curl_L2'}


def test_operator_error_vanishes_for_full_restriction(icosphere_ctx):
    
    result = operator_error_experiment(icosphere_ctx, 'swirl')
    assert result['records'][-1]['L2'] <= 1e-12
    assert result['records'][0]['L2'] > 0


def test_sem_projection_beats_fem(deep_ctx):

    result = projection_error_experiment(deep_ctx, 'smooth')
    for record in result['records'][:-1]:
        assert record['sem/L2'] <= record['fem/L2']
    assert 1.5 <= -result['slopes']['sem/L2'] <= 3.0


def test_operator_error_plateaus(deep_ctx):

    errors = [r['L2'] for r in operator_error_experiment(deep_ctx, 'smooth')['records']]
    assert errors[0] > errors[1] > errors[2]
    # error is against the k = l solution, so the last step is the plateau
    assert errors[3] < 0.1 * errors[0]
    assert errors[4] <= 1e-12


def test_spectrum_experiment(octahedron_ctx):
    
    result = spectrum_experiment(octahedron_ctx, count=6)
    assert len(result['records']) == 6
    assert result['harmonic/sem'] == result['harmonic/fem'] == result['harmonic/fine'] == 0
    for record in result['records']:
        assert record['sem'] > 0 and record['fem'] > 0
    assert 0.0 <= result['sem_better_share'] <= 1.0
    with pytest.raises(ValueError):
        sample_field(octahedron_ctx.coarse, 'vortex')


def test_constraint_files(icosphere, tmp_path):
    
    path = tmp_path / 'constraints.txt'
    path.write_text('# face x y z\n3 1 0 0\n\n10 0 1 0  # second\n')
    constraints = read_constraints(str(path), icosphere)
    assert sorted(constraints) == [3, 10]
    assert np.array_equal(constraints[10], [0.0, 1.0, 0.0])
    
    path.write_text('3 1 0 0\n4 1 0\n')
    with pytest.raises(ParseError) as err:
        read_constraints(str(path))
    assert err.value.line_no == 2
    path.write_text('999 1 0 0\n')
    with pytest.raises(ParseError):
        read_constraints(str(path), icosphere)


def test_design_passes_full_constraints_through(octahedron_ctx, rng):
    
    mesh = octahedron_ctx.coarse
    vectors = rng.randn(mesh.num_faces, 3)
    constraints = {f: vectors[f] for f in range(mesh.num_faces)}
    gamma, fine, report = design_field(octahedron_ctx, constraints)
    expected, _ = to_gamma(mesh, vectors)
    assert np.abs(gamma - expected).max() < 1e-14
    assert np.abs(fine - octahedron_ctx.subdivide(gamma)).max() == 0.0
    assert report['constrained_faces'] == mesh.num_faces
    assert report['projection_residual'] > 0


def test_design_minimizes_energy(icosphere_ctx):
    
    mesh = icosphere_ctx.coarse
    edges = mesh.geometry['edges']
    constraints = {0: edges[0, 0], 40: edges[40, 1]}
    gamma, fine, report = design_field(icosphere_ctx, constraints)
    
    faces, values, residual = constraints_to_gamma(mesh, constraints)
    assert residual < 1e-12
    assert np.abs(gamma.reshape(-1, 2)[faces].ravel() - values).max() == 0.0
    zero_extension = np.zeros_like(gamma)
    zero_extension.reshape(-1, 2)[faces] = values.reshape(-1, 2)
    assert report['energy'] <= sem_energy(icosphere_ctx, zero_extension) + 1e-12
    assert report['energy'] == pytest.approx(sem_energy(icosphere_ctx, gamma))
    assert fine.shape == (2 * icosphere_ctx.fine.num_faces,)
    
    with pytest.raises(EmptyConstraints):
        design_field(icosphere_ctx, {})


def test_poisson_experiments_need_a_sphere(torus_ctx, flap, stencils):
    
    with pytest.raises(ValueError, match='genus-0'):
        projection_error_experiment(torus_ctx)
    with pytest.raises(BoundaryMeshUnsupported):
        operator_error_experiment(SemContext.from_mesh(flap, 1, stencils))


def test_sem_spectrum_tracks_fine_mesh(icosphere_ctx):

    result = spectrum_experiment(icosphere_ctx, count=20)
    assert result['harmonic/sem'] == result['harmonic/fine'] == 0
    assert result['sem_better_share'] >= 0.6
