import json
import numpy as np
import pytest
import main as cli
from mesh import load_mesh
from halfedge import write_gamma, read_gamma, d0_gamma, to_mean_curl, write_mean_curl, read_mean_curl, null_sum_residual


def run(tmp_path, *argv):
    args = cli.build_parser().parse_args(list(argv) + ['--out', str(tmp_path / 'out'), '--log-dir', str(tmp_path / 'logs')])
    return cli.main(args)


def test_level_zero_copies_the_field(tmp_path, rng):
    
    mesh = load_mesh('tetrahedron')
    src = write_gamma(str(tmp_path / 'input.gamma'), rng.randn(2 * mesh.num_faces))
    code = run(tmp_path, 'subdivide', '--mesh', 'tetrahedron', '--level', '0', '--field', src, '--run-name', 'copy')
    assert code == 0
    out = tmp_path / 'out' / 'copy'
    assert (out / 'field_l0.gamma').read_bytes() == open(src, 'rb').read()
    assert (out / 'mesh_l0.obj').exists()
    report = json.loads((out / 'report.json').read_text())
    assert report['passed'] and all(v == 0.0 for v in report['residuals'].values())
    logs = list((tmp_path / 'logs' / 'copy').iterdir())
    assert len(logs) == 1 and logs[0].name.startswith('subdivide.log-')
    assert 'Level 0' in logs[0].read_text()


def test_subdivide_writes_fine_outputs(tmp_path):
    
    code = run(tmp_path, 'subdivide', '--mesh', 'tetrahedron', '--level', '1', '--run-name', 'tet', '--format', 'csv')
    assert code == 0
    out = tmp_path / 'out' / 'tet'
    fine = load_mesh(str(out / 'mesh_l1.obj'))
    assert fine.num_faces == 16
    assert read_gamma(str(out / 'field_l1.gamma'), fine).shape == (32,)
    assert (out / 'report.csv').exists()


def test_subdivide_reads_mean_curl_fields(tmp_path, rng):
    
    mesh = load_mesh('octahedron')
    form = to_mean_curl(mesh, d0_gamma(mesh) @ rng.randn(mesh.num_vertices))
    src = write_mean_curl(str(tmp_path / 'input.meancurl'), form)
    code = run(tmp_path, 'subdivide', '--mesh', 'octahedron', '--level', '1', '--field', src, '--run-name', 'oct')
    assert code == 0
    out = tmp_path / 'out' / 'oct'
    fine = load_mesh(str(out / 'mesh_l1.obj'))
    assert null_sum_residual(fine, read_mean_curl(str(out / 'field_l1.meancurl'), fine)) <= 1e-12
    
    broken = form._replace(z1=form.z1 + 1.0)
    write_mean_curl(src, broken)
    assert run(tmp_path, 'subdivide', '--mesh', 'octahedron', '--level', '1', '--field', src, '--run-name', 'broken') == 1


def test_malformed_constraints_exit_with_error(tmp_path):
    
    bad = tmp_path / 'constraints.txt'
    bad.write_text('0 1 0 0\n1 one 0 0\n')
    code = run(tmp_path, 'design', '--mesh', 'icosphere:1', '--level', '1', '--constraints', str(bad))
    assert code == 1


def test_invalid_level_is_a_config_error(tmp_path):
    assert run(tmp_path, 'subdivide', '--level', '-1') == 1


def test_missing_mesh_file(tmp_path):
    assert run(tmp_path, 'subdivide', '--mesh', str(tmp_path / 'missing.obj'), '--level', '1') == 1


def test_stencil_dump(tmp_path):
    
    code = run(tmp_path, 'stencil', 'dump', '--run-name', 'stencils')
    assert code == 0
    dump = json.loads((tmp_path / 'out' / 'stencils' / 'stencils.json').read_text())
    assert 'zeta' not in dump
    assert dump['valence4_edge_spectrum'] == pytest.approx([1 / 4, 3 / 16, 3 / 16, 1 / 8, 1 / 8, 1 / 8, 1 / 16, 1 / 16], abs=1e-12)
    assert max(dump['system_residuals'].values()) <= 1e-10


def test_design_command(tmp_path):
    
    constraints = tmp_path / 'constraints.txt'
    mesh = load_mesh('octahedron')
    e = mesh.geometry['edges']
    rows = [(0, e[0, 0]), (5, e[5, 1])]
    constraints.write_text(''.join('%d %.17g %.17g %.17g\n' % ((f,) + tuple(v)) for f, v in rows))
    code = run(tmp_path, 'design', '--mesh', 'octahedron', '--level', '1', '--constraints', str(constraints), '--run-name', 'design')
    assert code == 0
    out = tmp_path / 'out' / 'design'
    assert read_gamma(str(out / 'design_l0.gamma'), mesh).shape == (16,)
    report = json.loads((out / 'report.json').read_text())
    assert report['constrained_faces'] == 2


def test_hodge_command_on_torus(tmp_path):
    
    code = run(tmp_path, 'hodge', '--mesh', 'torus', '--level', '1', '--run-name', 'hodge')
    assert code == 0
    out = tmp_path / 'out' / 'hodge'
    report = json.loads((out / 'report.json').read_text())
    assert report['harmonic/dimension'] == 2
    for name in ['exact', 'coexact', 'harmonic']:
        assert (out / ('%s.gamma' % name)).exists()
    assert np.loadtxt(str(out / 'potential.txt')).shape == (load_mesh('torus').num_vertices,)


def test_experiment_command(tmp_path):
    
    code = run(tmp_path, 'experiment', 'operator-error', '--mesh', 'octahedron', '--level', '2', '--run-name', 'op')
    assert code == 0
    out = tmp_path / 'out' / 'op'
    assert (out / 'operator_error.png').exists()
    report = json.loads((out / 'report.json').read_text())
    assert [r['level'] for r in report['records']] == [0, 1, 2]
    assert run(tmp_path, 'experiment', 'nonsense', '--mesh', 'octahedron') == 1


def test_unknown_config_key(tmp_path):
    
    cfg = tmp_path / 'bad.yaml'
    cfg.write_text('SUBDIVISION:\n  DEPTH: 2\n')
    assert run(tmp_path, 'subdivide', '--config-file', str(cfg)) == 1


def test_print_configs_lists_overrides(capsys):

    args = cli.build_parser().parse_args(['subdivide', '--mesh', 'octahedron', '--level', '2'])
    cli.print_configs(args, cli.setup_config(args))
    out = capsys.readouterr().out
    assert 'Command-line overrides for subdivide' in out
    assert 'level = 2' in out and 'mesh = octahedron' in out
    assert 'command =' not in out
    assert 'LEVEL: 2' in out
