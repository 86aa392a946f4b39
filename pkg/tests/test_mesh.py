import numpy as np
import pytest
from mesh import build_mesh, load_mesh, read_obj, load_obj, save_obj, quadrisect, avail_meshes
from utils import NonManifold, InconsistentOrientation, DegenerateFace, ParseError


def test_closed_mesh_counts(tetrahedron, octahedron, icosphere, torus):
    
    assert (tetrahedron.num_vertices, tetrahedron.num_edges, tetrahedron.num_faces) == (4, 6, 4)
    assert (octahedron.num_vertices, octahedron.num_edges, octahedron.num_faces) == (6, 12, 8)
    assert (icosphere.num_vertices, icosphere.num_faces) == (42, 80)
    for mesh in [tetrahedron, octahedron, icosphere]:
        assert mesh.is_closed
        assert mesh.euler_characteristic == 2
        assert mesh.genus == 0
    assert torus.euler_characteristic == 0
    assert torus.genus == 1


def test_edges_are_canonical_and_sided(icosphere):
    
    assert np.all(icosphere.edges[:, 0] < icosphere.edges[:, 1])
    for f in range(icosphere.num_faces):
        for i in range(3):
            e = icosphere.face_edges[f, i]
            a, b = icosphere.faces[f, i], icosphere.faces[f, (i + 1) % 3]
            s = icosphere.face_signs[f, i]
            assert (s > 0) == (a < b)
            assert icosphere.edge_faces[e, 0 if s > 0 else 1] == f


def test_vertex_rings_are_ccw(icosphere):
    
    for v in range(icosphere.num_vertices):
        ring = icosphere.rings[v]
        d = len(ring.faces)
        assert len(ring.neighbors) == d
        for k in range(d):
            shared = set(icosphere.faces[ring.faces[k - 1]]) & set(icosphere.faces[ring.faces[k]])
            assert shared == {v, ring.neighbors[k]}


def test_boundary_mesh(disk, flap):
    
    assert not disk.is_closed
    assert disk.boundary_loops == 1
    assert disk.valence[0] == 6
    assert not disk.rings[0].boundary
    assert flap.num_edges == 5
    assert int((~flap.boundary_edges).sum()) == 1
    ring = flap.rings[1]
    assert ring.boundary and len(ring.neighbors) == len(ring.faces) + 1


def test_angle_defect_sums_to_euler(icosphere, disk):
    assert abs(icosphere.angle_defect.sum() - 2 * np.pi * 2) < 1e-10
    assert abs(disk.angle_defect[0]) < 1e-12


def test_build_mesh_rejects_bad_input():
    
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=float)
    with pytest.raises(NonManifold):
        build_mesh(v, [[0, 1, 2], [1, 0, 3], [0, 1, 4]])
    with pytest.raises(InconsistentOrientation):
        build_mesh(v, [[0, 1, 2], [0, 1, 3]])
    with pytest.raises(DegenerateFace):
        build_mesh(v, [[0, 1, 1]])
    with pytest.raises(DegenerateFace):
        build_mesh([[0, 0, 0], [1, 0, 0], [2, 0, 0]], [[0, 1, 2]])
    with pytest.raises(NonManifold):
        build_mesh(v, [[0, 1, 7]])


def test_quadrisect_indexing(tetrahedron):
    
    fine, maps = quadrisect(tetrahedron)
    assert fine.num_vertices == 4 + 6
    assert fine.num_faces == 16
    assert fine.num_edges == 2 * 6 + 3 * 4
    for e, (a, b) in enumerate(tetrahedron.edges):
        m = 4 + e
        assert tuple(fine.edges[2 * e]) == (a, m)
        assert tuple(fine.edges[2 * e + 1]) == (m, b)
        assert np.allclose(fine.vertices[m], 0.5 * (tetrahedron.vertices[a] + tetrahedron.vertices[b]))
    assert np.allclose(fine.face_areas.reshape(-1, 4).sum(axis=1), tetrahedron.face_areas)
    assert fine.euler_characteristic == 2


def test_obj_round_trip(tmp_path, octahedron):
    
    path = save_obj(str(tmp_path / 'octa.obj'), octahedron)
    mesh = load_obj(path)
    assert np.array_equal(mesh.faces, octahedron.faces)
    assert np.allclose(mesh.vertices, octahedron.vertices)


def test_obj_polygons_and_negative_indices(tmp_path):
    
    path = tmp_path / 'quad.obj'
    path.write_text('v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf -4/1/1 -3/2/2 -2/3/3 -1/4/4\n')
    vertices, faces = read_obj(str(path))
    assert vertices.shape == (4, 3)
    assert faces.tolist() == [[0, 1, 2], [0, 2, 3]]


def test_obj_parse_error_has_line_number(tmp_path):
    
    path = tmp_path / 'bad.obj'
    path.write_text('v 0 0 0\nv 1 0 0\nv x 1 0\nf 1 2 3\n')
    with pytest.raises(ParseError) as err:
        read_obj(str(path))
    assert err.value.line_no == 3


def test_load_mesh_registry():
    
    assert load_mesh('icosphere:2').num_faces == 320
    assert load_mesh('torus.obj').num_faces == load_mesh('torus').num_faces
    assert load_mesh('icosahedron.obj').num_faces == 20
    assert 'flap' in avail_meshes
    with pytest.raises(ValueError):
        load_mesh('klein_bottle')
    with pytest.raises(FileNotFoundError):
        load_mesh('missing/shape.obj')
