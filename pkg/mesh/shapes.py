import os.path as osp
import numpy as np
from scipy.spatial import ConvexHull
from .mesh import build_mesh
from .refine import quadrisect
from .io import load_obj

MESH_DIR = osp.join(osp.dirname(osp.dirname(osp.abspath(__file__))), 'meshes')


def __hull__(points):
    
    points = np.asarray(points, dtype=float)
    faces = ConvexHull(points).simplices.copy()
    
    # outward orientation
    p = points[faces]
    normals = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    flip = (normals * (p.mean(axis=1) - points.mean(axis=0))).sum(axis=1) < 0
    faces[flip] = faces[flip][:, ::-1]
    return build_mesh(points, faces)

def tetrahedron():
    return __hull__([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])

def octahedron():
    return __hull__([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])

def icosahedron():
    
    phi = 0.5 * (1 + np.sqrt(5))
    points = []
    for a in (-1, 1):
        for b in (-phi, phi):
            points += [[0, a, b], [a, b, 0], [b, 0, a]]
    points = np.array(points) / np.sqrt(1 + phi ** 2)
    return __hull__(points)

def icosphere(level=1):
    
    mesh = icosahedron()
    for _ in range(int(level)):
        mesh, _ = quadrisect(mesh)
        mesh = mesh.with_vertices(mesh.vertices / np.linalg.norm(mesh.vertices, axis=1, keepdims=True))
    # canonical low -> high edges for a base mesh
    return build_mesh(mesh.vertices, mesh.faces)

def torus(n_major=12, n_minor=8, major_radius=1.0, minor_radius=0.4):
    
    n_major, n_minor = int(n_major), int(n_minor)
    theta = 2 * np.pi * np.arange(n_major) / n_major
    phi = 2 * np.pi * np.arange(n_minor) / n_minor
    th, ph = np.meshgrid(theta, phi, indexing='ij')
    ring = major_radius + minor_radius * np.cos(ph)
    vertices = np.stack([ring * np.cos(th), ring * np.sin(th), minor_radius * np.sin(ph)], axis=-1).reshape(-1, 3)
    
    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a = i * n_minor + j
            b = ((i + 1) % n_major) * n_minor + j
            c = ((i + 1) % n_major) * n_minor + (j + 1) % n_minor
            d = i * n_minor + (j + 1) % n_minor
            faces += [[a, b, c], [a, c, d]]
    return build_mesh(vertices, faces)

def disk(rings=1, sides=6):
    """Planar fan around the origin, refined ``rings - 1`` times."""
    
    sides = int(sides)
    angles = 2 * np.pi * np.arange(sides) / sides
    vertices = np.concatenate([[[0, 0, 0]], np.stack([np.cos(angles), np.sin(angles), 0 * angles], axis=1)])
    faces = [[0, 1 + s, 1 + (s + 1) % sides] for s in range(sides)]
    mesh = build_mesh(vertices, faces)
    for _ in range(int(rings) - 1):
        mesh, _ = quadrisect(mesh)
    return build_mesh(mesh.vertices, mesh.faces)

def flap():
    """Two triangles sharing one edge, the smallest mesh with an interior edge."""
    return build_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], [[0, 1, 2], [2, 1, 3]])

def triangle():
    return build_mesh([[0, 0, 0], [1, 0, 0], [0.5, np.sqrt(3) / 2, 0]], [[0, 1, 2]])


avail_meshes = {
    'tetrahedron': tetrahedron,
    'octahedron': octahedron,
    'icosahedron': icosahedron,
    'icosphere': icosphere,
    'torus': torus,
    'disk': disk,
    'flap': flap,
    'triangle': triangle
}

def load_mesh(name, area_tol=1e-12):
    """Load an OBJ path, a file bundled under ``meshes/`` or a procedural
    shape written ``name[:arg[,arg...]]`` (e.g. ``icosphere:2``, ``torus:30,25``)."""
    
    if osp.exists(name):
        return load_obj(name, area_tol)
    if osp.exists(osp.join(MESH_DIR, name)):
        return load_obj(osp.join(MESH_DIR, name), area_tol)
    
    if name.endswith('.obj'):
        raise FileNotFoundError('No mesh file %s' % name)
    key, _, args = name.partition(':')
    if key not in avail_meshes:
        raise ValueError('Only OBJ files and the bundled meshes %s are supported.' % ', '.join(sorted(avail_meshes)))
    args = [float(a) if '.' in a else int(a) for a in args.split(',') if a]
    return avail_meshes[key](*args)
