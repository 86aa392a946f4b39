import numpy as np
from halfedge import to_gamma


def smooth_field(points):
    """(sin(pi x) y, sin(pi x y) / r^2, cos(pi z) + x^2 + y^2)."""
    
    x, y, z = points.T
    r2 = x ** 2 + y ** 2 + z ** 2
    r2 = np.where(r2 > 1e-12, r2, 1.0)
    return np.stack([np.sin(np.pi * x) * y, np.sin(np.pi * x * y) / r2, np.cos(np.pi * z) + x ** 2 + y ** 2], axis=1)

def swirl_field(points):
    x, y, _ = points.T
    return np.stack([-y, x, np.zeros_like(x)], axis=1)

def constant_field(points):
    return np.tile([0.3, 0.5, 1.0], (points.shape[0], 1))


avail_fields = {
    'smooth': smooth_field,
    'swirl': swirl_field,
    'constant': constant_field
}


def sample_field(mesh, name='smooth'):
    """Procedural field at face barycenters, tangent-projected and packed. Returns ``(gamma, normal residual)``."""
    
    if name not in avail_fields:
        raise ValueError('Only %s fields are available.' % ', '.join(sorted(avail_fields)))
    return to_gamma(mesh, avail_fields[name](mesh.face_centroids))
