import numpy as np
from halfedge import to_gamma, to_vectors
from utils.exceptions import DimensionMismatch


class DirectionalField:
    """N ordered tangent vectors per face plus an integer matching per edge.

    ``matching[e]`` sends vector ``k`` of the left face of ``e`` to vector
    ``k + matching[e]`` of the right face; values are kept modulo ``N`` and
    are zero on boundary edges.
    """
    
    def __init__(self, mesh, vectors, matching=None, tol=1e-10):
        
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim == 2:
            vectors = vectors[:, None, :]
        if vectors.shape[0] != mesh.num_faces or vectors.shape[2] != 3:
            raise DimensionMismatch('Directional field must be |F| x N x 3, found %s for %d faces' % (vectors.shape, mesh.num_faces))
        self.N = vectors.shape[1]
        
        if matching is None:
            matching = np.zeros(mesh.num_edges, dtype=np.int64)
        matching = np.asarray(matching, dtype=np.int64)
        if matching.shape != (mesh.num_edges,):
            raise DimensionMismatch('Matching has %d entries, mesh has %d edges' % (matching.size, mesh.num_edges))
        self.matching = np.where(mesh.boundary_edges, 0, np.mod(matching, self.N))
        
        normal = np.einsum('fkc,fc->fk', vectors, mesh.face_normals)
        self.tangent_residual = float(np.max(np.abs(normal) / np.maximum(np.linalg.norm(vectors, axis=2), 1e-300))) if vectors.size else 0.0
        self.vectors = vectors - normal[:, :, None] * mesh.face_normals[:, None, :]
        self.tol = tol
    
    @classmethod
    def from_gamma(cls, mesh, gammas, matching=None):
        """Field from per-branch packed forms, ``gammas`` of shape ``(N, 2|F|)`` or branch-major flat."""
        
        gammas = np.asarray(gammas, dtype=float).reshape(-1, 2 * mesh.num_faces)
        vectors = np.stack([to_vectors(mesh, g) for g in gammas], axis=1)
        return cls(mesh, vectors, matching)
    
    def to_gamma(self, mesh):
        """Branch-major packed forms, ``(N, 2|F|)``."""
        return np.stack([to_gamma(mesh, self.vectors[:, k])[0] for k in range(self.N)])
    
    def permuted(self, offsets, mesh):
        """Re-index faces: new vector ``i`` of face ``f`` is old vector ``i + offsets[f]``.

        The matching is updated so the field itself is unchanged.
        """
        
        offsets = np.mod(np.asarray(offsets, dtype=np.int64), self.N)
        idx = np.mod(np.arange(self.N)[None, :] + offsets[:, None], self.N)
        vectors = np.take_along_axis(self.vectors, idx[:, :, None], axis=1)
        left, right = mesh.edge_faces[:, 0], mesh.edge_faces[:, 1]
        inner = ~mesh.boundary_edges
        matching = self.matching.copy()
        matching[inner] = self.matching[inner] + offsets[left[inner]] - offsets[right[inner]]
        out = DirectionalField.__new__(DirectionalField)
        out.N, out.vectors, out.tol, out.tangent_residual = self.N, vectors, self.tol, self.tangent_residual
        out.matching = np.where(mesh.boundary_edges, 0, np.mod(matching, self.N))
        return out
    
    def __repr__(self):
        return 'DirectionalField(N=%d, faces=%d)' % (self.N, self.vectors.shape[0])
