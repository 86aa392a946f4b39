import numpy as np
from collections import namedtuple
from utils.exceptions import NonManifold, InconsistentOrientation, DegenerateFace

# faces in CCW order around the vertex; neighbors[k] is shared by faces[k-1] and faces[k]
VertexRing = namedtuple('VertexRing', ['faces', 'neighbors', 'boundary'])


class Mesh:
    """Oriented 2-manifold triangle mesh with canonical edge orientations.

    Face-local edge ``i`` of face ``(p0, p1, p2)`` runs ``p_i -> p_{i+1}``.
    ``face_signs[f, i]`` is +1 when that halfedge traverses edge
    ``face_edges[f, i]`` in its canonical direction, i.e. when ``f`` is the
    left face of the edge. ``edge_faces[e]`` holds ``(left, right)`` with -1
    for a missing side.
    """

    def __init__(self, vertices, faces, edges, face_edges, face_signs, edge_faces, rings):
        
        self.vertices = vertices
        self.faces = faces
        self.edges = edges
        self.face_edges = face_edges
        self.face_signs = face_signs
        self.edge_faces = edge_faces
        self.rings = rings
        
        self.boundary_edges = (edge_faces < 0).any(axis=1)
        self.boundary_vertices = np.array([r.boundary for r in rings], dtype=bool)
        self._geometry = None
    
    @property
    def num_vertices(self):
        return self.vertices.shape[0]
    
    @property
    def num_edges(self):
        return self.edges.shape[0]
    
    @property
    def num_faces(self):
        return self.faces.shape[0]
    
    @property
    def is_closed(self):
        return not self.boundary_edges.any()
    
    @property
    def euler_characteristic(self):
        return self.num_vertices - self.num_edges + self.num_faces
    
    @property
    def valence(self):
        return np.array([len(r.neighbors) for r in self.rings])
    
    @property
    def boundary_loops(self):
        
        # boundary vertices have exactly one outgoing boundary halfedge
        nxt = {}
        for e in np.flatnonzero(self.boundary_edges):
            a, b = self.edges[e]
            left, right = self.edge_faces[e]
            if left >= 0:
                nxt[a] = b
            else:
                nxt[b] = a
        loops, seen = 0, set()
        for v in nxt:
            if v in seen:
                continue
            loops += 1
            while v not in seen:
                seen.add(v)
                v = nxt[v]
        return loops
    
    @property
    def genus(self):
        return (2 - self.euler_characteristic - self.boundary_loops) // 2
    
    def with_vertices(self, vertices):
        """Same connectivity, new positions."""
        
        return Mesh(
            np.asarray(vertices, dtype=float),
            self.faces,
            self.edges,
            self.face_edges,
            self.face_signs,
            self.edge_faces,
            self.rings
        )
    
    def vertex_ring(self, v):
        return self.rings[v]
    
    def vertex_faces(self, v):
        return self.rings[v].faces
    
    def edge_index(self, a, b):
        """Index and sign of the edge joining ``a`` and ``b`` (+1 if stored a -> b)."""
        
        if not hasattr(self, '_edge_lookup'):
            self._edge_lookup = {(int(i), int(j)): k for k, (i, j) in enumerate(self.edges)}
        if (a, b) in self._edge_lookup:
            return self._edge_lookup[(a, b)], 1
        return self._edge_lookup[(b, a)], -1
    
    @property
    def geometry(self):
        
        if self._geometry is None:
            self._geometry = face_geometry(self.vertices, self.faces)
        return self._geometry
    
    @property
    def face_areas(self):
        return self.geometry['areas']
    
    @property
    def face_normals(self):
        return self.geometry['normals']
    
    @property
    def cotangents(self):
        return self.geometry['cot']
    
    @property
    def face_centroids(self):
        return self.vertices[self.faces].mean(axis=1)
    
    @property
    def edge_vectors(self):
        return self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
    
    @property
    def mean_edge_length(self):
        return float(np.linalg.norm(self.edge_vectors, axis=1).mean())
    
    @property
    def angle_defect(self):
        
        total = np.zeros(self.num_vertices)
        np.add.at(total, self.faces.ravel(), self.geometry['angles'].ravel())
        full = np.where(self.boundary_vertices, np.pi, 2 * np.pi)
        return full - total
    
    def __repr__(self):
        return 'Mesh(V=%d, E=%d, F=%d, chi=%d, boundary_loops=%d)' % (
            self.num_vertices, self.num_edges, self.num_faces, self.euler_characteristic, self.boundary_loops)


def face_geometry(vertices, faces):
    """Per-face local edge vectors, normals, areas, corner angles and the
    cotangent of the angle opposite every local edge."""
    
    p = vertices[faces]
    evec = np.roll(p, -1, axis=1) - p
    cross = np.cross(evec[:, 0], evec[:, 1])
    dblarea = np.linalg.norm(cross, axis=1)
    normals = cross / np.where(dblarea > 0, dblarea, 1.0)[:, None]
    
    # corner i sits between -e_{i-1} and e_i
    a = evec
    b = -np.roll(evec, 1, axis=1)
    dots = (a * b).sum(axis=2)
    angles = np.arctan2(np.linalg.norm(np.cross(a, b), axis=2), dots)
    cot_corner = dots / np.where(dblarea > 0, dblarea, 1.0)[:, None]
    
    # local edge i is opposite corner i + 2
    cot = np.roll(cot_corner, -2, axis=1)
    
    return {
        'edges': evec,
        'normals': normals,
        'areas': 0.5 * dblarea,
        'angles': angles,
        'cot': cot
    }

def __vertex_rings__(num_vertices, faces):
    
    corners = [[] for _ in range(num_vertices)]
    for f, (i, j, k) in enumerate(faces.tolist()):
        corners[i].append((f, j, k))
        corners[j].append((f, k, i))
        corners[k].append((f, i, j))
    
    rings = []
    for v, cs in enumerate(corners):
        if not cs:
            raise NonManifold('Vertex %d is not referenced by any face' % v)
        by_next = {}
        for c in cs:
            if c[1] in by_next:
                raise NonManifold('Link of vertex %d is not a disk' % v)
            by_next[c[1]] = c
        prevs = set(c[2] for c in cs)
        starts = [c for c in cs if c[1] not in prevs]
        if len(starts) > 1:
            raise NonManifold('Link of vertex %d has %d boundary fans' % (v, len(starts)))
        boundary = len(starts) == 1
        cur = starts[0] if boundary else min(cs)
        ordered = [cur]
        while cur[2] in by_next and by_next[cur[2]] is not ordered[0]:
            cur = by_next[cur[2]]
            ordered.append(cur)
            if len(ordered) > len(cs):
                break
        if len(ordered) != len(cs):
            raise NonManifold('Link of vertex %d is not a single fan' % v)
        nbrs = [c[1] for c in ordered]
        if boundary:
            nbrs.append(ordered[-1][2])
        rings.append(VertexRing(tuple(c[0] for c in ordered), tuple(nbrs), boundary))
    
    return rings

def build_mesh(vertices, faces, edges=None, area_tol=1e-12):
    """Validate an indexed triangle list and build the oriented edge tables.

    Edges are oriented from the lower to the higher vertex index unless an
    explicit oriented ``edges`` array is supplied (refinement keeps the
    parent direction on split edges).
    """
    
    vertices = np.asarray(vertices, dtype=float)
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    num_vertices = vertices.shape[0]
    
    if faces.size == 0:
        raise NonManifold('Mesh has no faces')
    if faces.min() < 0 or faces.max() >= num_vertices:
        raise NonManifold('Face index out of range [0, %d)' % num_vertices)
    repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 2] == faces[:, 0])
    if repeated.any():
        raise DegenerateFace('Face %d repeats a vertex' % np.flatnonzero(repeated)[0])
    
    extent = np.ptp(vertices, axis=0)
    scale = float(np.dot(extent, extent)) or 1.0
    areas = face_geometry(vertices, faces)['areas']
    bad = np.flatnonzero(areas <= area_tol * scale)
    if bad.size:
        raise DegenerateFace('Face %d has zero area' % bad[0])
    
    heads = faces.ravel()
    tails = np.roll(faces, -1, axis=1).ravel()
    lo, hi = np.minimum(heads, tails), np.maximum(heads, tails)
    keys = lo * num_vertices + hi
    uniq, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    if (counts > 2).any():
        k = uniq[np.flatnonzero(counts > 2)[0]]
        raise NonManifold('Edge (%d, %d) is shared by more than two faces' % (k // num_vertices, k % num_vertices))
    directed = heads * num_vertices + tails
    if np.unique(directed).size != directed.size:
        raise InconsistentOrientation('Two faces traverse an edge in the same direction')
    
    if edges is None:
        edges = np.stack([uniq // num_vertices, uniq % num_vertices], axis=1)
        edge_of_key = inverse
    else:
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        ekeys = np.minimum(edges[:, 0], edges[:, 1]) * num_vertices + np.maximum(edges[:, 0], edges[:, 1])
        if ekeys.size != uniq.size or not np.array_equal(np.sort(ekeys), uniq):
            raise NonManifold('Explicit edge list does not match the face edges')
        order = np.argsort(ekeys)
        edge_of_key = order[np.searchsorted(ekeys[order], keys)]
    
    face_edges = edge_of_key.reshape(-1, 3)
    face_signs = np.where(edges[face_edges, 0] == faces, 1, -1)
    
    edge_faces = -np.ones((edges.shape[0], 2), dtype=np.int64)
    fidx = np.repeat(np.arange(faces.shape[0]), 3)
    side = (face_signs.ravel() < 0).astype(np.int64)
    edge_faces[face_edges.ravel(), side] = fidx
    
    rings = __vertex_rings__(num_vertices, faces)
    
    return Mesh(vertices, faces, edges, face_edges, face_signs, edge_faces, rings)

def euler_characteristic(mesh):
    return mesh.euler_characteristic
