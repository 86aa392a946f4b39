from .mesh import Mesh, VertexRing, build_mesh, euler_characteristic, face_geometry
from .refine import quadrisect, RefinementMaps
from .io import read_obj, load_obj, save_obj
from .shapes import avail_meshes, load_mesh
