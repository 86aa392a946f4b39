from .field import DirectionalField
from .matching import (
    SingularityReport,
    Unfolding,
    CoveringMesh,
    trivial_matching,
    ring_shift,
    ring_permutation,
    modular_index,
    geometric_index,
    vertex_indices,
    comb_offsets,
    comb,
    uncomb,
    unfold,
    fine_matching,
    covering_mesh
)
from .operators import vertex_offsets, branched_operators
from .subdivide import subdivide_cover, branched_subdivide
from .io import read_dirfield, write_dirfield, read_matching, write_matching, load_directional_field
