from .sparse import SparseOperator, diagonal, as_matrix
from .fem import (
    gradient_vertex,
    cogradient_edge,
    rotation,
    curl,
    divergence,
    mass_x,
    mass_face,
    mass_vertex,
    mass_edge,
    mass_edge_dual,
    laplacians,
    hodge_laplacian_fem
)
from .dec import d0, d1, mass_one_form, hodge_laplacian_dec
