from .closed_forms import (
    Z_VALENCE4,
    loop_alpha,
    halfbox_beta,
    halfbox_deltas,
    halfbox_corner,
    one_form_eta,
    one_form_theta
)
from .stencils import StencilSet
from .constraints import interior_edge_system, boundary_system, solve_stencil_constraints
from .builder import (
    SubdivisionSet,
    build_S_V,
    build_S_1,
    build_S_F,
    build_S_E,
    build_S_gamma,
    build_subdivision_set,
    build_hierarchy,
    commutation_residuals,
    aggregate,
    pointwise_edge_prolongation,
    edge_apex
)
from .patches import canonical_patch
from .spectral import spectral_check, local_subdivision_matrix, derive_constrained_stencils
