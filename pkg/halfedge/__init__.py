from .forms import (
    MeanCurlForm,
    project_P,
    project_P_inv,
    unpack_U,
    pack_U_inv,
    halfedge_edge_incidence,
    d0_gamma,
    curl_gamma,
    mass_gamma,
    mass_gamma_inv,
    block_inverse,
    div_gamma,
    null_sum_incidence,
    mean_curl_operator,
    mean_curl_operator_inv,
    to_mean_curl,
    from_mean_curl,
    null_sum_residual,
    to_gamma,
    to_vectors,
    dec_divergence_defect
)
from .hodge import (
    HodgeDecomposition,
    hodge_laplacian_gamma,
    dual_laplacian_gamma,
    solve_exact_potential,
    solve_coexact_part,
    decompose,
    harmonic_space,
    harmonic_threshold,
    harmonic_basis,
    inject_harmonic,
    hodge_decompose_gamma
)
from .io import read_gamma, write_gamma, read_mean_curl, write_mean_curl
