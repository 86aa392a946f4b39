from .context import SemContext, restrict_mass, sem_operators
from .hodge import (
    HodgeSpectrum,
    two_path_residual,
    sem_hodge_decompose,
    hodge_spectrum,
    sem_hodge_spectrum,
    fem_hodge_spectrum,
    spectrum_residuals
)
from .fields import avail_fields, sample_field, smooth_field
from .experiments import (
    solve_hodge_system,
    sem_solve,
    fit_slope,
    projection_error_experiment,
    operator_error_experiment,
    spectrum_experiment,
    avail_experiments
)
from .design import read_constraints, constraints_to_gamma, sem_energy, design_field
