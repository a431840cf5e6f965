from .profiles import (
    InitialProfile,
    MomentProfile,
    StepProfile,
    check_alpha,
    cosine_profile,
    flux,
    grid_profile,
    make_profile,
    single_mode,
    velocity,
)
from .moments import (
    h_power_derivatives,
    h_power_derivatives_bell,
    limit_moment,
    limit_moment_by_partitions,
    limit_moments,
    propagate_moments,
    semiflow_defect,
)
from .flow import (
    BoundaryValues,
    CharFlow,
    boundary_coefficients,
    boundary_values,
    coefficient_a_n,
    fit_decay_exponent,
    flow_invert,
    invert_many,
    moment_generating,
    quadrature_radius,
    taylor_moments,
)
from .density import (
    DensityGrid,
    density_at,
    density_reconstruct,
    front_speed,
    grid_points,
    hilbert_pair,
    hilbert_transform,
    pde_residual,
    poisson_smoothed,
    relaxation_rate,
    saturation_set,
    spectral_derivative,
    sup_deviation,
    trapezoid_mass,
)
from .step import (
    SingleModeData,
    StepProfileData,
    critical_times,
    quartic_coefficients,
    quartic_residual,
    regime,
    single_mode_profile,
    step_critical_points,
    step_fronts,
    step_profile,
)
