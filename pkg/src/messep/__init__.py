from .lattice import (
    Configuration,
    LatticeParams,
    StateSpace,
    compact_configuration,
    config_from_partition,
    enumerate_configurations,
    make_configuration,
    partition_from_config,
)
from .spectral import (
    SpectralKernel,
    adjacency_matrix,
    double_hook_eigenvalue,
    eigenbasis_report,
    eigenvalue_of,
    expected_moment,
    gap_asymptotics_check,
    graph_spectrum,
    hook_eigenvalue,
    kernel,
    perron,
    semigroup_apply,
    spectral_gap,
    survival_probability,
    variance_moment,
)
