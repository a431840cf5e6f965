from .sde import DysonState, SDERecord, SDESpec, sde_step, simulate_paths
from .spectrum import (
    ComparisonRow,
    SchurObservable,
    SpectralExpansion,
    cue_sample,
    default_energy_cap,
    discrete_eigenvalue,
    eigenfunction,
    energy,
    ground_index,
    index_from_partition,
    low_density_compare,
    partition_from_index,
    project,
    semigroup_moment,
    spectral_indices,
    sup_bound,
    tail_bound,
)
