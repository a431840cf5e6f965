from .chain import (
    ChainState,
    EmpiricalMeasure,
    EnsembleRecord,
    RunSpec,
    initial_state,
    run,
    step,
    trajectory,
    transition_probabilities,
)
from .paths import (
    conditioned_srw_compare,
    empirical_density,
    ensemble_moments,
    packed_block,
    quantile_placement,
    stationary_occupation,
    thinned_sample,
    winding,
    winding_direct,
)
