from .evaluation import (
    elementary_eval,
    power_sum_eval,
    roots_of_unity,
    schur_at_ones,
    schur_eval,
    schur_tableau_eval,
    skew_schur_tableau_eval,
)
from .identities import (
    conj_hook_identity,
    conj_schur_identity,
    double_hook_expansion,
    hook_expansion_check,
    rational_double_hook_check,
    skew_hook_eval,
)
