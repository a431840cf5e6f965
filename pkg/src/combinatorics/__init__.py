from .partitions import (
    EMPTY,
    Hook,
    Partition,
    as_partition,
    cycle_index,
    double_hook_partition,
    enumerate_partitions,
    hook_partition,
    partitions_in_box,
)
from .characters import (
    character_table,
    frobenius_p_to_s,
    hook_char_sum,
    hook_char_sum_closed_form,
    hook_character,
    mn_character,
    s_to_p,
)
from .bell import bell_partial
