import numpy as np
import pytest

from src.combinatorics import Hook, Partition, enumerate_partitions
from src.core.errors import DegenerateEvaluationError, InvalidArgumentError
from src.symmetric import (
    conj_hook_identity,
    conj_schur_identity,
    double_hook_expansion,
    elementary_eval,
    hook_expansion_check,
    power_sum_eval,
    rational_double_hook_check,
    roots_of_unity,
    schur_at_ones,
    schur_eval,
    schur_tableau_eval,
    skew_hook_eval,
)
from src.symmetric.evaluation import random_root_tuple, random_unit_tuple, relative_residual
from src.symmetric.identities import frobenius_check, skew_hook_check


def test_empty_partition_is_one(rng):
    assert schur_eval(Partition(()), random_unit_tuple(rng, 4)) == 1


def test_columns_are_elementary(rng):
    z = random_unit_tuple(rng, 5)
    for k in range(1, 6):
        assert abs(schur_eval(Partition((1,) * k), z) - elementary_eval(k, z)) <= 1e-10


def test_too_many_parts_is_zero(rng):
    assert schur_eval(Partition.of(1, 1, 1), random_unit_tuple(rng, 2)) == 0


def test_specialization_at_ones():
    assert schur_at_ones(Partition.of(2, 1), 3) == 8
    assert schur_tableau_eval(Partition.of(2, 1), np.ones(3)) == pytest.approx(8)


def test_coincident_points_use_tableau():
    z = np.array([1.0, 1.0, 1j])
    assert schur_eval(Partition.of(2, 1), z) == pytest.approx(schur_tableau_eval(Partition.of(2, 1), z))


def test_coincident_points_large_shape():
    z = np.ones(3)
    with pytest.raises(DegenerateEvaluationError):
        schur_eval(Partition.of(6, 2, 1), z)


def test_power_sums(rng):
    z = roots_of_unity(range(6), 6)
    for n in range(1, 6):
        assert abs(power_sum_eval(n, z)) <= 1e-12
    assert power_sum_eval(0, z) == 6
    u = random_unit_tuple(rng, 4)
    assert power_sum_eval(-3, u) == pytest.approx(np.conj(power_sum_eval(3, u)))


def test_p1_is_s1(rng):
    for _ in range(20):
        z = random_unit_tuple(rng, 4)
        assert relative_residual(power_sum_eval(1, z), schur_eval(Partition.of(1), z)) <= 1e-12


def test_sup_bound(rng):
    for lam in [lam for n in range(1, 5) for lam in enumerate_partitions(n) if lam.length <= 4]:
        bound = float(schur_at_ones(lam, 4))
        for _ in range(50):
            assert abs(schur_eval(lam, random_unit_tuple(rng, 4))) <= bound + 1e-9


def test_determinant_matches_tableau(rng):
    for lam in [lam for n in range(1, 6) for lam in enumerate_partitions(n) if lam.length <= 3]:
        z = random_unit_tuple(rng, 3)
        assert relative_residual(schur_eval(lam, z, allow_tableau=False), schur_tableau_eval(lam, z)) <= 1e-9


def test_hook_expansion(rng):
    assert hook_expansion_check(1, random_root_tuple(rng, 12, 3)) == 0
    assert hook_expansion_check(2, random_root_tuple(rng, 12, 3)) <= 1e-10
    assert hook_expansion_check(5, random_root_tuple(rng, 30, 5)) <= 1e-9


def test_conj_hook(rng):
    assert conj_hook_identity(2, 0, random_root_tuple(rng, 9, 3), 9) <= 1e-9
    assert conj_hook_identity(1, 0, random_root_tuple(rng, 8, 2), 8) <= 1e-9


def test_conj_hook_needs_room(rng):
    with pytest.raises(InvalidArgumentError):
        conj_hook_identity(9, 0, random_root_tuple(rng, 9, 3), 9)


def test_double_hook_expansion(rng):
    assert double_hook_expansion(1, random_root_tuple(rng, 10, 3), 10) <= 1e-9
    assert double_hook_expansion(2, random_root_tuple(rng, 14, 4), 14) <= 1e-9


def test_double_hook_at_power_sum_zero():
    # p_1 vanishes on the full set of fourth roots
    z = roots_of_unity(range(4), 12, 0) ** 3
    assert abs(power_sum_eval(1, z)) <= 1e-12
    assert double_hook_expansion(1, z, 12) <= 1e-9


def test_double_hook_expansion_with_few_particles(rng):
    # N < 2n: the shapes with k + l > N - 2 drop out of the sum
    z = random_root_tuple(rng, 10, 3)
    assert double_hook_expansion(2, z, 10) <= 1e-9


def test_double_hook_ring_too_small(rng):
    with pytest.raises(InvalidArgumentError):
        double_hook_expansion(3, random_root_tuple(rng, 8, 6), 8)


def test_rational_double_hook(rng):
    z = random_root_tuple(rng, 14, 4)
    assert rational_double_hook_check(1, 0, 0, z, 14) <= 1e-9
    for k in range(2):
        for l in range(2):
            assert rational_double_hook_check(2, k, l, z, 14) <= 1e-9


def test_skew_hooks(rng):
    z = random_unit_tuple(rng, 3)
    assert skew_hook_eval(Hook(3, 1), Hook(3, 1), z) == pytest.approx(1)
    assert skew_hook_eval(Hook(2, 0), Hook(2, 1), z) == 0
    assert skew_hook_check(Hook(3, 1), Hook(1, 0), z) <= 1e-10
    for k in range(4):
        for i in range(2):
            assert skew_hook_check(Hook(4, k), Hook(2, i), z) <= 1e-10
            assert skew_hook_check(Hook(4, k), Hook(2, i), z, conjugate_inner=True) <= 1e-10


def test_conj_schur(rng):
    z = random_unit_tuple(rng, 3)
    assert conj_schur_identity(Partition.of(2, 1), 3, z) <= 1e-10
    with pytest.raises(InvalidArgumentError):
        conj_schur_identity(Partition.of(1), 1, 1.1 * z)


def test_frobenius_consistency(rng):
    z = random_unit_tuple(rng, 4)
    for lam in enumerate_partitions(5):
        assert frobenius_check(lam, z) <= 1e-9
