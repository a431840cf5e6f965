from math import cos, pi

import numpy as np
import pytest

from src.combinatorics import EMPTY, Partition
from src.core.errors import InvalidArgumentError
from src.udbm import (
    DysonState,
    SchurObservable,
    SDESpec,
    cue_sample,
    default_energy_cap,
    eigenfunction,
    energy,
    ground_index,
    index_from_partition,
    low_density_compare,
    partition_from_index,
    project,
    sde_step,
    semigroup_moment,
    simulate_paths,
    spectral_indices,
    sup_bound,
    tail_bound,
)
from src.udbm.sde import min_gap
from src.udbm.spectrum import convergence_ratios


def p1(x):
    return np.exp(1j * x).sum(axis=1)


# --- 1. SPECTRUM ---

@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_ground_energy_is_zero(N):
    assert energy(ground_index(N)) == pytest.approx(0.0, abs=1e-12)


def test_energy_value():
    assert ground_index(3) == (-1, 0, 1)
    assert energy((-1, 0, 2)) == pytest.approx(2 * pi ** 2)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_lowest_excitation(N):
    c = ground_index(N)
    energies = [energy(m) for m in spectral_indices(N, 3 * pi ** 2) if m != c]
    assert min(energies) == pytest.approx(2 * pi ** 2)
    assert all(e > 0 for e in energies)


def test_spectral_indices_sorted_and_capped():
    ms = spectral_indices(3, 40 * pi ** 2)
    es = [energy(m) for m in ms]
    assert es == sorted(es)
    assert es[-1] <= 40 * pi ** 2 + 1e-9
    assert ms[0] == ground_index(3)


def test_index_must_increase():
    with pytest.raises(InvalidArgumentError):
        energy((0, 0, 1))


def test_partition_index_round_trip():
    for lam, ell in [(EMPTY, 0), (Partition.of(1), 0), (Partition.of(2, 1), -1), (Partition.of(3, 3), 2)]:
        m = index_from_partition(lam, ell, 3)
        assert partition_from_index(m) == (lam, ell)


def test_eigenfunction_is_schur(rng):
    x = rng.uniform(0, 2 * np.pi, 3)
    m = index_from_partition(Partition.of(1), 0, 3)
    assert eigenfunction(m, x) == pytest.approx(np.exp(1j * x).sum())
    assert abs(eigenfunction(m, x)) <= sup_bound(m) + 1e-12


def test_tail_bound_and_cap():
    assert tail_bound(2, 0.05, 200.0) > tail_bound(2, 0.05, 400.0)
    cap = default_energy_cap(2, 0.05)
    assert tail_bound(2, 0.05, cap) < 1e-8
    with pytest.raises(InvalidArgumentError):
        default_energy_cap(2, 0.0)


# --- 2. SEMIGROUP ---

def test_constant_observable(rng):
    x = rng.uniform(0, 2 * np.pi, 2)
    assert semigroup_moment(SchurObservable(EMPTY), 0.3, x).value == pytest.approx(1.0)
    res = semigroup_moment(lambda y: np.ones(len(y)), 0.1, x, E_max=60.0)
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_eigenfunction_decay(rng):
    x = np.sort(rng.uniform(0, 2 * np.pi, 3))
    obs = SchurObservable(Partition.of(2, 1))
    m = obs.index(3)
    res = semigroup_moment(obs, 0.02, x)
    assert res.value == pytest.approx(np.exp(-energy(m) * 0.02) * eigenfunction(m, x))


def test_projection_recovers_eigenfunction(rng):
    x = np.sort(rng.uniform(0, 2 * np.pi, 2))
    exact = semigroup_moment(SchurObservable(Partition.of(1)), 0.05, x).value
    projected = semigroup_moment(p1, 0.05, x, E_max=100.0).value
    assert projected == pytest.approx(exact, abs=1e-10)


def test_semigroup_property(rng):
    x = np.sort(rng.uniform(0, 2 * np.pi, 3))
    f = lambda y: np.abs(p1(y)) ** 2 + np.real(np.exp(2j * y[:, 0]) * np.exp(-2j * y[:, 1]))
    exp = project(f, 3, 200.0)
    assert exp.propagate(0.01).evaluate(x, 0.02) == pytest.approx(exp.evaluate(x, 0.03), abs=1e-10)


def test_long_time_limit_is_cue_average(rng):
    x = np.sort(rng.uniform(0, 2 * np.pi, 3))
    f = lambda y: np.abs(p1(y)) ** 2
    assert semigroup_moment(f, 2.0, x, E_max=60.0).value == pytest.approx(1.0, abs=1e-8)
    assert project(f, 3, 60.0).mean() == pytest.approx(1.0, abs=1e-10)


def test_cue_sample_moments(rng):
    x = cue_sample(3, rng, size=20000)
    assert x.shape == (20000, 3)
    assert np.all(np.diff(x, axis=1) >= 0)
    vals = np.abs(p1(x)) ** 2
    assert abs(vals.mean() - 1.0) <= 4 * vals.std() / np.sqrt(len(vals))


# --- 3. LOW-DENSITY COMPARISON ---

def test_low_density_error_rate():
    rows = low_density_compare([32, 64, 128], 2, 0.05, SchurObservable(Partition.of(1)))
    assert rows[0].abs_err > rows[1].abs_err > rows[2].abs_err
    for ratio in convergence_ratios(rows):
        assert 2.0 <= ratio <= 6.0


def test_low_density_single_particle():
    L, t = 40, 0.05
    row = low_density_compare([L], 1, t, SchurObservable(Partition.of(1)))[0]
    n = int(L * L * t)
    assert row.discrete == pytest.approx(cos(2 * pi / L) ** n)
    assert row.continuous == pytest.approx(np.exp(-2 * pi ** 2 * n / L ** 2))


def test_low_density_zero_time():
    rows = low_density_compare([16, 32], 3, 0.0, SchurObservable(Partition.of(2)))
    assert all(r.abs_err == pytest.approx(0.0, abs=1e-12) for r in rows)


def test_low_density_particle_limit():
    with pytest.raises(InvalidArgumentError):
        low_density_compare([64], 7, 0.01, SchurObservable(Partition.of(1)))


# --- 4. SDE ---

def test_sde_step_rejects_bad_dt(rng):
    with pytest.raises(InvalidArgumentError):
        sde_step(DysonState(np.array([0.0, 1.0])), 0.0, rng)


def test_sde_step_keeps_order(rng):
    state = DysonState(np.array([0.0, 0.3, 0.6, 4.0]))
    for _ in range(200):
        state = sde_step(state, 1e-4, rng)
        assert min_gap(state.angles) > 0
    assert state.time == pytest.approx(0.02)


def test_sde_single_particle_is_brownian():
    rec = simulate_paths(SDESpec(start=np.array([1.0]), times=[0.1], n_paths=4000, dt=0.01, seed=8))
    x = rec.angles[:, 0, 0]
    var = 4 * pi ** 2 * 0.1
    assert abs(x.mean() - 1.0) <= 4 * np.sqrt(var / 4000)
    assert abs(x.var() - var) <= 4 * var * np.sqrt(2 / 4000)


def test_sde_center_of_mass_martingale():
    spec = SDESpec(start=np.array([0.0, pi]), times=[0.05], n_paths=4000, dt=1e-3, seed=21)
    com = simulate_paths(spec).angles[:, 0, :].sum(axis=1)
    assert abs(com.mean() - pi) <= 4 * com.std() / np.sqrt(len(com))


def test_sde_paths_never_collide():
    spec = SDESpec(start=np.array([0.0, 0.2, 0.4, 0.6]), times=[0.01], n_paths=2000, dt=1e-4, seed=4)
    rec = simulate_paths(spec)
    gaps = np.array([min_gap(x) for x in rec.angles[:, 0, :]])
    assert gaps.min() > 0


def test_sde_boundary_start():
    spec = SDESpec(start=np.zeros(3), times=[0.0, 0.01], n_paths=50, dt=1e-3, seed=2)
    rec = simulate_paths(spec)
    assert np.allclose(rec.angles[:, 0, :], 0.0)
    assert all(min_gap(x) > 0 for x in rec.angles[:, 1, :])


def test_sde_boundary_start_on_seam():
    start = np.array([0.0, 0.0, 2 * pi - 1e-13])
    for seed in range(20):
        x = sde_step(DysonState(start), 1e-4, np.random.default_rng(seed)).angles
        assert np.all(np.diff(x) > 0)
        assert x[-1] - x[0] < 2 * pi
        assert min_gap(x) > 0


def test_sde_seed_determinism():
    spec = SDESpec(start=np.array([0.0, 2.0, 4.0]), times=[0.01, 0.02], n_paths=20, dt=1e-3, seed=9)
    assert np.array_equal(simulate_paths(spec).angles, simulate_paths(spec).angles)


def test_sde_rows_layout():
    spec = SDESpec(start=np.array([0.0, 3.0]), times=[0.0, 0.01], n_paths=3, dt=1e-3, seed=1)
    rows = simulate_paths(spec).rows()
    assert len(rows) == 6
    assert rows[0][:2] == (0.0, 0)
    assert len(rows[0]) == 4


@pytest.mark.slow
def test_sde_matches_eigen_series():
    start = np.array([0.5, 2.5])
    obs = SchurObservable(Partition.of(1))
    spec = SDESpec(start=start, times=[0.05], n_paths=20000, dt=2e-4, seed=77)
    mean, err = simulate_paths(spec).moment_mean(p1, 0)
    exact = semigroup_moment(obs, 0.05, start).value
    assert abs(mean - exact) <= 4 * err + 0.02
