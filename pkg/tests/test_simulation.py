from math import pi

import numpy as np
import pytest

from src.core.errors import InvalidArgumentError
from src.messep import LatticeParams, compact_configuration, expected_moment, kernel
from src.simulation import (
    EmpiricalMeasure,
    RunSpec,
    conditioned_srw_compare,
    empirical_density,
    ensemble_moments,
    initial_state,
    packed_block,
    quantile_placement,
    run,
    stationary_occupation,
    step,
    thinned_sample,
    trajectory,
    transition_probabilities,
    winding,
    winding_direct,
)
from src.simulation import chain
from src.simulation.paths import moment_rows


# --- 1. SINGLE STEPS ---

def test_transition_probabilities_sum_to_one(rng):
    for L in (5, 9, 14, 20):
        for N in (1, 2, L // 2, L - 1):
            params = LatticeParams(L, N)
            sites = rng.choice(L, size=N, replace=False)
            probs = transition_probabilities(initial_state(sites, params))
            assert sum(p for _, p in probs) == pytest.approx(1.0, abs=1e-12)


def test_single_particle_moves_uniformly():
    probs = transition_probabilities(initial_state((3,), LatticeParams(8, 1)))
    assert sorted(probs) == [((2,), 0.5), ((4,), 0.5)]


def test_debug_steps_keep_exclusion(rng):
    params = LatticeParams(12, 5)
    state = initial_state(rng.choice(12, size=5, replace=False), params)
    for _ in range(200):
        state = step(state, rng, debug=True)
    assert len(set(state.config)) == params.N


def test_lift_projects_to_configuration(rng):
    params = LatticeParams(9, 4)
    hist = trajectory((0, 1, 2, 3), params, 500, seed=7)
    assert np.all(np.diff(hist, axis=1) > 0)
    assert np.all(hist[:, -1] < hist[:, 0] + params.L)
    assert np.all(np.abs(np.diff(hist, axis=0)).sum(axis=1) == 1)


# --- 2. ENSEMBLES ---

def test_run_records_initial_measure():
    params = LatticeParams(10, 3)
    spec = RunSpec(params=params, times=[0.0, 0.5], n_paths=4, seed=1, initial=(0, 1, 2))
    record = run(spec)
    t0, measure = record.measures(0)[0]
    assert t0 == 0.0
    assert measure.moment(1) == pytest.approx(np.mean(np.exp(2j * pi * np.arange(3) / 10)))
    assert list(record.steps) == [0, 50]


def test_empirical_measure_symmetries():
    m = EmpiricalMeasure(np.array([0.1, 1.3, 4.0]))
    assert m.moment(0) == pytest.approx(1.0)
    assert m.moment(-2) == pytest.approx(np.conj(m.moment(2)))
    assert len(m.moments(3)) == 7


def test_seed_determinism():
    params = LatticeParams(12, 4)
    spec = RunSpec.from_steps(params, [10, 40], n_paths=16, seed=99, initial=packed_block(params))
    assert np.array_equal(run(spec).lifts, run(spec).lifts)


def test_chunking_does_not_change_streams(monkeypatch):
    params = LatticeParams(12, 4)
    spec = RunSpec.from_steps(params, [30], n_paths=10, seed=5, initial=packed_block(params))
    whole = run(spec).lifts
    monkeypatch.setattr(chain, "CHUNK_PATHS", 3)
    assert np.array_equal(run(spec).lifts, whole)


def test_run_spec_validation(small_ring):
    with pytest.raises(InvalidArgumentError):
        RunSpec(params=small_ring, times=[], n_paths=1, seed=0, initial=(0, 1))
    with pytest.raises(InvalidArgumentError):
        RunSpec(params=small_ring, times=[0.1], n_paths=0, seed=0, initial=(0, 1))
    with pytest.raises(InvalidArgumentError):
        RunSpec(params=small_ring, times=[-0.1], n_paths=1, seed=0, initial=(0, 1))


def test_first_moment_matches_spectral_prediction():
    params = LatticeParams(10, 3)
    start = compact_configuration(params)
    spec = RunSpec.from_steps(params, [50], n_paths=20000, seed=2024, initial=start)
    est = ensemble_moments(run(spec), 1)[0]
    exact = expected_moment(params, start, 1, 50, kernel(params))
    assert abs(est.mean - exact) <= 3 * est.stderr + 1e-12


def test_moment_variance_shrinks_with_ring_size():
    variances = []
    for L in (20, 40, 80):
        params = LatticeParams(L, L // 2)
        spec = RunSpec(params=params, times=[0.01], n_paths=2000, seed=11, initial=packed_block(params))
        record = run(spec)
        m = np.mean(np.exp(1j * record.angles(0)), axis=1)
        variances.append(float(np.var(m.real) + np.var(m.imag)))
    assert variances[0] > variances[1] > variances[2]


def test_moment_rows_layout():
    params = LatticeParams(8, 2)
    record = run(RunSpec(params=params, times=[0.0, 0.1], n_paths=2, seed=3, initial=(0, 4)))
    rows = moment_rows(record, 2)
    assert len(rows) == 2 * 2 * 2
    assert rows[0][:3] == (0, 0.0, 1)


# --- 3. INITIAL CONDITIONS ---

def test_packed_block_is_compact():
    params = LatticeParams(10, 4)
    assert packed_block(params) == compact_configuration(params)


def test_quantile_placement_respects_exclusion():
    params = LatticeParams(20, 10)
    step_density = lambda x: (np.minimum(x, 2 * np.pi - x) <= np.pi / 2).astype(float)
    xi = quantile_placement(step_density, params)
    assert len(set(xi)) == 10


def test_thinned_sample(rng):
    params = LatticeParams(30, 6)
    xi = thinned_sample(lambda x: 1 + np.cos(x), params, rng)
    assert len(xi) == 6 and len(set(xi)) == 6


def test_thinned_sample_thin_support(rng):
    params = LatticeParams(10, 5)
    with pytest.raises(InvalidArgumentError):
        thinned_sample(lambda x: (x == 0).astype(float), params, rng)


def test_empirical_density_integrates_to_one(rng):
    dens = empirical_density(rng.uniform(0, 2 * np.pi, size=(5, 40)), 256, 0.1)
    assert dens.sum() * 2 * np.pi / 256 == pytest.approx(1.0, abs=1e-12)


# --- 4. WINDINGS ---

def test_winding_constant_path():
    assert winding(np.zeros((5, 2), dtype=int), 7) == pytest.approx([0, 0])


def test_winding_full_loop():
    L = 11
    hist = np.arange(L + 1)[:, None]
    assert winding(hist, L)[0] == pytest.approx(2 * pi, abs=1e-12)


def test_winding_random_walk(rng):
    L = 13
    hist = np.cumsum(np.concatenate([[0], rng.choice([-1, 1], size=400)]))[:, None]
    assert winding(hist, L) == pytest.approx(winding_direct(hist, L), abs=1e-12)


def test_winding_rejects_jumps():
    with pytest.raises(InvalidArgumentError):
        winding(np.array([[0], [2]]), 9)


# --- 5. STATIONARITY AND CONDITIONING ---

@pytest.mark.slow
def test_long_run_occupation_and_flux():
    params = LatticeParams(6, 2)
    rec = stationary_occupation((0, 1), params, 10 ** 6, seed=31)
    mu = kernel(params).mu
    assert np.max(np.abs(rec.frequencies - mu)) <= 0.01
    for (a, b), count in rec.flux.items():
        back = rec.flux.get((b, a), 0)
        assert abs(count - back) <= 5 * np.sqrt(count + back) + 5


def test_conditioned_walk_converges():
    params = LatticeParams(5, 2)
    tv = [conditioned_srw_compare((0, 1), 2, m, params) for m in (2, 10, 50, 200)]
    assert tv[0] > 0
    assert all(a >= b for a, b in zip(tv, tv[1:]))
    assert tv[-1] <= 1e-3


def test_conditioned_walk_single_particle():
    params = LatticeParams(7, 1)
    for m in (3, 10):
        assert conditioned_srw_compare((2,), 3, m, params) == pytest.approx(0.0, abs=1e-12)


def test_conditioned_walk_horizon():
    with pytest.raises(InvalidArgumentError):
        conditioned_srw_compare((0, 1), 4, 2, LatticeParams(5, 2))


def test_edge_flux_counts_transitions():
    from src.simulation.paths import edge_flux

    assert edge_flux(np.array([0, 1, 0, 1, 2])) == {(0, 1): 2, (1, 0): 1, (1, 2): 1}


def test_conditioned_walk_size_bounded_by_state_cap(monkeypatch):
    from src.core.config import settings
    from src.core.errors import ResourceCapError

    params = LatticeParams(12, 3)
    assert 0 <= conditioned_srw_compare((0, 1, 2), 2, 20, params) <= 1
    monkeypatch.setattr(settings, "STATE_CAP", 100)
    with pytest.raises(ResourceCapError):
        conditioned_srw_compare((0, 1, 2), 2, 20, params)
