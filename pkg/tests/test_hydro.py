from math import cos, exp, pi, sin

import numpy as np
import pytest

from src.core.errors import InvalidArgumentError
from src.hydro import (
    CharFlow,
    MomentProfile,
    StepProfile,
    boundary_coefficients,
    coefficient_a_n,
    cosine_profile,
    critical_times,
    density_reconstruct,
    fit_decay_exponent,
    flow_invert,
    flux,
    grid_profile,
    h_power_derivatives,
    h_power_derivatives_bell,
    hilbert_transform,
    invert_many,
    limit_moment,
    limit_moment_by_partitions,
    limit_moments,
    make_profile,
    pde_residual,
    poisson_smoothed,
    quartic_residual,
    regime,
    relaxation_rate,
    semiflow_defect,
    single_mode_profile,
    step_critical_points,
    step_fronts,
    step_profile,
    taylor_moments,
    velocity,
)
from src.hydro.density import grid_points


@pytest.fixture
def smooth_flow():
    return CharFlow(cosine_profile(0.3, 1, 0.5))


# --- 1. PROFILES ---

def test_step_moments():
    prof = StepProfile(alpha=0.5)
    assert prof.moment(0) == 1
    assert prof.moment(1) == pytest.approx(2 / pi)
    assert prof.g0(0.0) == pytest.approx(0.0)


def test_moment_profile_bounds():
    with pytest.raises(InvalidArgumentError):
        MomentProfile(values=[1.5], alpha=0.5)
    with pytest.raises(InvalidArgumentError):
        cosine_profile(1.0, 1, 0.9)
    with pytest.raises(InvalidArgumentError):
        StepProfile(alpha=1.0)


def test_make_profile():
    assert isinstance(make_profile({"kind": "step", "alpha": 0.25}), StepProfile)
    prof = make_profile({"kind": "moments", "alpha": 0.5, "values": [[0.1, 0.05], 0.02]})
    assert prof.moment(1) == pytest.approx(0.1 + 0.05j)
    assert prof.moment(-1) == pytest.approx(0.1 - 0.05j)
    with pytest.raises(InvalidArgumentError):
        make_profile({"kind": "triangle"})


def test_grid_profile():
    M = 64
    x = grid_points(M)
    prof = grid_profile((1 + 0.4 * np.cos(2 * x)) / (2 * pi), 0.5)
    assert prof.moment(2) == pytest.approx(0.2, abs=1e-12)
    assert prof.moment(1) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        grid_profile(np.ones(M), 0.5)


# --- 2. LIMITING MOMENTS ---

def test_uniform_profile_stays_uniform():
    prof = MomentProfile(values=[0.0, 0.0, 0.0], alpha=0.4)
    assert np.allclose(limit_moments(0.3, prof, 0.4, 10)[1:], 0)


def test_first_two_moments():
    alpha, t = 1 / 3, 0.02
    prof = cosine_profile(0.3, 1, alpha)
    m1 = 0.15
    assert limit_moment(1, t, prof, alpha) == pytest.approx(exp(-2 * pi ** 2 * t) * m1)
    expect = exp(-4 * pi ** 2 * t) * (0 - 4 * pi ** 3 * alpha * t * cos(pi * alpha) / sin(pi * alpha) * m1 ** 2)
    assert limit_moment(2, t, prof, alpha) == pytest.approx(expect, rel=1e-10)


def test_moment_conjugation():
    prof = make_profile({"kind": "moments", "alpha": 0.5, "values": [[0.1, 0.2]]})
    assert limit_moment(-1, 0.1, prof, 0.5) == pytest.approx(np.conj(limit_moment(1, 0.1, prof, 0.5)))


def test_partition_sum_matches_series():
    prof = StepProfile(alpha=0.3)
    for n in range(1, 9):
        assert limit_moment_by_partitions(n, 0.01, prof, 0.3) == pytest.approx(
            limit_moment(n, 0.01, prof, 0.3), abs=1e-12
        )


def test_jet_matches_faa_di_bruno():
    assert np.allclose(h_power_derivatives(3, 0.02, 0.4, 6), h_power_derivatives_bell(3, 0.02, 0.4, 6), rtol=1e-10)


def test_moment_order_cap():
    with pytest.raises(InvalidArgumentError):
        limit_moments(0.1, StepProfile(alpha=0.5), 0.5, 10 ** 4)


def test_moments_bounded_and_decaying():
    prof = StepProfile(alpha=0.5)
    early = limit_moments(0.01, prof, 0.5, 16)
    late = limit_moments(0.5, prof, 0.5, 16)
    assert np.all(np.abs(early) <= 1 + 1e-12)
    assert np.all(np.abs(late[1:]) <= np.abs(early[1:]) + 1e-12)


def test_semiflow():
    assert semiflow_defect(cosine_profile(0.3, 1, 0.5), 0.02, 0.03, 12) <= 1e-8
    assert semiflow_defect(StepProfile(alpha=0.4), 0.01, 0.01, 12) <= 1e-8


def test_characteristics_match_moments(smooth_flow):
    t = 0.05
    series = taylor_moments(t, smooth_flow, 8)
    direct = limit_moments(t, smooth_flow.profile, 0.5, 8)
    assert np.max(np.abs(series - direct)) <= 1e-8


# --- 3. VELOCITY, FLUX, HILBERT ---

def test_velocity_and_flux():
    assert velocity(0.0, 0.3) == pytest.approx(2 * pi ** 2)
    assert flux(1 / (2 * pi), 0.0, 0.5) == pytest.approx(0.0)
    with pytest.raises(InvalidArgumentError):
        velocity(0.0, 0.0)


def test_flux_small_alpha_limit():
    alpha, f, hf = 1e-3, 0.1, 0.05
    lhs = flux(f, hf, alpha) / (alpha * sin(pi * alpha))
    assert abs(lhs - 4 * pi ** 3 * f * hf) <= 1e-4


def test_hilbert_of_cosines():
    x = grid_points(256)
    for k in (1, 3, 7):
        assert np.allclose(hilbert_transform(np.cos(k * x)), np.sin(k * x), atol=1e-12)


def test_hilbert_squares_to_minus_one():
    x = grid_points(128)
    f = 0.7 + np.cos(x) + 0.2 * np.sin(5 * x) + 0.1 * np.cos(11 * x)
    assert np.allclose(hilbert_transform(hilbert_transform(f)), -(f - f.mean()), atol=1e-10)


def test_hilbert_grid_must_be_power_of_two():
    with pytest.raises(InvalidArgumentError):
        hilbert_transform(np.ones(100))


def test_hilbert_of_smoothed_step():
    f, hf = poisson_smoothed(StepProfile(alpha=1 / 3), 0.99, 4096)
    assert np.max(np.abs(hilbert_transform(f) - hf)) <= 1e-6


# --- 4. FLOW INVERSION ---

def test_flow_invert_trivial_points(smooth_flow):
    assert flow_invert(0.0, 0.3 + 0.2j, smooth_flow) == 0.3 + 0.2j
    assert flow_invert(0.1, 0.0, smooth_flow) == 0.0


def test_flow_invert_contracts(rng):
    flow = CharFlow(StepProfile(alpha=1 / 3))
    for _ in range(20):
        z = 0.95 * np.sqrt(rng.random()) * np.exp(2j * pi * rng.random())
        t1 = 0.05 * rng.random() + 1e-3
        w1 = flow_invert(t1, z, flow)
        w2 = flow_invert(2 * t1, z, flow)
        assert abs(flow.phi(t1, w1) - z) <= 1e-9
        assert abs(w1) < abs(z)
        assert abs(w2) < abs(w1)


def test_flow_invert_rejects_bad_input(smooth_flow):
    with pytest.raises(InvalidArgumentError):
        flow_invert(-0.1, 0.2, smooth_flow)
    with pytest.raises(InvalidArgumentError):
        flow_invert(0.1, 1.5, smooth_flow)


def test_invert_many_at_zero_time(smooth_flow):
    z = np.array([0.1, 0.5j])
    w, res = invert_many(smooth_flow, 0.0, z)
    assert np.array_equal(w, z) and np.all(res == 0)


# --- 5. DENSITY ---

def test_density_mass_bounds_and_moments(smooth_flow):
    grid = density_reconstruct(0.05, smooth_flow, 1024)
    assert grid.mass == pytest.approx(1.0, abs=1e-6)
    assert grid.bounds_violation() <= 1e-8
    m = limit_moments(0.05, smooth_flow.profile, 0.5, 8)
    assert np.max(np.abs(grid.fourier_moments(8) - m)) <= 1e-6


def test_density_relaxes(smooth_flow):
    assert relaxation_rate(smooth_flow, [0.1, 0.15, 0.2], 256) < 0


def test_density_needs_positive_time(smooth_flow):
    with pytest.raises(InvalidArgumentError):
        density_reconstruct(0.0, smooth_flow, 256)
    with pytest.raises(InvalidArgumentError):
        density_reconstruct(0.1, smooth_flow, 1000)


def test_step_density_regimes():
    alpha = 1 / 3
    data = step_profile(alpha)
    t = data.t_lower / 2
    grid = density_reconstruct(t, data.flow, 1024)
    phi1, phi2 = step_fronts(alpha, t)
    eps = 0.05
    centred = np.mod(grid.x + pi, 2 * pi) - pi
    plateau = np.abs(centred) <= phi1 - eps
    empty = np.abs(centred) >= phi2 + eps
    assert np.all(grid.f[plateau] >= 1 / (2 * pi * alpha) - 1e-3)
    assert np.all(grid.f[empty] <= 1e-3)
    assert grid.mass == pytest.approx(1.0, abs=1e-5)


# --- 6. PDE ---

def test_pde_residual_equilibrium():
    flow = CharFlow(MomentProfile(values=[0.0], alpha=0.5))
    assert pde_residual(0.05, flow, 256, 1e-3) <= 1e-12


def test_pde_residual_smooth(smooth_flow):
    assert pde_residual(0.05, smooth_flow, 1024, 1e-5) <= 1e-4


def test_pde_residual_second_order(smooth_flow):
    coarse = pde_residual(0.05, smooth_flow, 256, 2e-3)
    fine = pde_residual(0.05, smooth_flow, 256, 1e-3)
    assert coarse / fine == pytest.approx(4.0, rel=0.3)


def test_pde_residual_refuses_saturation():
    flow = CharFlow(StepProfile(alpha=1 / 3))
    with pytest.raises(InvalidArgumentError):
        pde_residual(0.005, flow, 256, 1e-3)


# --- 7. STEP PROFILE ---

def test_critical_times():
    assert critical_times(0.5) == pytest.approx((1 / (2 * pi ** 2), 1 / (2 * pi ** 2)))
    assert critical_times(1 / 3) == pytest.approx((1 / (4 * pi ** 2), 3 / (4 * pi ** 2)))
    for alpha in (0.1, 0.37, 0.8):
        lo, hi = critical_times(alpha)
        assert lo <= hi
        assert lo + hi == pytest.approx(1 / pi ** 2)


def test_critical_points_structure():
    for alpha in (0.2, 1 / 3, 0.45):
        lo, hi = critical_times(alpha)
        for t in (lo / 3, (lo + hi) / 2, 2 * hi):
            roots = step_critical_points(alpha, t)
            assert quartic_residual(alpha, t) <= 1e-9
            for r in roots:
                assert np.min(np.abs(roots - np.conj(r))) <= 1e-9
                assert np.min(np.abs(roots - 1 / r)) <= 1e-9


def test_critical_points_reflection():
    assert np.allclose(step_critical_points(2 / 3, 0.01), -step_critical_points(1 / 3, 0.01))


def test_critical_points_at_critical_times():
    lo, hi = critical_times(1 / 3)
    assert np.min(np.abs(step_critical_points(1 / 3, lo) - 1)) <= 1e-6
    assert np.min(np.abs(step_critical_points(1 / 3, hi) + 1)) <= 1e-6


def test_front_limits():
    alpha = 1 / 3
    lo, hi = critical_times(alpha)
    phi1, phi2 = step_fronts(alpha, 1e-9)
    assert phi1 == pytest.approx(pi * alpha, abs=1e-3)
    assert phi2 == pytest.approx(pi * alpha, abs=1e-3)
    assert step_fronts(alpha, lo * (1 - 1e-6))[0] < 0.05
    assert step_fronts(alpha, hi * (1 - 1e-6))[1] > pi - 0.05
    assert step_fronts(alpha, 1.5 * lo)[0] is None
    assert step_fronts(alpha, 1.5 * hi) == (None, None)


def test_front_monotonicity():
    alpha = 0.3
    lo, hi = critical_times(alpha)
    phi1 = [step_fronts(alpha, t)[0] for t in np.linspace(0.05, 0.95, 10) * lo]
    phi2 = [step_fronts(alpha, t)[1] for t in np.linspace(0.05, 0.95, 10) * hi]
    assert all(a > b for a, b in zip(phi1, phi1[1:]))
    assert all(a < b for a, b in zip(phi2, phi2[1:]))


def test_fronts_need_low_density():
    with pytest.raises(InvalidArgumentError):
        step_fronts(0.7, 0.01)


def test_regimes():
    lo, hi = critical_times(1 / 3)
    assert regime(1 / 3, lo / 2) == "saturated"
    assert regime(1 / 3, lo) == "at_lower"
    assert regime(1 / 3, (lo + hi) / 2) == "support_only"
    assert regime(1 / 3, hi) == "at_upper"
    assert regime(1 / 3, 2 * hi) == "analytic"
    assert regime(0.5, 1 / (2 * pi ** 2)) == "critical"


def test_step_report():
    data = step_profile(1 / 3).as_dict(t=0.01)
    assert data["regime"] == "saturated"
    assert len(data["critical_points"]) == 4


# --- 8. COEFFICIENTS AND SINGLE MODE ---

def test_first_coefficient(smooth_flow):
    t = 0.05
    a = coefficient_a_n(t, smooth_flow, 4)
    assert a[0] == pytest.approx(np.exp(-t * smooth_flow.A0(np.array([0.0]))[0]), abs=1e-12)


def test_coefficients_sum_to_inverse(smooth_flow):
    t, z = 0.05, 0.5 * np.exp(0.7j)
    a = coefficient_a_n(t, smooth_flow, 80)
    series = np.sum(a * z ** np.arange(1, 81))
    assert abs(series - flow_invert(t, z, smooth_flow)) <= 1e-8


def test_boundary_coefficients_match_quadrature(smooth_flow):
    t = 0.05
    assert np.max(np.abs(boundary_coefficients(t, smooth_flow, 10) - coefficient_a_n(t, smooth_flow, 10))) <= 1e-8


def test_coefficient_radius_checks(smooth_flow):
    with pytest.raises(InvalidArgumentError):
        coefficient_a_n(0.0, smooth_flow, 4)
    with pytest.raises(InvalidArgumentError):
        coefficient_a_n(0.05, smooth_flow, 4, radius=1.5)


def test_single_mode_critical_time():
    assert single_mode_profile(1).critical_time == pytest.approx(1 / pi ** 3)
    data = single_mode_profile(3)
    assert len(data.critical_points()) == 6
    assert data.derivative_at_critical() <= 1e-12


def test_single_mode_slope_blows_up_at_critical_time():
    from src.hydro.density import spectral_derivative

    data = single_mode_profile(1)
    grids = [128, 256, 512, 1024]

    def slopes(t):
        return [np.max(np.abs(spectral_derivative(density_reconstruct(t, data.flow, M).f))) for M in grids]

    before = slopes(data.critical_time / 2)
    assert max(before) / min(before) <= 1.02
    at = slopes(data.critical_time)
    assert all(b / a > 1.2 for a, b in zip(at, at[1:]))


@pytest.mark.slow
def test_single_mode_square_root_decay():
    p = 3
    data = single_mode_profile(p)
    a = boundary_coefficients(data.critical_time, data.flow, 1024)
    n = np.arange(1, 1025)
    keep = (n >= 64) & ((n - 1) % (2 * p) == 0)
    assert fit_decay_exponent(n[keep], a[keep]) == pytest.approx(-1.5, abs=0.1)


def test_moment_generating_at_time_zero(smooth_flow):
    from src.hydro import moment_generating

    z = np.array([0.3, 0.5j, -0.2 + 0.1j])
    assert np.allclose(moment_generating(0.0, z, smooth_flow), smooth_flow.profile.g0(z), atol=1e-12)


def test_hilbert_pair_matches_grid(smooth_flow):
    from src.hydro import hilbert_pair

    f, hf = hilbert_pair(0.02, smooth_flow, 256)
    grid = density_reconstruct(0.02, smooth_flow, 256)
    assert np.array_equal(f, grid.f)
    assert np.array_equal(hf, grid.hf)


def test_saturation_set_marks_bounds():
    from src.hydro import saturation_set

    f = np.array([0.0, 0.1, 1 / pi])
    marks = saturation_set(f, 0.5)
    assert marks["low"].tolist() == [True, False, False]
    assert marks["high"].tolist() == [False, False, True]


def test_front_speed_single_mode():
    from src.hydro import front_speed, single_mode_profile

    data = single_mode_profile(2)
    front = front_speed(data.flow, 0.0)
    assert front["speed"] == pytest.approx(0.0, abs=1e-12)
    assert front["critical_time"] == pytest.approx(data.critical_time, rel=1e-12)


def test_density_at_points(smooth_flow):
    from src.hydro import density_at

    grid = density_reconstruct(0.02, smooth_flow, 256)
    assert np.allclose(density_at(0.02, smooth_flow, grid.x[::16]), grid.f[::16], atol=1e-10)
    x = np.array([0.0, 1.0, 2.5])
    assert np.allclose(density_at(0.0, smooth_flow, x), smooth_flow.profile.density(x))
