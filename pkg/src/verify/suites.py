"""Named property suites with JSON-ready verdicts.

Every check compares a measured deviation with a tolerance; the run-wide
tolerance scale multiplies every tolerance.
"""
import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import exp, pi
from typing import Callable, Dict, List

import numpy as np

from ..combinatorics import (
    Hook,
    character_table,
    cycle_index,
    double_hook_partition,
    enumerate_partitions,
    frobenius_p_to_s,
    hook_char_sum,
    hook_char_sum_closed_form,
    hook_partition,
    mn_character,
    s_to_p,
)
from ..combinatorics.cache import character_cache
from ..core.errors import InvalidArgumentError
from ..core.logging import stage
from ..hydro import (
    CharFlow,
    cosine_profile,
    critical_times,
    density_reconstruct,
    limit_moments,
    quartic_residual,
    semiflow_defect,
    taylor_moments,
    velocity,
)
from ..hydro.step import saddle_W
from ..messep import (
    LatticeParams,
    double_hook_eigenvalue,
    eigenbasis_report,
    eigenvalue_of,
    expected_moment,
    gap_asymptotics_check,
    hook_eigenvalue,
)
from ..messep.spectral import double_hook_in_box, hook_in_box
from ..simulation import RunSpec, ensemble_moments, run
from ..symmetric import double_hook_expansion, hook_expansion_check, conj_hook_identity, rational_double_hook_check
from ..symmetric.evaluation import (
    random_root_tuple,
    random_unit_tuple,
    relative_residual,
    schur_at_ones,
    schur_eval,
    schur_tableau_eval,
)
from ..symmetric.identities import skew_hook_check
from ..udbm import SchurObservable, energy, low_density_compare, semigroup_moment, spectral_indices
from ..udbm.spectrum import convergence_ratios

logger = logging.getLogger(__name__)

SEED = 20240611


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    checks: List[Check]
    elapsed: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
            "checks": [asdict(c) for c in self.checks],
        }


class Checks:
    """Collects checks of one suite under a tolerance scale."""

    def __init__(self, scale: float):
        self.scale = scale
        self.items: List[Check] = []

    def at_most(self, name: str, value: float, tol: float, **detail) -> None:
        value = float(value)
        ok = bool(np.isfinite(value) and value <= tol * self.scale)
        self.items.append(Check(name, value, tol * self.scale, ok, detail))
        if not ok:
            logger.warning("check %s failed: %.3e > %.3e", name, value, tol * self.scale)

    def exact(self, name: str, mismatches: int, **detail) -> None:
        self.items.append(Check(name, float(mismatches), 0.0, mismatches == 0, detail))
        if mismatches:
            logger.warning("check %s failed: %d mismatches", name, mismatches)

    def within(self, name: str, value: float, lo: float, hi: float, **detail) -> None:
        value = float(value)
        ok = bool(lo <= value <= hi)
        self.items.append(Check(name, value, hi, ok, {"low": lo, **detail}))
        if not ok:
            logger.warning("check %s failed: %.4g outside [%.4g, %.4g]", name, value, lo, hi)


# --- 1. CHARACTERS ---

def characters_suite(c: Checks, n_max: int = 12) -> None:
    bad = total = 0
    for n in range(1, n_max + 1):
        for pi_ in enumerate_partitions(n):
            for j in range(pi_.length):
                total += 1
                bad += hook_char_sum(pi_, j) != hook_char_sum_closed_form(pi_, j)
    c.exact("hook_char_sum_closed_form", bad, n_max=n_max, cases=total)

    bad = 0
    for n in range(1, 9):
        table = character_table(n)
        classes = enumerate_partitions(n)
        for lam in classes:
            for mu in classes:
                s = sum(Fraction(table[lam][p] * table[mu][p], cycle_index(p)) for p in classes)
                bad += s != (1 if lam == mu else 0)
    c.exact("orthogonality", bad, n_max=8)

    bad = 0
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            for pi_ in enumerate_partitions(n):
                sign = (-1) ** (n - pi_.length)
                bad += mn_character(lam, pi_) != sign * mn_character(lam.conjugate(), pi_)
    c.exact("conjugation_sign", bad, n_max=8)

    bad = 0
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            back: Dict = {}
            for pi_, coeff in s_to_p(lam).items():
                for mu, chi in frobenius_p_to_s(pi_).items():
                    back[mu] = back.get(mu, Fraction(0)) + coeff * chi
            bad += any(v != (1 if mu == lam else 0) for mu, v in back.items())
    c.exact("frobenius_round_trip", bad, n_max=8)


# --- 2. SYMMETRIC FUNCTION IDENTITIES ---

def schur_identities_suite(c: Checks, samples: int = 100, n_max: int = 5) -> None:
    rng = np.random.default_rng(SEED)
    L, N = 20, 10
    worst = {"hook_expansion": 0.0, "conj_hook": 0.0, "double_hook_expansion": 0.0, "rational_double_hook": 0.0}
    for _ in range(samples):
        z = random_root_tuple(rng, L, N)
        for n in range(1, n_max + 1):
            worst["hook_expansion"] = max(worst["hook_expansion"], hook_expansion_check(n, z))
            for k in range(n):
                worst["conj_hook"] = max(worst["conj_hook"], conj_hook_identity(n, k, z, L))
            worst["double_hook_expansion"] = max(worst["double_hook_expansion"], double_hook_expansion(n, z, L))
        for n in (1, 2):
            for k in range(n):
                for l in range(n):
                    worst["rational_double_hook"] = max(
                        worst["rational_double_hook"], rational_double_hook_check(n, k, l, z, L)
                    )
    for name, value in worst.items():
        c.at_most(name, value, 1e-9, samples=samples, L=L, N=N)

    small = 4
    skew = 0.0
    for _ in range(samples):
        z = random_root_tuple(rng, 12, small)
        for n in range(2, 5):
            for k in range(n):
                for m in range(1, n):
                    for i in range(m):
                        skew = max(skew, skew_hook_check(Hook(n, k), Hook(m, i), z))
                        skew = max(skew, skew_hook_check(Hook(n, k), Hook(m, i), z, conjugate_inner=True))
    c.at_most("skew_hook", skew, 1e-9, samples=samples, N=small)

    bound = det_vs_tableau = 0.0
    shapes = [lam for n in range(1, 6) for lam in enumerate_partitions(n) if lam.length <= small]
    for _ in range(samples):
        z = random_unit_tuple(rng, small)
        for lam in shapes:
            v = schur_eval(lam, z)
            bound = max(bound, abs(v) - float(schur_at_ones(lam, small)))
            det_vs_tableau = max(det_vs_tableau, relative_residual(v, schur_tableau_eval(lam, z)))
    c.at_most("schur_sup_bound", max(bound, 0.0), 1e-9)
    c.at_most("determinant_vs_tableau", det_vs_tableau, 1e-9)


# --- 3. EIGENBASIS ---

def eigenbasis_suite(c: Checks, L_max: int = 10) -> None:
    worst = {"eigen_residual": 0.0, "gram_deviation": 0.0, "spectrum_deviation": 0.0, "reversibility": 0.0}
    for L in range(2, L_max + 1):
        for N in range(1, L):
            rep = eigenbasis_report(LatticeParams(L, N))
            for key in worst:
                worst[key] = max(worst[key], getattr(rep, key))
    c.at_most("eigen_residual", worst["eigen_residual"], 1e-10, L_max=L_max)
    c.at_most("gram_deviation", worst["gram_deviation"], 1e-9, L_max=L_max)
    c.at_most("spectrum_deviation", worst["spectrum_deviation"], 1e-8, L_max=L_max)
    c.at_most("reversibility", worst["reversibility"], 1e-12, L_max=L_max)

    params = LatticeParams(20, 10)
    hook = dhook = 0.0
    for n in range(1, 7):
        for k in range(n):
            if hook_in_box(n, k, params):
                hook = max(hook, abs(hook_eigenvalue(n, k, params) - eigenvalue_of(hook_partition(n, k), params)))
            for l in range(n):
                if double_hook_in_box(n, k, l, params):
                    lam = double_hook_partition(n, k, l, params.L, params.N)
                    dhook = max(dhook, abs(double_hook_eigenvalue(n, k, l, params) - eigenvalue_of(lam, params)))
    c.at_most("hook_eigenvalue", hook, 1e-12, L=20, N=10)
    c.at_most("double_hook_eigenvalue", dhook, 1e-12, L=20, N=10)


# --- 4. SPECTRAL GAP ---

def spectral_gap_suite(c: Checks) -> None:
    table = gap_asymptotics_check(range(8, 25))
    c.at_most("gap_quartic_spread", table.quartic_spread, 0.2, constant=table.quartic_constant)
    c.exact("gap_positive", sum(r.gap <= 0 for r in table.rows))


# --- 5. HYDRODYNAMICS ---

def hydro_suite(c: Checks) -> None:
    prof = cosine_profile(0.3, 1, 0.5)
    flow = CharFlow(prof)
    t = 0.05
    m = limit_moments(t, prof, prof.alpha, 8)
    c.at_most("first_moment_decay", abs(m[1] - exp(-2 * pi ** 2 * t) * prof.moment(1)), 1e-14)
    c.at_most("moments_vs_characteristics", np.max(np.abs(m - taylor_moments(t, flow, 8))), 1e-8, t=t)
    c.at_most("semiflow", semiflow_defect(prof, 0.02, 0.03, 8), 1e-8)
    grid = density_reconstruct(t, flow, 1024)
    c.at_most("mass", abs(grid.mass - 1), 1e-6, M=1024)
    c.at_most("density_bounds", grid.bounds_violation(), 1e-8)
    c.at_most("velocity_at_zero", abs(velocity(0.0, 0.5) - 2 * pi ** 2), 1e-12)

    lo, hi = critical_times(1 / 3)
    c.at_most("step_critical_times", max(abs(lo - 1 / (4 * pi ** 2)), abs(hi - 3 / (4 * pi ** 2))), 1e-15)
    c.at_most("step_quartic_roots", quartic_residual(1 / 3, lo / 2), 1e-10)
    c.at_most("step_branch_meeting", max(abs(saddle_W(1 / 3, lo)[0] - 1), abs(saddle_W(1 / 3, hi)[1] + 1)), 1e-12)


# --- 6. DYSON MOTION ---

def udbm_suite(c: Checks) -> None:
    N = 3
    energies = [energy(m, N) for m in spectral_indices(N, 60)]
    c.at_most("ground_energy", abs(min(energies)), 1e-12)
    gap = min(e for e in energies if e > 1e-9)
    c.at_most("energy_gap", abs(gap - 2 * pi ** 2), 1e-9)

    x = np.array([0.3, 1.9, 4.0])
    obs = SchurObservable(hook_partition(1, 0))
    exact = semigroup_moment(obs, 0.1, x).value
    proj = semigroup_moment(lambda X: np.exp(1j * X).sum(axis=1), 0.1, x, E_max=200)
    c.at_most("projection_vs_eigenfunction", abs(exact - proj.value), 1e-8, terms=proj.terms)

    rows = low_density_compare([32, 64, 128], 2, 0.05, obs)
    ratios = convergence_ratios(rows)
    c.within("low_density_ratio", min(ratios), 2.0, 6.0, ratios=ratios)
    c.within("low_density_ratio_max", max(ratios), 2.0, 6.0, ratios=ratios)


# --- 7. SIMULATOR ---

def simulator_suite(c: Checks, n_paths: int = 20000) -> None:
    params = LatticeParams(10, 3)
    start = (0, 1, 2)
    spec = RunSpec.from_steps(params, [0, 50, 200], n_paths=n_paths, seed=SEED, initial=start)
    first = run(spec)
    again = run(spec)
    c.exact("seed_determinism", int(np.count_nonzero(first.lifts != again.lifts)))
    sites = np.mod(first.lifts, params.L)
    dup = np.count_nonzero(np.diff(np.sort(sites, axis=2), axis=2) == 0)
    c.exact("exclusion", int(dup))
    worst = 0.0
    for n in range(1, 6):
        for est, steps in zip(ensemble_moments(first, n), first.steps):
            if steps == 0:
                continue
            truth = expected_moment(params, start, n, int(steps))
            worst = max(worst, abs(est.mean - truth) / max(est.stderr, 1e-12))
    c.at_most("mc_vs_exact_sigma", worst, 3.0, paths=n_paths)


SUITES: Dict[str, Callable[[Checks], None]] = {
    "characters": characters_suite,
    "schur-identities": schur_identities_suite,
    "eigenbasis": eigenbasis_suite,
    "spectral-gap": spectral_gap_suite,
    "hydro": hydro_suite,
    "udbm": udbm_suite,
    "simulator": simulator_suite,
}


def suite_names() -> List[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str, tolerance_scale: float = 1.0) -> List[SuiteReport]:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise InvalidArgumentError("unknown verification suite", suite=name, known=suite_names())
    if tolerance_scale <= 0:
        raise InvalidArgumentError("tolerance scale must be positive", scale=tolerance_scale)
    reports = []
    for suite in names:
        checks = Checks(tolerance_scale)
        start = time.perf_counter()
        with stage(logger, "verify", suite=suite) as info:
            SUITES[suite](checks)
            info["failures"] = sum(not x.passed for x in checks.items)
        reports.append(SuiteReport(suite, checks.items, time.perf_counter() - start))
    character_cache().flush()
    return reports
