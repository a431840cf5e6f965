import logging
from math import pi

import numpy as np

from ...combinatorics import EMPTY, as_partition, partitions_in_box
from ...core.errors import InvalidArgumentError
from ...hydro import CharFlow, StepProfile, density_reconstruct
from ...messep import LatticeParams, eigenvalue_of, make_configuration
from ...schemas.run import RunConfig
from ...simulation import RunSpec, empirical_density, packed_block, run
from ...symmetric.evaluation import roots_of_unity, schur_eval_batch
from ...udbm import SDESpec, SchurObservable, low_density_compare, semigroup_moment, simulate_paths
from ...udbm.spectrum import convergence_ratios
from ..deps import float_list, get_output, int_list, param, tolerance

logger = logging.getLogger(__name__)

NAME = "compare"
HELP = "error tables between the chain, its spectral solution, the Dyson motion and the hydrodynamic limit"
MODES = ("mc-vs-spectral", "messep-vs-udbm", "mc-vs-hydro")


def add_arguments(parser):
    parser.add_argument("--mode", dest="mode", choices=MODES)
    parser.add_argument("--L", type=int, dest="L")
    parser.add_argument("--N", type=int, dest="N")
    parser.add_argument("--paths", type=int, dest="paths")
    parser.add_argument("--steps", dest="steps", help="comma-separated step counts (mc-vs-spectral)")
    parser.add_argument("--L-values", dest="L_values", help="comma-separated ring sizes (messep-vs-udbm)")
    parser.add_argument("--t", type=float, dest="t")
    parser.add_argument("--sde-paths", type=int, dest="sde_paths")
    parser.add_argument("--dt", type=float, dest="dt")
    parser.add_argument("--grid", type=int, dest="grid")
    parser.add_argument("--bandwidth", type=float, dest="bandwidth")


# --- 1. CHAIN VS EXACT SEMIGROUP ---

def schur_observables(params: LatticeParams, count: int = 5):
    shapes = [lam for lam in partitions_in_box(params.N, params.L - params.N) if lam != EMPTY]
    return shapes[:count]


def mc_vs_spectral(config: RunConfig, out) -> dict:
    params = LatticeParams(param(config, "L", 10, kind=int), param(config, "N", 3, kind=int))
    steps = int_list(config, "steps", [200])
    n_paths = param(config, "paths", 20000, kind=int)
    start = make_configuration(param(config, "start", list(range(params.N))), params)
    shapes = [as_partition(s) for s in param(config, "observables", [])] or schur_observables(params)
    record = run(RunSpec.from_steps(params, steps, n_paths=n_paths, seed=config.seed, initial=start))
    sigmas = tolerance(config, "sigmas", 3.0)

    z0 = roots_of_unity(start, params.L)[None, :]
    rows = []
    for r, n in enumerate(record.steps):
        pts = np.exp(2j * pi * np.sort(np.mod(record.lifts[:, r, :], params.L), axis=1) / params.L)
        for lam in shapes:
            vals = schur_eval_batch(lam, pts)
            mean = complex(vals.mean())
            err = float(np.sqrt((np.var(vals.real) + np.var(vals.imag)) / max(n_paths - 1, 1)))
            exact = complex(eigenvalue_of(lam, params) ** int(n) * schur_eval_batch(lam, z0)[0])
            diff = abs(mean - exact)
            rows.append((int(n), str(lam), mean.real, mean.imag, exact.real, exact.imag, diff, err,
                         diff <= sigmas * max(err, 1e-15)))
    out.csv("mc_vs_spectral.csv",
            ["steps", "observable", "mc_re", "mc_im", "exact_re", "exact_im", "abs_err", "stderr", "within"], rows)
    return {"mode": "mc-vs-spectral", "L": params.L, "N": params.N, "paths": n_paths,
            "sigmas": sigmas, "all_within": all(row[-1] for row in rows)}


# --- 2. CHAIN VS DYSON MOTION ---

def messep_vs_udbm(config: RunConfig, out) -> dict:
    N = param(config, "N", 2, kind=int)
    t = param(config, "t", 0.05, kind=float)
    L_values = int_list(config, "L_values", [32, 64, 128])
    obs = SchurObservable(as_partition(param(config, "observable", [1])), param(config, "ell", 0, kind=int))
    rows = low_density_compare(L_values, N, t, obs)
    out.csv("messep_vs_udbm.csv",
            ["L", "observable", "discrete", "continuous", "abs_err", "discrete_im", "continuous_im"],
            [(r.L, r.observable, r.discrete.real, r.continuous.real, r.abs_err, r.discrete.imag, r.continuous.imag)
             for r in rows])
    summary = {"mode": "messep-vs-udbm", "N": N, "t": t, "ratios": convergence_ratios(rows)}

    sde_paths = param(config, "sde_paths", 0, kind=int)
    if sde_paths > 0:
        M = param(config, "sde_N", 3, kind=int)
        t_sde = param(config, "sde_t", 0.1, kind=float)
        start = 2 * np.pi * np.arange(M) / M
        spec = SDESpec(start=start, times=[t_sde], n_paths=sde_paths, dt=param(config, "dt", 1e-4, kind=float),
                       seed=config.seed)
        record = simulate_paths(spec)
        phase = SchurObservable(EMPTY, 1)
        mean, err = record.moment_mean(lambda X: np.exp(1j * X.sum(axis=1)), 0)
        exact = semigroup_moment(phase, t_sde, spec.start).value
        summary["sde"] = {"N": M, "t": t_sde, "paths": sde_paths, "mc": mean, "stderr": err, "exact": exact,
                          "sigma": abs(mean - exact) / max(err, 1e-15), "stalls": record.stalls}
    return summary


# --- 3. CHAIN VS HYDRODYNAMIC DENSITY ---

def smooth(f: np.ndarray, bandwidth: float) -> np.ndarray:
    """Periodic Gaussian smoothing on the uniform grid, same kernel as the empirical density."""
    M = f.shape[0]
    k = np.fft.fftfreq(M, d=1.0 / M)
    return np.fft.ifft(np.fft.fft(f) * np.exp(-0.5 * (bandwidth * k) ** 2)).real


def mc_vs_hydro(config: RunConfig, out) -> dict:
    L = param(config, "L", 600, kind=int)
    alpha = param(config, "alpha", 0.5, kind=float)
    N = param(config, "N", int(round(alpha * L)), kind=int)
    t = param(config, "t", 0.01, kind=float)
    n_paths = param(config, "paths", 20, kind=int)
    M = param(config, "grid", 1024, kind=int)
    bw = param(config, "bandwidth", 0.05, kind=float)
    if n_paths < 1 or t <= 0:
        raise InvalidArgumentError("need paths >= 1 and t > 0", paths=n_paths, t=t)

    params = LatticeParams(L, N)
    record = run(RunSpec(params=params, times=[t], n_paths=n_paths, seed=config.seed, initial=packed_block(params)))
    mc = empirical_density(record.angles(0), M, bw)
    grid = density_reconstruct(t, CharFlow(StepProfile(alpha=N / L)), M)
    hydro = smooth(grid.f, bw)
    l1 = float(np.sum(np.abs(mc - hydro)) * 2 * pi / M)
    out.csv("mc_vs_hydro.csv", ["x", "mc", "hydro", "hydro_raw"], zip(grid.x, mc, hydro, grid.f))
    return {"mode": "mc-vs-hydro", "L": L, "N": N, "t": t, "paths": n_paths, "bandwidth": bw,
            "steps": record.steps.tolist(), "l1": l1}


HANDLERS = {"mc-vs-spectral": mc_vs_spectral, "messep-vs-udbm": messep_vs_udbm, "mc-vs-hydro": mc_vs_hydro}


def handle(config: RunConfig) -> dict:
    mode = param(config, "mode", "mc-vs-spectral")
    if mode not in HANDLERS:
        raise InvalidArgumentError("unknown comparison mode", mode=mode, known=list(MODES))
    out = get_output(config)
    return {"summary": HANDLERS[mode](config, out), "output": out}
