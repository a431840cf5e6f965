import logging

import numpy as np

from ...core.errors import InvalidArgumentError
from ...hydro import make_profile
from ...messep import LatticeParams, make_configuration
from ...schemas.run import RunConfig
from ...simulation import RunSpec, ensemble_moments, packed_block, quantile_placement, run, thinned_sample
from ...simulation.paths import moment_rows
from ...udbm import SDESpec, simulate_paths
from ..deps import float_list, get_output, int_list, json_param, param

logger = logging.getLogger(__name__)

NAME = "simulate"
HELP = "ensemble trajectories of the exclusion chain or of the Dyson motion"


def add_arguments(parser):
    parser.add_argument("--process", dest="process", choices=["messep", "udbm"], help="default: messep")
    parser.add_argument("--L", type=int, dest="L")
    parser.add_argument("--N", type=int, dest="N")
    parser.add_argument("--times", dest="times", help="comma-separated diffusive times")
    parser.add_argument("--steps", dest="steps", help="comma-separated step counts (messep)")
    parser.add_argument("--paths", type=int, dest="paths")
    parser.add_argument("--initial", dest="initial", help='initial condition JSON, e.g. {"kind": "packed"}')
    parser.add_argument("--dt", type=float, dest="dt", help="SDE time step (udbm)")
    parser.add_argument("--n-max", type=int, dest="n_max", help="highest recorded moment")


def initial_configuration(spec: dict, params: LatticeParams, seed: int):
    kind = spec.get("kind", "packed")
    if kind == "packed":
        return packed_block(params)
    if kind == "explicit":
        return make_configuration(spec["sites"], params)
    if kind in ("quantile", "thinned"):
        profile = make_profile(spec["profile"])
        if kind == "quantile":
            return quantile_placement(profile.density, params)
        return thinned_sample(profile.density, params, np.random.default_rng(seed))
    raise InvalidArgumentError("unknown initial condition", kind=kind)


def _simulate_chain(config: RunConfig, out) -> dict:
    params = LatticeParams(param(config, "L", kind=int), param(config, "N", kind=int))
    start = initial_configuration(json_param(config, "initial", {"kind": "packed"}), params, config.seed)
    n_paths = param(config, "paths", 100, kind=int)
    if "steps" in config.params and config.params["steps"] is not None:
        spec = RunSpec.from_steps(params, int_list(config, "steps"), n_paths=n_paths, seed=config.seed, initial=start)
    else:
        spec = RunSpec(params=params, times=float_list(config, "times"), n_paths=n_paths,
                       seed=config.seed, initial=start)
    record = run(spec)
    n_max = param(config, "n_max", 3, kind=int)
    rows = [(p, t, *np.mod(record.lifts[p, r], params.L).tolist())
            for p in range(n_paths) for r, t in enumerate(record.times)]
    out.csv("trajectory.csv", ["path_id", "t"] + [f"x{k + 1}" for k in range(params.N)], rows)
    out.csv("moments.csv", ["path_id", "t", "n", "re", "im"], moment_rows(record, n_max))
    stats = [(e.t, e.n, e.mean.real, e.mean.imag, e.stderr)
             for n in range(1, n_max + 1) for e in ensemble_moments(record, n)]
    out.csv("ensemble_moments.csv", ["t", "n", "re", "im", "stderr"], stats)
    return {"process": "messep", "L": params.L, "N": params.N, "paths": n_paths, "start": list(start),
            "steps": record.steps.tolist()}


def _simulate_udbm(config: RunConfig, out) -> dict:
    init = json_param(config, "initial", {"kind": "packed"})
    if "angles" in init:
        start = np.asarray(init["angles"], dtype=np.float64)
    else:
        N = param(config, "N", kind=int)
        start = 2 * np.pi * np.arange(N) / N
    spec = SDESpec(start=start, times=float_list(config, "times"), n_paths=param(config, "paths", 100, kind=int),
                   dt=param(config, "dt", 1e-4, kind=float), seed=config.seed)
    record = simulate_paths(spec)
    out.csv("trajectory.csv", ["t", "path_id"] + [f"x{k + 1}" for k in range(spec.N)], record.rows())
    return {"process": "udbm", "N": spec.N, "paths": spec.n_paths, "dt": spec.dt, "stalls": record.stalls}


def handle(config: RunConfig) -> dict:
    out = get_output(config)
    process = param(config, "process", "messep")
    if process == "messep":
        summary = _simulate_chain(config, out)
    elif process == "udbm":
        summary = _simulate_udbm(config, out)
    else:
        raise InvalidArgumentError("unknown process", process=process)
    return {"summary": summary, "output": out}
