import logging

import numpy as np

from ...core.config import settings
from ...core.errors import InvalidArgumentError
from ...hydro import (
    CharFlow,
    StepProfile,
    density_reconstruct,
    limit_moments,
    make_profile,
    single_mode_profile,
    step_profile,
)
from ...schemas.run import RunConfig
from ..deps import float_list, get_output, json_param, param

logger = logging.getLogger(__name__)

NAME = "hydro"
HELP = "density profiles, moments and front report of the hydrodynamic limit"


def add_arguments(parser):
    parser.add_argument("--profile", dest="profile", help='profile JSON, e.g. {"kind": "step", "alpha": 0.3333}')
    parser.add_argument("--times", dest="times", help="comma-separated times")
    parser.add_argument("--grid", dest="grid", type=int, help="grid size M (power of two)")
    parser.add_argument("--n-max", dest="n_max", type=int, help="highest moment order")
    parser.add_argument("--regimes", dest="regimes", action="store_true", default=None,
                        help="step profile: use t_*/2, (t_*+t^*)/2 and 2t^*")


def handle(config: RunConfig) -> dict:
    spec = json_param(config, "profile", {"kind": "step", "alpha": 0.5})
    profile = make_profile(spec)
    flow = CharFlow(profile)
    M = param(config, "grid", settings.DEFAULT_GRID, kind=int)
    n_max = param(config, "n_max", 8, kind=int)

    report = {"profile": profile.describe()}
    step = step_profile(profile.alpha) if isinstance(profile, StepProfile) else None
    if step is not None and param(config, "regimes", False):
        times = [step.t_lower / 2, (step.t_lower + step.t_upper) / 2, 2 * step.t_upper]
    else:
        times = float_list(config, "times")
    if any(t <= 0 for t in times):
        raise InvalidArgumentError("hydro times must be positive", times=times)

    out = get_output(config)
    moment_rows = []
    densities = []
    for i, t in enumerate(times):
        grid = density_reconstruct(t, flow, M)
        out.csv(f"density_{i:03d}.csv", ["t", "x", "f", "saturated_low", "saturated_high"], grid.rows())
        m = limit_moments(t, profile, profile.alpha, n_max)
        moment_rows.extend((t, n, m[n].real, m[n].imag) for n in range(n_max + 1))
        densities.append({
            "t": t, "mass": grid.mass, "bounds_violation": grid.bounds_violation(),
            "saturated_low": int(grid.saturated_low.sum()), "saturated_high": int(grid.saturated_high.sum()),
            "fronts_flagged": int(np.count_nonzero(grid.fronts)),
        })
    out.csv("moments.csv", ["t", "n", "re", "im"], moment_rows)
    report["densities"] = densities

    if step is not None and profile.alpha <= 0.5:
        report["step"] = step.as_dict()
        report["fronts"] = [step.as_dict(t) for t in times]
    if spec.get("kind") == "single_mode":
        report["single_mode"] = single_mode_profile(int(spec["p"])).as_dict()
    out.json("fronts.json", report)
    return {"summary": {"times": times, "M": M, "densities": densities}, "output": out}
