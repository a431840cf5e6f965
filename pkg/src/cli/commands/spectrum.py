import logging
from math import pi

from ...core.logging import stage
from ...messep import LatticeParams, StateSpace, eigenvalue_of, spectral_gap
from ...messep.spectral import perron_value
from ...schemas.run import RunConfig
from ..deps import get_output, param

logger = logging.getLogger(__name__)

NAME = "spectrum"
HELP = "eigenvalues, gap, Perron vector and the partition bijection of one ring"


def add_arguments(parser):
    parser.add_argument("--L", type=int, dest="L", help="ring size")
    parser.add_argument("--N", type=int, dest="N", help="particle count")


def handle(config: RunConfig) -> dict:
    params = LatticeParams(param(config, "L", kind=int), param(config, "N", kind=int))
    out = get_output(config)
    with stage(logger, "spectrum", L=params.L, N=params.N) as info:
        space = StateSpace.build(params)
        rows = []
        for i, (xi, lam) in enumerate(zip(space.configs, space.partitions)):
            rows.append((i, " ".join(map(str, xi)), str(lam), eigenvalue_of(lam, params), perron_value(xi, params)))
        gap = spectral_gap(params)
        info["states"] = len(rows)
    out.csv("spectrum.csv", ["index", "configuration", "partition", "eigenvalue", "psi"], rows)
    summary = {
        "L": params.L,
        "N": params.N,
        "states": len(rows),
        "rho": params.rho,
        "gap": gap,
        "diffusive_gap": 2 * pi ** 2 / params.L ** 2,
    }
    out.json("summary.json", summary)
    return {"summary": summary, "output": out}
