import logging

from ...core.errors import CheckFailedError
from ...schemas.run import RunConfig
from ...verify import run_suite, suite_names
from ..deps import get_output, param

logger = logging.getLogger(__name__)

NAME = "verify"
HELP = "run property suites and write a JSON verdict per check"


def add_arguments(parser):
    parser.add_argument("--suite", dest="suite", choices=suite_names(), help="suite to run (default: all)")
    parser.add_argument("--list", dest="list_suites", action="store_true", default=None,
                        help="print the suite names and exit")


def handle(config: RunConfig) -> dict:
    if param(config, "list_suites", False):
        return {"summary": {"suites": suite_names()}, "output": None}
    suite = param(config, "suite", "all")
    reports = run_suite(suite, config.tolerance_scale)
    out = get_output(config)
    payload = {"suite": suite, "tolerance_scale": config.tolerance_scale,
               "passed": all(r.passed for r in reports), "reports": [r.as_dict() for r in reports]}
    out.json("verify.json", payload)
    failures = [f"{r.suite}:{name}" for r in reports for name in r.failures]
    summary = {"suite": suite, "passed": not failures, "failures": failures,
               "checks": sum(len(r.checks) for r in reports)}
    if failures:
        out.manifest(config, summary)
        raise CheckFailedError("verification failed", checks=failures, suite=suite)
    return {"summary": summary, "output": out}
