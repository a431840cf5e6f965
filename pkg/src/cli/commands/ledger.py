from ...core.errors import InvalidArgumentError
from ...schemas.run import RunConfig
from .. import ledger
from ..deps import param

NAME = "ledger"
HELP = "list recent runs recorded in the run ledger"
RECORDED = False


def add_arguments(parser):
    parser.add_argument("--limit", type=int, dest="limit", help="number of runs (default 20)")
    parser.add_argument("--filter", dest="command_filter", help="only runs of this command")
    parser.add_argument("--run-id", dest="run_id", help="show one run with its summary")


def handle(config: RunConfig) -> dict:
    run_id = param(config, "run_id", None)
    if run_id:
        result = ledger.get_run(run_id)
    else:
        result = ledger.list_runs(limit=param(config, "limit", 20, kind=int),
                                  command=param(config, "command_filter", None))
    if result["status"] != "success":
        raise InvalidArgumentError(result["message"])
    return {"summary": result, "output": None}
