import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError
from sqlalchemy.exc import SQLAlchemyError

from .cli import ledger, registry
from .cli.output import to_jsonable
from .core.accel import limit_threads
from .core.config import settings
from .core.errors import ExitCode, InvalidArgumentError, LabError
from .core.logging import configure_logging
from .db.session import create_db_and_tables
from .schemas.run import RunConfig
from .verify import suite_names

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

GLOBAL_FLAGS = {"config", "seed", "out", "threads", "tolerance_scale", "no_ledger", "list", "log_level", "command"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="messep-lab", description="Exclusion process, Dyson motion and hydrodynamic limit lab")
    parser.add_argument("--config", help="JSON run config")
    parser.add_argument("--seed", type=int, help="master seed (u64)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--threads", type=int, help="cap on compiled-kernel worker threads")
    parser.add_argument("--tolerance-scale", type=float, dest="tolerance_scale", help="multiplies every tolerance")
    parser.add_argument("--no-ledger", action="store_true", dest="no_ledger", help="do not record the run")
    parser.add_argument("--list", action="store_true", help="list commands and verification suites")
    parser.add_argument("--log-level", dest="log_level")
    sub = parser.add_subparsers(dest="command")
    registry.register(sub)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    base = {}
    if args.config:
        path = Path(args.config)
        try:
            base = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgumentError("cannot read run config", path=str(path), error=str(exc))
        if not isinstance(base, dict):
            raise InvalidArgumentError("run config must be a JSON object", path=str(path))

    params = dict(base.get("params") or {})
    params.update({k: v for k, v in vars(args).items() if k not in GLOBAL_FLAGS and v is not None})
    data = {**base, "params": params}
    if args.command:
        data["command"] = args.command
    for key in ("seed", "out", "threads", "tolerance_scale"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if "command" not in data:
        raise InvalidArgumentError("no command given", known=list(registry.COMMANDS))
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        raise InvalidArgumentError("invalid run config", errors=exc.errors(include_url=False))


def _start_ledger(config: RunConfig, enabled: bool) -> Optional[str]:
    if not enabled:
        return None
    try:
        create_db_and_tables()
        return ledger.start_run(config)["run_id"]
    except SQLAlchemyError as exc:
        logger.warning("run ledger unavailable: %s", exc)
        return None


def _finish_ledger(run_id: Optional[str], code: int, summary: dict) -> None:
    if run_id is None:
        return
    try:
        ledger.finish_run(run_id, code, to_jsonable(summary))
    except SQLAlchemyError as exc:
        logger.warning("could not close run %s: %s", run_id, exc)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.log_level)

    if args.list:
        print(json.dumps({"commands": list(registry.COMMANDS), "suites": suite_names()}, indent=2))
        return ExitCode.OK

    try:
        config = load_config(args)
    except LabError as exc:
        logger.error("%s", exc)
        return exc.exit_code

    command = registry.get_command(config.command) if config.command in registry.COMMANDS else None
    if command is None:
        logger.error("unknown command %s", config.command)
        return ExitCode.INVALID_INPUT
    limit_threads(config.threads or settings.MAX_THREADS)

    record = settings.RECORD_RUNS and not args.no_ledger and getattr(command, "RECORDED", True)
    run_id = _start_ledger(config, record)
    summary: dict = {}
    code = ExitCode.OK
    try:
        result = command.handle(config)
        summary = result["summary"]
        if result.get("output") is not None:
            result["output"].manifest(config, summary)
        print(json.dumps(to_jsonable(summary), indent=2, default=str))
    except LabError as exc:
        code = exc.exit_code
        summary = {"error": exc.detail, "context": to_jsonable(exc.context)}
        if getattr(exc, "checks", None):
            summary["failed_checks"] = exc.checks
        if getattr(exc, "diagnostics", None):
            summary["diagnostics"] = to_jsonable(exc.diagnostics)
        logger.error("%s failed: %s", config.command, exc)
    except KeyError as exc:
        code = ExitCode.INVALID_INPUT
        summary = {"error": f"missing key {exc}"}
        logger.error("%s failed: missing key %s", config.command, exc)
    finally:
        _finish_ledger(run_id, code, summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
