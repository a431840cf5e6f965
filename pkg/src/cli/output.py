"""CSV and JSON emitters: header row, UTF-8, '.' decimals, repr-exact floats."""
import csv
import json
import logging
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from ..core.config import settings
from ..schemas.run import Manifest, RunConfig

logger = logging.getLogger(__name__)


def _cell(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


class OutputDir:
    """Collects the files one command writes, for the manifest."""

    def __init__(self, path: str):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.files: List[str] = []

    def csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        target = self.path / name
        with target.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        self.files.append(name)
        logger.debug("wrote %s", target)
        return target

    def json(self, name: str, payload: Any) -> Path:
        target = self.path / name
        target.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self.files.append(name)
        return target

    def manifest(self, config: RunConfig, summary: Dict[str, Any]) -> Path:
        m = Manifest(
            command=config.command, seed=config.seed, params=_jsonable(config.params),
            versions=versions(), files=sorted(self.files), summary=_jsonable(summary),
        )
        target = self.path / "manifest.json"
        target.write_text(m.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return target


def versions() -> Dict[str, str]:
    out = {settings.PROJECT_NAME: settings.VERSION}
    for pkg in ("numpy", "scipy", "numba", "sqlmodel"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = "missing"
    return out


def to_jsonable(v: Any) -> Any:
    return _jsonable(v)
