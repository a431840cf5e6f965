import logging
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

from .config import settings

LOG_FORMAT = "%(asctime)s [%(name)s:%(lineno)s] %(levelname)s %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured = False


def configure_logging(level: Optional[str] = None) -> None:
    global _configured
    lvl = (level or settings.LOG_LEVEL).upper()
    if not _configured:
        logging.basicConfig(format=LOG_FORMAT, datefmt=DATE_FORMAT, level=lvl)
        _configured = True
    logging.getLogger("src").setLevel(lvl)


@contextmanager
def stage(logger: logging.Logger, name: str, **fields: Any) -> Iterator[Dict[str, Any]]:
    """Log begin/end of a numerical stage with elapsed time.

    The yielded dict is merged into the end record, so callers can attach
    results (residuals, counts) as they become known.
    """
    extra: Dict[str, Any] = {}
    tag = " ".join(f"{k}={v}" for k, v in fields.items())
    logger.info("begin %s %s", name, tag)
    start = time.perf_counter()
    try:
        yield extra
    finally:
        elapsed = time.perf_counter() - start
        info = " ".join(f"{k}={v}" for k, v in extra.items())
        logger.info("end %s elapsed=%.3fs %s", name, elapsed, info)
