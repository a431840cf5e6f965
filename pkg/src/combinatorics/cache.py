"""Persistent character-table cache.

File layout (little-endian): magic ``b"MLC1"``, uint32 format version,
uint32 record count, then per record uint16 weight, uint16 len(lam),
lam parts as uint16, uint16 len(pi), pi parts as uint16, int64 value.
Values outside the int64 range are kept in memory only.
"""
import logging
import os
import struct
from pathlib import Path
from typing import Dict, Optional, Tuple

from ..core.config import settings
from .partitions import Partition

logger = logging.getLogger(__name__)

MAGIC = b"MLC1"
FORMAT_VERSION = 1
_INT64_MIN, _INT64_MAX = -(2 ** 63), 2 ** 63 - 1

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]


class CharacterCache:
    def __init__(self, path: Optional[str] = None):
        self.path = Path(path) if path else None
        self._table: Dict[Key, int] = {}
        self._loaded = False
        self._dirty = False

    def _ensure_loaded(self) -> None:
        if self._loaded:
            return
        self._loaded = True
        if self.path is None or not self.path.exists():
            return
        try:
            self._table.update(read_cache_file(self.path))
            logger.info("loaded %d character values from %s", len(self._table), self.path)
        except (ValueError, struct.error, OSError) as exc:
            logger.warning("ignoring unreadable character cache %s: %s", self.path, exc)

    def get(self, lam: Partition, pi: Partition) -> Optional[int]:
        self._ensure_loaded()
        return self._table.get((lam.parts, pi.parts))

    def put(self, lam: Partition, pi: Partition, value: int) -> None:
        self._ensure_loaded()
        key = (lam.parts, pi.parts)
        if key not in self._table:
            self._table[key] = value
            self._dirty = True

    def __len__(self) -> int:
        self._ensure_loaded()
        return len(self._table)

    def flush(self) -> Optional[Path]:
        if self.path is None or not self._dirty:
            return None
        write_cache_file(self.path, self._table)
        self._dirty = False
        logger.info("wrote %d character values to %s", len(self._table), self.path)
        return self.path


def write_cache_file(path: Path, table: Dict[Key, int]) -> int:
    records = []
    for (lam, pi), value in sorted(table.items()):
        if not _INT64_MIN <= value <= _INT64_MAX:
            continue
        chunk = struct.pack("<HH", sum(lam), len(lam))
        chunk += struct.pack(f"<{len(lam)}H", *lam)
        chunk += struct.pack("<H", len(pi))
        chunk += struct.pack(f"<{len(pi)}H", *pi)
        chunk += struct.pack("<q", value)
        records.append(chunk)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", FORMAT_VERSION, len(records)))
        for chunk in records:
            fh.write(chunk)
    os.replace(tmp, path)
    return len(records)


def read_cache_file(path: Path) -> Dict[Key, int]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ValueError("bad magic header")
    version, count = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported cache version {version}")
    offset = 12
    table: Dict[Key, int] = {}
    for _ in range(count):
        weight, nl = struct.unpack_from("<HH", data, offset)
        offset += 4
        lam = struct.unpack_from(f"<{nl}H", data, offset)
        offset += 2 * nl
        (npi,) = struct.unpack_from("<H", data, offset)
        offset += 2
        pi = struct.unpack_from(f"<{npi}H", data, offset)
        offset += 2 * npi
        (value,) = struct.unpack_from("<q", data, offset)
        offset += 8
        if sum(lam) != weight or sum(pi) != weight:
            raise ValueError("record weight mismatch")
        table[(tuple(lam), tuple(pi))] = value
    return table


_cache: Optional[CharacterCache] = None


def character_cache() -> CharacterCache:
    global _cache
    if _cache is None:
        _cache = CharacterCache(settings.MESSEP_LAB_CACHE)
    return _cache


def reset_character_cache(path: Optional[str] = None) -> CharacterCache:
    global _cache
    _cache = CharacterCache(path)
    return _cache
