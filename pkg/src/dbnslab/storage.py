"""Binary cache of solver tables.

File layout (all integers little-endian):

    offset  size  field
    0       4     magic "DBN1"
    4       1     format version, currently 1
    5       1     q = number of bases
    6       4*q   bases, u32 each
    ..      1     number of digits
    ..      4*d   digits, u32 each
    ..      1     n
    ..      2^n   payload: minimum term count per value, one byte each

Every payload byte must be <= 62 (the machine-range bound on term
counts), which doubles as a cheap corruption check.  Writes go to a
temporary file in the target directory and are renamed into place, so
readers never observe a half-written cache.
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

from .errors import BadMagic, BadVersion, Corrupt, DbnsError
from .numsys import BaseSystem, make_base_system
from .solver import DEFAULT_CAP, OptimalTable, solve_batch

MAGIC = b"DBN1"
VERSION = 1
KSTAR_BYTE_MAX = 62

ENV_CACHE_DIR = "DBNSLAB_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dbnslab"


def cache_path(directory, system: BaseSystem, n: int) -> Path:
    b = "-".join(str(x) for x in system.bases)
    d = "-".join(str(x) for x in system.digits)
    return Path(directory) / f"b{b}_d{d}_n{n}.dbns"


def save_table(table: OptimalTable, path) -> None:
    """Write the table in the cache format, atomically."""
    system = table.system
    for x in system.bases + system.digits:
        if x >= 1 << 32:
            raise Corrupt(f"{x} does not fit the u32 descriptor field")
    if max(table.kstar, default=0) > KSTAR_BYTE_MAX:
        raise Corrupt(f"a term count exceeds the format bound {KSTAR_BYTE_MAX}")
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<BB", VERSION, system.q)
    blob += struct.pack(f"<{system.q}I", *system.bases)
    blob += struct.pack("<B", len(system.digits))
    blob += struct.pack(f"<{len(system.digits)}I", *system.digits)
    blob += struct.pack("<B", table.n)
    blob += table.kstar
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_table(path) -> OptimalTable:
    """Read a table back, validating magic, version, and payload."""
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"{path}: not a dbnslab cache file")
    if len(data) < 5:
        raise Corrupt(f"{path}: header cut short")
    if data[4] != VERSION:
        raise BadVersion(f"{path}: version {data[4]}, expected {VERSION}")
    pos = 5

    def take(fmt: str):
        nonlocal pos
        width = struct.calcsize(fmt)
        if pos + width > len(data):
            raise Corrupt(f"{path}: header cut short at byte {pos}")
        out = struct.unpack_from(fmt, data, pos)
        pos += width
        return out

    (q,) = take("<B")
    if q == 0:
        raise Corrupt(f"{path}: zero bases")
    bases = take(f"<{q}I")
    (digit_count,) = take("<B")
    if digit_count == 0:
        raise Corrupt(f"{path}: zero digits")
    digits = take(f"<{digit_count}I")
    (n,) = take("<B")
    payload = data[pos:]
    if n < 1 or len(payload) != 1 << n:
        raise Corrupt(f"{path}: payload is {len(payload)} bytes, expected 2^{n}")
    if max(payload) > KSTAR_BYTE_MAX:
        raise Corrupt(f"{path}: term count byte above {KSTAR_BYTE_MAX}")
    try:
        system = make_base_system(bases, digits)
    except DbnsError as exc:
        raise Corrupt(f"{path}: bad system descriptor: {exc}") from exc
    if system.bases != bases or system.digits != digits:
        raise Corrupt(f"{path}: system descriptor is not sorted and unique")
    return OptimalTable(n, system, bytes(payload))


def load_or_solve(system: BaseSystem, n: int, directory=None, cap: int = DEFAULT_CAP):
    """Cached solve: reuse a valid cache file or compute and write one.

    Returns (table, path).  An unreadable or stale cache file is silently
    recomputed and replaced.
    """
    directory = Path(directory) if directory is not None else default_cache_dir()
    path = cache_path(directory, system, n)
    if path.exists():
        try:
            table = load_table(path)
            if table.system == system and table.n == n:
                return table, path
        except (DbnsError, OSError):
            pass
    table = solve_batch(system, n, cap)
    directory.mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table, path
