"""Representation cache files: magic "QFR1", little-endian, bit-exact.

Layout: 4 magic bytes, then a header of three signed 64-bit form coefficients
and an unsigned 64-bit record count, then count records of (p: u64, x: i64,
y: i64) sorted by p. The format carries no coverage bound, so readers treat
the largest stored prime as the trusted coverage limit.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import CacheFormatError
from .forms import QuadraticForm, RepTable

MAGIC = b"QFR1"
_HEADER = struct.Struct("<qqqQ")

_RECORD_DTYPE = np.dtype([("p", "<u8"), ("x", "<i8"), ("y", "<i8")])


def write_cache(path, table: RepTable) -> None:
    """Write a representation table in the QFR1 layout."""
    form = table.form
    records = np.empty(len(table), dtype=_RECORD_DTYPE)
    records["p"] = table.p.astype(np.uint64)
    records["x"] = table.x
    records["y"] = table.y
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(form.a, form.b, form.c, len(table)))
        fh.write(records.tobytes())


def read_cache(path, expected_form: QuadraticForm | None = None) -> RepTable:
    """Read a QFR1 file back into a table.

    Raises CacheFormatError on a bad magic, truncated payload, unsorted
    records, or (when expected_form is given) mismatched coefficients.
    """
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] != MAGIC:
        raise CacheFormatError(f"{path}: not a QFR1 cache (bad magic)")
    if len(blob) < 4 + _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    a, b, c, count = _HEADER.unpack_from(blob, 4)
    body = blob[4 + _HEADER.size :]
    if len(body) != count * _RECORD_DTYPE.itemsize:
        raise CacheFormatError(
            f"{path}: expected {count} records, payload holds "
            f"{len(body) // _RECORD_DTYPE.itemsize}"
        )
    try:
        form = QuadraticForm(a, b, c)
    except ValueError as exc:
        raise CacheFormatError(f"{path}: invalid form in header: {exc}") from exc
    if expected_form is not None and form != expected_form:
        raise CacheFormatError(
            f"{path}: cache holds form {form}, expected {expected_form}"
        )
    records = np.frombuffer(body, dtype=_RECORD_DTYPE)
    p = records["p"].astype(np.int64)
    if p.size and np.any(np.diff(p) < 0):
        raise CacheFormatError(f"{path}: records are not sorted by p")
    limit = int(p[-1]) if p.size else 0
    return RepTable(
        form,
        p,
        records["x"].astype(np.int64),
        records["y"].astype(np.int64),
        limit,
    )
