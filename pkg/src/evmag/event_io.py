"""Event stream serialization: EVMG binary container and CSV."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .events import EventStream

MAGIC = b"EVMG"
VERSION = 1
_HEADER = struct.Struct("<4sHHH6x")  # magic, version, width, height, reserved
_RECORD_DTYPE = np.dtype([
    ("t", "<u8"),
    ("x", "<u2"),
    ("y", "<u2"),
    ("p", "i1"),
    ("pad", "V3"),
])


def write_events(stream: EventStream, path: str | Path) -> None:
    """Write a stream as a 16-byte header plus packed 16-byte records."""
    records = np.zeros(len(stream), dtype=_RECORD_DTYPE)
    records["t"] = stream.t
    records["x"] = stream.x
    records["y"] = stream.y
    records["p"] = stream.p
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, stream.width, stream.height))
        fh.write(records.tobytes())


def read_events(path: str | Path, t_start: int | None = None,
                t_end: int | None = None) -> EventStream:
    """Read an EVMG file.

    The container does not carry the stream's time span; unless given, it is
    taken as [0, max event timestamp].
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"truncated EVMG header in {path}")
        magic, version, width, height = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path} is not an EVMG file")
        if version != VERSION:
            raise ValueError(f"unsupported EVMG version {version}")
        records = np.frombuffer(fh.read(), dtype=_RECORD_DTYPE)
    if t_start is None:
        t_start = 0
    if t_end is None:
        t_end = int(records["t"].max()) if len(records) else t_start
    return EventStream.from_arrays(
        width, height, t_start, t_end,
        records["x"].astype(np.int64), records["y"].astype(np.int64),
        records["t"].astype(np.int64), records["p"].astype(np.int8),
    )


def write_events_csv(stream: EventStream, path: str | Path) -> None:
    arr = np.column_stack([stream.t, stream.x, stream.y, stream.p])
    np.savetxt(path, arr, fmt="%d", delimiter=",", header="t_us,x,y,p", comments="")


def read_events_csv(path: str | Path, width: int, height: int,
                    t_start: int | None = None, t_end: int | None = None) -> EventStream:
    arr = np.loadtxt(path, dtype=np.int64, delimiter=",", skiprows=1, ndmin=2)
    if arr.size == 0:
        arr = arr.reshape(0, 4)
    if arr.shape[1] != 4:
        raise ValueError(f"expected 4 CSV columns t_us,x,y,p in {path}")
    t, x, y, p = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    if t_start is None:
        t_start = 0
    if t_end is None:
        t_end = int(t.max()) if len(t) else t_start
    return EventStream.from_arrays(width, height, t_start, t_end, x, y, t, p.astype(np.int8))
