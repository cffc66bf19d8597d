"""Event, event-stream and voxel-grid types plus polarity integration.

Events carry integer microsecond timestamps and signed integer polarity.
Streams store events as parallel numpy arrays sorted by (t, y, x); all
types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class Event(NamedTuple):
    """One asynchronous brightness-change record."""

    x: int
    y: int
    t: int  # microseconds
    p: int  # -1 or +1, never 0


def polarity_of_change(log_prev: float, log_curr: float, c: float) -> int:
    """Sign of a log-intensity change against contrast threshold c.

    Returns +1 when the change reaches +c, -1 when it reaches -c, else 0
    (no event is emitted for sub-threshold changes).
    """
    if not (np.isfinite(log_prev) and np.isfinite(log_curr) and np.isfinite(c)):
        raise ValueError("inputs must be finite")
    if c <= 0:
        raise ValueError(f"contrast threshold must be positive, got {c}")
    d = log_curr - log_prev
    if d >= c:
        return 1
    if d <= -c:
        return -1
    return 0


@dataclass(frozen=True)
class EventStream:
    """Time-sorted event collection over a fixed sensor extent.

    ``x``, ``y``, ``t``, ``p`` are parallel arrays sorted non-decreasing by
    t with ties broken by (y, x) ascending.
    """

    width: int
    height: int
    t_start: int
    t_end: int
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("sensor extent must be positive")
        if self.t_start > self.t_end:
            raise ValueError("t_start must not exceed t_end")
        x = np.ascontiguousarray(self.x, dtype=np.int64)
        y = np.ascontiguousarray(self.y, dtype=np.int64)
        t = np.ascontiguousarray(self.t, dtype=np.int64)
        p = np.ascontiguousarray(self.p, dtype=np.int8)
        if not (len(x) == len(y) == len(t) == len(p)):
            raise ValueError("event arrays must have equal length")
        if len(t):
            if t[0] < self.t_start or t[-1] > self.t_end:
                raise ValueError("event timestamps must lie in [t_start, t_end]")
            if np.any(x < 0) or np.any(x >= self.width) or np.any(y < 0) or np.any(y >= self.height):
                raise ValueError("event coordinates outside sensor extent")
            if np.any(p == 0) or np.any(np.abs(p) > 1):
                raise ValueError("polarity must be -1 or +1")
        for name, arr in (("x", x), ("y", y), ("t", t), ("p", p)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_arrays(cls, width, height, t_start, t_end, x, y, t, p) -> EventStream:
        """Build a stream, sorting events by (t, y, x)."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        t = np.asarray(t, dtype=np.int64)
        p = np.asarray(p, dtype=np.int8)
        order = np.lexsort((x, y, t))
        return cls(int(width), int(height), int(t_start), int(t_end),
                   x[order], y[order], t[order], p[order])

    @classmethod
    def empty(cls, width: int, height: int, t_start: int, t_end: int) -> EventStream:
        z = np.zeros(0, dtype=np.int64)
        return cls(width, height, t_start, t_end, z, z, z, z.astype(np.int8))

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self):
        for i in range(len(self.t)):
            yield Event(int(self.x[i]), int(self.y[i]), int(self.t[i]), int(self.p[i]))

    def slice_time(self, t0: int, t1: int) -> EventStream:
        """Events with t in (t0, t1], re-wrapped as a stream over [t0, t1]."""
        lo = np.searchsorted(self.t, t0, side="right")
        hi = np.searchsorted(self.t, t1, side="right")
        return EventStream(self.width, self.height, int(t0), int(t1),
                           self.x[lo:hi], self.y[lo:hi], self.t[lo:hi], self.p[lo:hi])


def accumulate_polarity(stream: EventStream, x: int, y: int, t0: int, tau: int) -> int:
    """Signed count of events at (x, y) with t in (t0, tau].

    Discretization of the polarity integral: each event contributes its
    polarity once.
    """
    if t0 > tau:
        raise ValueError("t0 must not exceed tau")
    if not (0 <= x < stream.width and 0 <= y < stream.height):
        raise ValueError(f"pixel ({x}, {y}) outside {stream.width}x{stream.height} extent")
    lo = np.searchsorted(stream.t, t0, side="right")
    hi = np.searchsorted(stream.t, tau, side="right")
    sel = (stream.x[lo:hi] == x) & (stream.y[lo:hi] == y)
    return int(stream.p[lo:hi][sel].sum())


def accumulate_polarity_map(stream: EventStream, t0: int, tau: int) -> np.ndarray:
    """Per-pixel signed event counts over (t0, tau] as an int64 (H, W) array."""
    if t0 > tau:
        raise ValueError("t0 must not exceed tau")
    lo = np.searchsorted(stream.t, t0, side="right")
    hi = np.searchsorted(stream.t, tau, side="right")
    psum = np.zeros((stream.height, stream.width), dtype=np.int64)
    np.add.at(psum, (stream.y[lo:hi], stream.x[lo:hi]), stream.p[lo:hi])
    return psum


@dataclass(frozen=True)
class VoxelGrid:
    """Dense temporal binning of a stream, positive/negative channels apart."""

    n_bins: int
    width: int
    height: int
    pos: np.ndarray  # (n_bins, height, width) non-negative counts
    neg: np.ndarray

    def __post_init__(self):
        shape = (self.n_bins, self.height, self.width)
        for name in ("pos", "neg"):
            arr = getattr(self, name)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            if arr.min() < 0:
                raise ValueError(f"{name} counts must be non-negative")
            arr.setflags(write=False)

    def stacked(self) -> np.ndarray:
        """Combined (2*n_bins, height, width) representation: pos then neg."""
        return np.concatenate([self.pos, self.neg])


def build_voxel_grid(stream: EventStream, n_bins: int, t0: int, t1: int) -> VoxelGrid:
    """Bin events into n_bins half-open upper-inclusive intervals over (t0, t1].

    Bin k covers (t0 + k*dt, t0 + (k+1)*dt]; an event at exactly t0 goes to
    bin 0. Total counts are conserved per polarity channel.
    """
    if t0 >= t1:
        raise ValueError("t0 must be strictly less than t1")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    sel = (stream.t >= t0) & (stream.t <= t1)
    t = stream.t[sel]
    x = stream.x[sel]
    y = stream.y[sel]
    p = stream.p[sel]
    rel = t - t0
    den = t1 - t0
    # Exact integer ceil((rel * n_bins) / den) - 1; rel == 0 maps to bin 0.
    idx = -(-(rel * n_bins) // den) - 1
    idx = np.maximum(idx, 0)
    pos = np.zeros((n_bins, stream.height, stream.width), dtype=np.float64)
    neg = np.zeros_like(pos)
    np.add.at(pos, (idx[p > 0], y[p > 0], x[p > 0]), 1.0)
    np.add.at(neg, (idx[p < 0], y[p < 0], x[p < 0]), 1.0)
    return VoxelGrid(n_bins, stream.width, stream.height, pos, neg)
