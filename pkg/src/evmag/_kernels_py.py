"""Pure-numpy implementation of the event-emission kernel.

Backend contract shared with the compiled extension: `interval_events`
advances the per-pixel reference log level in place and returns the events
emitted while log intensity moves linearly from `l_a` to `l_b` over the
interval (ta, tb].
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Tolerance absorbing float error when a change lands exactly on a threshold.
_CROSS_EPS = 1e-9


def interval_events(l_ref: np.ndarray, l_a: np.ndarray, l_b: np.ndarray,
                    ta: int, tb: int, c: float, width: int):
    """Emit threshold-crossing events for one inter-frame interval.

    All log-level arrays are flat float64 of length height*width. Crossing
    number m (1-based) of pixel u fires when the linear interpolant reaches
    l_ref[u] + sign*m*c; timestamps are rounded to integer microseconds.
    l_ref is advanced by sign*n*c per pixel, preserving sub-threshold
    residuals.

    Returns (x, y, t, p) int64/int8 arrays, unsorted.
    """
    d = l_b - l_ref
    n = np.floor(np.abs(d) / c + _CROSS_EPS).astype(np.int64)
    fire = np.flatnonzero(n > 0)
    if len(fire) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, np.zeros(0, dtype=np.int8)

    counts = n[fire]
    sgn = np.where(d[fire] > 0, 1, -1).astype(np.int64)
    pix = np.repeat(fire, counts)
    sgn_ev = np.repeat(sgn, counts)
    # m = 1..count per pixel
    starts = np.cumsum(counts) - counts
    m = np.arange(len(pix), dtype=np.int64) - np.repeat(starts, counts) + 1

    level = l_ref[pix] + sgn_ev * m * c
    frac = (level - l_a[pix]) / (l_b[pix] - l_a[pix])
    t = np.rint(ta + (tb - ta) * frac).astype(np.int64)
    np.clip(t, ta, tb, out=t)

    l_ref[fire] += sgn * counts * c
    return pix % width, pix // width, t, sgn_ev.astype(np.int8)
