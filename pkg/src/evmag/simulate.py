"""Ideal event-camera simulation and event-based intensity reconstruction.

The simulator thresholds linearly interpolated log intensity between
frames, keeping a per-pixel reference level that advances by exactly one
contrast-threshold step per emitted event, so sub-threshold residuals
carry over across frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import interval_events
from .events import EventStream, accumulate_polarity_map
from .frames import Frame, FrameSequence


@dataclass(frozen=True)
class SimConfig:
    """Event simulator settings.

    c: contrast threshold in log-intensity units.
    log_floor: offset added before the logarithm; defaults to one 8-bit
        quantum so black pixels stay finite.
    noise_rate: spurious events per pixel per second (Poisson, default off).
    seed: RNG seed for noise injection.
    """

    c: float = 0.2
    log_floor: float = 1.0 / 255.0
    noise_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("contrast threshold c must be positive")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")
        if self.noise_rate < 0:
            raise ValueError("noise_rate must be non-negative")


def simulate_events(frames: FrameSequence, config: SimConfig) -> EventStream:
    """Convert a dense frame sequence into an ideal event stream.

    Per pixel, each crossing of the reference level +/- k*c by the linear
    log-intensity interpolant emits one event at the interpolated crossing
    time. Deterministic given inputs and seed.
    """
    if len(frames) < 2:
        raise ValueError("need at least 2 frames to simulate events")
    height, width = frames[0].shape
    ts = frames.timestamps

    l_ref = np.log(frames[0].data + config.log_floor).ravel().copy()
    l_prev = l_ref.copy()

    xs, ys, tts, pps = [], [], [], []
    for k in range(1, len(frames)):
        l_curr = np.log(frames[k].data + config.log_floor).ravel()
        x, y, t, p = interval_events(
            l_ref, l_prev, l_curr, int(ts[k - 1]), int(ts[k]), config.c, width)
        if len(t):
            xs.append(x)
            ys.append(y)
            tts.append(t)
            pps.append(p)
        l_prev = l_curr

    if config.noise_rate > 0:
        x, y, t, p = _noise_events(width, height, int(ts[0]), int(ts[-1]), config)
        if len(t):
            xs.append(x)
            ys.append(y)
            tts.append(t)
            pps.append(p)

    if not xs:
        return EventStream.empty(width, height, int(ts[0]), int(ts[-1]))
    return EventStream.from_arrays(
        width, height, int(ts[0]), int(ts[-1]),
        np.concatenate(xs), np.concatenate(ys),
        np.concatenate(tts), np.concatenate(pps))


def _noise_events(width: int, height: int, t0: int, t1: int, config: SimConfig):
    """Spurious random-polarity events: per-pixel Poisson process."""
    rng = np.random.default_rng(config.seed)
    duration_s = (t1 - t0) * 1e-6
    counts = rng.poisson(config.noise_rate * duration_s, size=height * width)
    total = int(counts.sum())
    pix = np.repeat(np.arange(height * width, dtype=np.int64), counts)
    t = rng.integers(t0, t1 + 1, size=total, dtype=np.int64)
    p = rng.choice(np.array([-1, 1], dtype=np.int8), size=total)
    return pix % width, pix // width, t, p


def reconstruct_intensity(i0: Frame, stream: EventStream, c: float, tau: int,
                          log_floor: float = 0.0) -> Frame:
    """Event-based reconstruction: i0 scaled by exp(c * polarity sum).

    With log_floor > 0 the exponential is applied to i0 + log_floor and the
    offset removed afterwards, matching a simulator that thresholds
    log(I + log_floor). Output is clamped to [0, 1].
    """
    if c <= 0:
        raise ValueError("contrast threshold c must be positive")
    if not (stream.t_start <= tau <= stream.t_end):
        raise ValueError(f"tau={tau} outside stream span [{stream.t_start}, {stream.t_end}]")
    if i0.shape != (stream.height, stream.width):
        raise ValueError("frame extent does not match stream extent")
    psum = accumulate_polarity_map(stream, stream.t_start, tau)
    out = (i0.data + log_floor) * np.exp(c * psum) - log_floor
    return Frame(np.clip(out, 0.0, 1.0), t=int(tau))
