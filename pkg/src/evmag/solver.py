"""Closed-form sub-pixel motion recovery from a keyframe plus event sums.

Per pixel, displacement is the windowed least-squares solution linking the
log-contrast map s = -grad(I)/I to accumulated event polarity: the scalar
ratio form along one axis, or the 2x2 normal-equations solve for the full
2D field. Window sums use summed-area tables so cost is independent of the
window side.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .events import EventStream
from .frames import Frame


@dataclass(frozen=True)
class SolverConfig:
    window: int = 5            # odd side length of the summation window
    reg_lambda: float = 1e-6   # Tikhonov term added to the denominator
    min_eig: float = 1e-4      # validity gate on the unregularized system
    intensity_floor: float = 1.0 / 255.0

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError("window must be an odd integer >= 1")
        if self.reg_lambda < 0 or self.min_eig < 0:
            raise ValueError("reg_lambda and min_eig must be non-negative")
        if self.intensity_floor <= 0:
            raise ValueError("intensity_floor must be positive")


@dataclass(frozen=True)
class ContrastMap:
    """Per-pixel -grad(I)/I fields with validity flags.

    s_x and s_y are zero (not NaN) at invalid pixels so window sums stay
    finite.
    """

    s_x: np.ndarray
    s_y: np.ndarray
    valid: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.s_x.shape


@dataclass(frozen=True)
class MotionField:
    """Per-pixel 2D displacement in pixels at interpolation time tau."""

    dx: np.ndarray
    dy: np.ndarray
    valid: np.ndarray
    tau: int = 0

    def __post_init__(self):
        if np.any(~np.isfinite(self.dx)) or np.any(~np.isfinite(self.dy)):
            raise ValueError("motion components must be finite")
        if np.any(self.dx[~self.valid] != 0) or np.any(self.dy[~self.valid] != 0):
            raise ValueError("invalid pixels must carry zero displacement")

    @property
    def shape(self) -> tuple[int, int]:
        return self.dx.shape


def contrast_map(i0: Frame, cfg: SolverConfig = SolverConfig()) -> ContrastMap:
    """Central-difference gradients over replicated borders, divided by -I."""
    data = i0.data
    padded = np.pad(data, 1, mode="edge")
    gx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    gy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    denom = np.maximum(data, cfg.intensity_floor)
    valid = data >= cfg.intensity_floor
    s_x = np.where(valid, -gx / denom, 0.0)
    s_y = np.where(valid, -gy / denom, 0.0)
    return ContrastMap(s_x, s_y, valid)


def window_sum(field: np.ndarray, window: int) -> np.ndarray:
    """Sum of field over a centered window x window box, truncated at borders.

    Computed via a summed-area table; O(pixels) regardless of window size.
    """
    h, w = field.shape
    r = window // 2
    sat = np.zeros((h + 1, w + 1), dtype=np.float64)
    np.cumsum(np.cumsum(field, axis=0), axis=1, out=sat[1:, 1:])
    ys = np.arange(h)
    xs = np.arange(w)
    y0 = np.clip(ys - r, 0, h)[:, None]
    y1 = np.clip(ys + r + 1, 0, h)[:, None]
    x0 = np.clip(xs - r, 0, w)[None, :]
    x1 = np.clip(xs + r + 1, 0, w)[None, :]
    return sat[y1, x1] - sat[y0, x1] - sat[y1, x0] + sat[y0, x0]


def solve_motion_1d(cmap: ContrastMap, psum: np.ndarray, c: float,
                    cfg: SolverConfig = SolverConfig(), axis: str = "x"):
    """Scalar windowed least squares along one axis.

    Returns (delta, valid): delta = sum_P(s * c * psum) / (sum_P(s^2) +
    reg_lambda); pixels where the unregularized denominator falls below
    min_eig are flagged invalid and zeroed.
    """
    if c <= 0:
        raise ValueError("contrast threshold c must be positive")
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    s = cmap.s_x if axis == "x" else cmap.s_y
    if psum.shape != s.shape:
        raise ValueError("psum extent does not match contrast map")
    num = window_sum(s * (c * psum), cfg.window)
    den = window_sum(s * s, cfg.window)
    valid = den >= cfg.min_eig
    delta = np.where(valid, num / (den + cfg.reg_lambda), 0.0)
    return delta, valid


def solve_motion_2d(cmap: ContrastMap, psum: np.ndarray, c: float,
                    cfg: SolverConfig = SolverConfig(), tau: int = 0) -> MotionField:
    """2D windowed normal-equations solve (Lucas-Kanade form).

    G = sum_P [sx^2, sx*sy; sx*sy, sy^2] (+ reg_lambda*I), r = sum_P
    [sx, sy] * c * psum, delta = G^-1 r via the explicit 2x2 inverse.
    Pixels whose unregularized G has minimum eigenvalue below min_eig are
    flagged invalid (aperture problem / textureless window).
    """
    if c <= 0:
        raise ValueError("contrast threshold c must be positive")
    if psum.shape != cmap.shape:
        raise ValueError("psum extent does not match contrast map")
    sx, sy = cmap.s_x, cmap.s_y
    b = c * psum
    gxx = window_sum(sx * sx, cfg.window)
    gyy = window_sum(sy * sy, cfg.window)
    gxy = window_sum(sx * sy, cfg.window)
    rx = window_sum(sx * b, cfg.window)
    ry = window_sum(sy * b, cfg.window)

    trace = gxx + gyy
    disc = np.sqrt(np.maximum((gxx - gyy) ** 2 + 4.0 * gxy ** 2, 0.0))
    min_eig = 0.5 * (trace - disc)
    valid = min_eig >= cfg.min_eig

    axx = gxx + cfg.reg_lambda
    ayy = gyy + cfg.reg_lambda
    det = axx * ayy - gxy * gxy
    safe_det = np.where(det != 0, det, 1.0)
    dx = np.where(valid, (ayy * rx - gxy * ry) / safe_det, 0.0)
    dy = np.where(valid, (-gxy * rx + axx * ry) / safe_det, 0.0)
    return MotionField(dx, dy, valid, tau=tau)


def motion_field_series(i0: Frame, stream: EventStream, c: float,
                        n_steps: int, cfg: SolverConfig = SolverConfig()) -> list[MotionField]:
    """Motion fields at n_steps uniform times across the stream span.

    Cumulative polarity sums are advanced incrementally (each event is
    binned once); every field is solved against the single keyframe's
    contrast map.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if i0.shape != (stream.height, stream.width):
        raise ValueError("keyframe extent does not match stream extent")
    cmap = contrast_map(i0, cfg)
    span = stream.t_end - stream.t_start
    taus = [stream.t_start + round(k * span / n_steps) for k in range(1, n_steps + 1)]
    taus[-1] = stream.t_end

    psum = np.zeros((stream.height, stream.width), dtype=np.int64)
    fields = []
    prev = stream.t_start
    for tau in taus:
        lo = np.searchsorted(stream.t, prev, side="right")
        hi = np.searchsorted(stream.t, tau, side="right")
        np.add.at(psum, (stream.y[lo:hi], stream.x[lo:hi]), stream.p[lo:hi])
        fields.append(solve_motion_2d(cmap, psum, c, cfg, tau=int(tau)))
        prev = tau
    return fields


def write_motion_csv(field: MotionField, path: str | Path) -> None:
    """CSV export: one row per pixel, columns x,y,dx,dy,valid."""
    h, w = field.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "dx", "dy", "valid"])
        for y in range(h):
            for x in range(w):
                writer.writerow([x, y, repr(field.dx[y, x]), repr(field.dy[y, x]),
                                 int(field.valid[y, x])])


_RASTER_HEADER = struct.Struct("<4sHHq")  # magic, width, height, tau


def write_motion_raster(field: MotionField, path: str | Path) -> None:
    """Dense binary raster: two float32 planes (dx, dy) plus a u8 validity plane."""
    h, w = field.shape
    with open(path, "wb") as fh:
        fh.write(_RASTER_HEADER.pack(b"MFLD", w, h, field.tau))
        fh.write(field.dx.astype("<f4").tobytes())
        fh.write(field.dy.astype("<f4").tobytes())
        fh.write(field.valid.astype(np.uint8).tobytes())


def read_motion_raster(path: str | Path) -> MotionField:
    with open(path, "rb") as fh:
        magic, w, h, tau = _RASTER_HEADER.unpack(fh.read(_RASTER_HEADER.size))
        if magic != b"MFLD":
            raise ValueError(f"{path} is not a motion raster")
        dx = np.frombuffer(fh.read(4 * h * w), dtype="<f4").reshape(h, w).astype(np.float64)
        dy = np.frombuffer(fh.read(4 * h * w), dtype="<f4").reshape(h, w).astype(np.float64)
        valid = np.frombuffer(fh.read(h * w), dtype=np.uint8).reshape(h, w).astype(bool)
    dx = np.where(valid, dx, 0.0)
    dy = np.where(valid, dy, 0.0)
    return MotionField(dx, dy, valid, tau=int(tau))
