"""Evaluation metrics: PSNR, SSIM, dominant frequency, relative frequency error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate

from .frames import Frame, FrameSequence

PSNR_CAP_DB = 100.0  # serialized stand-in for the +inf zero-MSE sentinel


def psnr(a: Frame, b: Frame, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; +inf when the frames are identical."""
    if a.shape != b.shape:
        raise ValueError(f"extent mismatch: {a.shape} vs {b.shape}")
    mse = float(np.mean((a.data - b.data) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(peak * peak / mse)


def _gaussian_kernel(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    r = size // 2
    g = np.exp(-np.arange(-r, r + 1) ** 2 / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(a: Frame, b: Frame) -> float:
    """Mean local SSIM, 11x11 Gaussian window sigma=1.5, K1=0.01, K2=0.03.

    Local statistics are evaluated where the window fits entirely inside
    the frame (borders excluded), dynamic range 1.0.
    """
    if a.shape != b.shape:
        raise ValueError(f"extent mismatch: {a.shape} vs {b.shape}")
    if min(a.shape) < 11:
        raise ValueError("frames must be at least 11 pixels on each side")
    x, y = a.data, b.data
    kernel = _gaussian_kernel()
    c1 = 0.01 ** 2
    c2 = 0.03 ** 2

    def smooth(img):
        return correlate(img, kernel, mode="constant")

    mu_x = smooth(x)
    mu_y = smooth(y)
    sxx = smooth(x * x) - mu_x * mu_x
    syy = smooth(y * y) - mu_y * mu_y
    sxy = smooth(x * y) - mu_x * mu_y
    ssim_map = ((2 * mu_x * mu_y + c1) * (2 * sxy + c2)) / (
        (mu_x ** 2 + mu_y ** 2 + c1) * (sxx + syy + c2))
    r = 5  # 11 // 2: keep fully interior windows only
    return float(ssim_map[r:-r, r:-r].mean())


@dataclass(frozen=True)
class ProbeRegion:
    """Inclusive-exclusive pixel rectangle [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x0 >= self.x1 or self.y0 >= self.y1:
            raise ValueError("probe region must be non-empty")

    def mean_series(self, frames: FrameSequence) -> np.ndarray:
        h, w = frames[0].shape
        if not (0 <= self.x0 and self.x1 <= w and 0 <= self.y0 and self.y1 <= h):
            raise ValueError(f"probe {self} outside {w}x{h} extent")
        return np.array([
            f.data[self.y0:self.y1, self.x0:self.x1].mean() for f in frames])


@dataclass(frozen=True)
class FrequencyReport:
    probe: ProbeRegion
    fps: float
    dominant_hz: float
    spectrum: np.ndarray  # rows of (frequency_hz, amplitude), DC included
    zero_amplitude: bool = False


def auto_probe(frames: FrameSequence, size: int = 8) -> ProbeRegion:
    """Pick a probe square centered on the top temporal-variance pixel."""
    var = frames.stack().var(axis=0)
    y, x = np.unravel_index(np.argmax(var), var.shape)
    h, w = var.shape
    half = size // 2
    x0 = int(np.clip(x - half, 0, w - size))
    y0 = int(np.clip(y - half, 0, h - size))
    return ProbeRegion(x0, y0, x0 + size, y0 + size)


def dominant_frequency(frames: FrameSequence, probe: ProbeRegion, fps: float) -> FrequencyReport:
    """Strongest non-DC frequency of the probe's mean-intensity series.

    The series is detrended (mean removed) before the DFT; a constant
    series reports 0 Hz with the zero-amplitude flag set.
    """
    if len(frames) < 8:
        raise ValueError("need at least 8 frames for frequency analysis")
    series = probe.mean_series(frames)
    series = series - series.mean()
    amps = np.abs(np.fft.rfft(series)) * (2.0 / len(series))
    freqs = np.fft.rfftfreq(len(series), d=1.0 / fps)
    spectrum = np.column_stack([freqs, amps])
    if np.allclose(series, 0.0):
        return FrequencyReport(probe, fps, 0.0, spectrum, zero_amplitude=True)
    k = 1 + int(np.argmax(amps[1:]))  # DC excluded from dominance
    return FrequencyReport(probe, fps, float(freqs[k]), spectrum)


def rmse_freq(estimated_hz, truth_hz) -> float:
    """Mean over scenes of squared relative frequency error."""
    est = np.asarray(estimated_hz, dtype=np.float64)
    truth = np.asarray(truth_hz, dtype=np.float64)
    if est.shape != truth.shape:
        raise ValueError("estimated and truth lists must have equal length")
    if np.any(truth <= 0):
        raise ValueError("truth frequencies must be positive")
    return float(np.mean(((est - truth) / truth) ** 2))
