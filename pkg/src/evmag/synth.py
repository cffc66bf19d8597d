"""Synthetic sub-pixel-motion scene and dataset generation.

Scenes are rendered at a supersampled resolution where foreground motion is
realized as integer grid shifts, then bicubic-downsampled so the output
carries true sub-pixel displacement (as small as 1/supersample pixels).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.interpolate import CubicSpline
from scipy.ndimage import gaussian_filter

from .event_io import write_events
from .frames import Frame, FrameSequence, save_sequence
from .simulate import SimConfig, simulate_events


@dataclass(frozen=True)
class Trajectory:
    """Prescribed foreground displacement over time, in output pixels.

    displacement(0) is always (0, 0); sample magnitudes never exceed
    amplitude_px (paths are rescaled when a phase offset would push them
    over).
    """

    kind: str = "sinusoid"  # or "spline"
    amplitude_px: float = 0.25
    freq_hz: float = 32.0
    phase: float = 0.0
    direction: tuple[float, float] = (1.0, 0.0)
    n_frames: int = 30
    fps: float = 960.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("sinusoid", "spline"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if self.amplitude_px < 0:
            raise ValueError("amplitude_px must be non-negative")
        if self.fps <= 0 or self.n_frames < 1:
            raise ValueError("fps must be positive and n_frames >= 1")
        if self.kind == "sinusoid":
            if self.freq_hz <= 0:
                raise ValueError("freq_hz must be positive")
            if self.freq_hz >= self.fps / 2:
                raise ValueError(
                    f"freq_hz={self.freq_hz} aliases at fps={self.fps}")
        norm = float(np.hypot(*self.direction))
        if norm == 0:
            raise ValueError("direction must be a non-zero vector")
        object.__setattr__(self, "direction",
                           (self.direction[0] / norm, self.direction[1] / norm))


def generate_trajectory(spec: Trajectory) -> np.ndarray:
    """Displacement samples as an (n_frames, 2) array of (dx, dy) pixels."""
    k = np.arange(spec.n_frames)
    if spec.kind == "sinusoid":
        wave = np.sin(2 * np.pi * spec.freq_hz * k / spec.fps + spec.phase)
        wave = wave - np.sin(spec.phase)  # pin displacement(0) to zero
        disp = spec.amplitude_px * wave[:, None] * np.array(spec.direction)
    else:
        disp = _spline_path(spec)
    mags = np.hypot(disp[:, 0], disp[:, 1])
    peak = mags.max()
    if peak > spec.amplitude_px:
        disp = disp * (spec.amplitude_px / peak)
    return disp


def _spline_path(spec: Trajectory) -> np.ndarray:
    """Smooth seeded random 2D path through bounded control points."""
    rng = np.random.default_rng(spec.seed)
    n_knots = max(4, spec.n_frames // 6)
    knots = np.linspace(0, spec.n_frames - 1, n_knots)
    ctrl = rng.uniform(-spec.amplitude_px, spec.amplitude_px, size=(n_knots, 2))
    path = CubicSpline(knots, ctrl, axis=0)(np.arange(spec.n_frames))
    return path - path[0]


@dataclass(frozen=True)
class SceneSpec:
    """Foreground-over-background compositing recipe at supersampled scale.

    background is a (out_height*supersample, out_width*supersample) array;
    foreground/fg_alpha are smaller arrays placed with their top-left corner
    at fg_pos = (row, col) on the supersampled grid.
    """

    background: np.ndarray
    foreground: np.ndarray
    fg_alpha: np.ndarray
    fg_pos: tuple[int, int]
    out_width: int
    out_height: int
    trajectory: Trajectory
    alpha_mag: float = 0.0
    supersample: int = 16

    def __post_init__(self):
        if self.supersample < 1:
            raise ValueError("supersample must be >= 1")
        if self.alpha_mag < 0:
            raise ValueError("alpha_mag must be non-negative")
        hi_shape = (self.out_height * self.supersample,
                    self.out_width * self.supersample)
        if self.background.shape != hi_shape:
            raise ValueError(
                f"background shape {self.background.shape} != {hi_shape}")
        if self.foreground.shape != self.fg_alpha.shape:
            raise ValueError("foreground and alpha mask shapes differ")
        disp = generate_trajectory(self.trajectory)
        gain = (1.0 + self.alpha_mag) * self.supersample
        reach_x = int(np.ceil(gain * np.abs(disp[:, 0]).max())) + 1
        reach_y = int(np.ceil(gain * np.abs(disp[:, 1]).max())) + 1
        r0, c0 = self.fg_pos
        fh, fw = self.foreground.shape
        if (r0 - reach_y < 0 or c0 - reach_x < 0
                or r0 + fh + reach_y > hi_shape[0]
                or c0 + fw + reach_x > hi_shape[1]):
            raise ValueError(
                "magnified displacement pushes foreground out of frame; need "
                f"({reach_x}, {reach_y}) supersampled cells of margin at fg_pos={self.fg_pos}")


def bicubic_downsample(arr: np.ndarray, factor: int) -> np.ndarray:
    """Antialiased bicubic (Catmull-Rom) decimation by an integer factor."""
    if factor == 1:
        return np.clip(arr, 0.0, 1.0)
    h, w = arr.shape
    img = Image.fromarray(arr.astype(np.float32), mode="F")
    out = img.resize((w // factor, h // factor), Image.Resampling.BICUBIC)
    return np.clip(np.asarray(out, dtype=np.float64), 0.0, 1.0)


def _composite(spec: SceneSpec, shift_cells: tuple[int, int]) -> np.ndarray:
    """Paste the foreground, shifted by whole supersampled cells, and downsample."""
    canvas = spec.background.copy()
    r0 = spec.fg_pos[0] + shift_cells[0]
    c0 = spec.fg_pos[1] + shift_cells[1]
    fh, fw = spec.foreground.shape
    region = canvas[r0:r0 + fh, c0:c0 + fw]
    canvas[r0:r0 + fh, c0:c0 + fw] = (
        spec.fg_alpha * spec.foreground + (1.0 - spec.fg_alpha) * region)
    return bicubic_downsample(canvas, spec.supersample)


def render_scene(spec: SceneSpec) -> tuple[FrameSequence, FrameSequence, np.ndarray]:
    """Render paired small-motion and magnified-motion sequences.

    The magnified sequence uses displacement (1 + alpha_mag) * delta. Both
    realize motion as nearest-integer shifts on the supersampled grid.
    Returns (small, magnified, gt_motion) with gt_motion holding the
    commanded (dx, dy) per frame at output resolution.
    """
    disp = generate_trajectory(spec.trajectory)
    ss = spec.supersample
    timestamps = [round(k / spec.trajectory.fps * 1e6) for k in range(len(disp))]
    small, magnified = [], []
    for k, (dx, dy) in enumerate(disp):
        cells = (int(round(ss * dy)), int(round(ss * dx)))
        small.append(Frame(_composite(spec, cells), t=timestamps[k]))
        gain = 1.0 + spec.alpha_mag
        cells_mag = (int(round(ss * gain * dy)), int(round(ss * gain * dx)))
        magnified.append(Frame(_composite(spec, cells_mag), t=timestamps[k]))
    return FrameSequence(small), FrameSequence(magnified), disp


def procedural_background(out_height: int, out_width: int, supersample: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Smooth random texture in [0.15, 0.85] at supersampled resolution."""
    h = out_height * supersample
    w = out_width * supersample
    noise = gaussian_filter(rng.random((h, w)), sigma=2.0 * supersample)
    lo, hi = noise.min(), noise.max()
    if hi - lo < 1e-12:
        return np.full((h, w), 0.5)
    return 0.15 + 0.7 * (noise - lo) / (hi - lo)


def procedural_foreground(height: int, width: int, rng: np.random.Generator,
                          kind: str = "rect", supersample: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Textured foreground patch plus alpha mask ("rect", "disc" or "bar")."""
    tex = gaussian_filter(rng.random((height, width)), sigma=supersample)
    lo, hi = tex.min(), tex.max()
    if hi - lo < 1e-12:
        tex = np.full((height, width), 0.9)
    else:
        tex = 0.55 + 0.4 * (tex - lo) / (hi - lo)
    if kind == "rect":
        alpha = np.ones((height, width))
    elif kind == "disc":
        yy, xx = np.mgrid[0:height, 0:width]
        r = min(height, width) / 2.0
        alpha = ((yy - (height - 1) / 2.0) ** 2
                 + (xx - (width - 1) / 2.0) ** 2 <= r * r).astype(np.float64)
    elif kind == "bar":
        alpha = np.ones((height, width))
        tex = np.full((height, width), 0.9)
    else:
        raise ValueError(f"unknown foreground kind {kind!r}")
    return tex, alpha


@dataclass(frozen=True)
class DatasetConfig:
    """Parameter ranges for generate_dataset."""

    out_width: int = 64
    out_height: int = 64
    supersample: int = 16
    n_frames: int = 30
    fps: float = 960.0
    amplitude_range: tuple[float, float] = (0.1, 0.3)
    freq_range: tuple[float, float] = (20.0, 100.0)
    alpha_range: tuple[float, float] = (30.0, 80.0)
    fg_fraction: float = 0.5  # foreground side relative to output side
    sim: SimConfig = SimConfig()
    write_16bit: bool = False


def _build_scene(cfg: DatasetConfig, rng: np.random.Generator,
                 seed: int) -> tuple[SceneSpec, str]:
    ss = cfg.supersample
    amplitude = rng.uniform(*cfg.amplitude_range)
    freq = rng.uniform(*cfg.freq_range)
    alpha = rng.uniform(*cfg.alpha_range)
    kind = rng.choice(["sinusoid", "spline"])
    background = procedural_background(cfg.out_height, cfg.out_width, ss, rng)
    fg_h = int(cfg.out_height * cfg.fg_fraction) * ss
    fg_w = int(cfg.out_width * cfg.fg_fraction) * ss
    fg_kind = str(rng.choice(["rect", "disc"]))
    fg, fg_alpha = procedural_foreground(fg_h, fg_w, rng, kind=fg_kind, supersample=ss)
    r0 = (cfg.out_height * ss - fg_h) // 2
    c0 = (cfg.out_width * ss - fg_w) // 2
    # cap the amplitude so the magnified path always stays inside the canvas
    margin_cells = min(r0, c0)
    max_amp = (margin_cells - 2) / ((1.0 + alpha) * ss)
    amplitude = min(amplitude, max_amp)
    traj = Trajectory(kind=str(kind), amplitude_px=amplitude, freq_hz=freq,
                      phase=rng.uniform(0, 2 * np.pi), direction=tuple(rng.normal(size=2)),
                      n_frames=cfg.n_frames, fps=cfg.fps, seed=seed)
    spec = SceneSpec(background=background, foreground=fg, fg_alpha=fg_alpha,
                     fg_pos=(r0, c0), out_width=cfg.out_width,
                     out_height=cfg.out_height, trajectory=traj,
                     alpha_mag=alpha, supersample=ss)
    return spec, fg_kind


def _scene_json(spec: SceneSpec, fg_kind: str, seed: int, scene_seed: int) -> dict:
    t = spec.trajectory
    return {
        "fg_kind": fg_kind,
        "out_width": spec.out_width,
        "out_height": spec.out_height,
        "supersample": spec.supersample,
        "fg_pos": list(spec.fg_pos),
        "fg_shape": list(spec.foreground.shape),
        "alpha_mag": spec.alpha_mag,
        "trajectory": {
            "kind": t.kind, "amplitude_px": t.amplitude_px, "freq_hz": t.freq_hz,
            "phase": t.phase, "direction": list(t.direction),
            "n_frames": t.n_frames, "fps": t.fps, "seed": t.seed,
        },
        "dataset_seed": seed,
        "scene_seed": scene_seed,
    }


def generate_dataset(n_scenes: int, out_dir: str | Path, seed: int = 0,
                     config: DatasetConfig = DatasetConfig()) -> dict:
    """Write n_scenes paired small/magnified sequences with simulated events.

    Per-scene layout: small/####.png, magnified/####.png, events.evmg,
    gt_motion.csv, scene.json; a manifest.json at the dataset root lists
    every artifact with its parameters. Deterministic given (seed, index).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"seed": seed, "n_scenes": n_scenes, "scenes": []}
    for i in range(n_scenes):
        try:
            scene_seed = seed * 100003 + i
            rng = np.random.default_rng([seed, i])
            spec, fg_kind = _build_scene(config, rng, scene_seed)
            small, magnified, gt = render_scene(spec)
            scene_dir = out_dir / f"scene_{i:04d}"
            bits = 16 if config.write_16bit else 8
            save_sequence(small, scene_dir / "small", bits=bits)
            save_sequence(magnified, scene_dir / "magnified", bits=bits)
            stream = simulate_events(small, config.sim)
            write_events(stream, scene_dir / "events.evmg")
            rows = "\n".join(
                f"{k},{float(dx)!r},{float(dy)!r}" for k, (dx, dy) in enumerate(gt))
            (scene_dir / "gt_motion.csv").write_text(f"frame,dx_px,dy_px\n{rows}\n")
            scene_info = _scene_json(spec, fg_kind, seed, scene_seed)
            scene_info["n_events"] = len(stream)
            scene_info["sim"] = {
                "c": config.sim.c, "log_floor": config.sim.log_floor,
                "noise_rate": config.sim.noise_rate, "seed": config.sim.seed,
            }
            (scene_dir / "scene.json").write_text(
                json.dumps(scene_info, indent=2, sort_keys=True))
            manifest["scenes"].append({
                "index": i,
                "dir": scene_dir.name,
                "alpha_mag": spec.alpha_mag,
                "n_events": len(stream),
                "scene_seed": scene_seed,
            })
        except OSError as exc:
            raise OSError(f"scene {i}: {exc}") from exc
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True))
    return manifest


def manifest_digest(out_dir: str | Path) -> str:
    """SHA-256 of the manifest file, for reproducibility checks."""
    return hashlib.sha256((Path(out_dir) / "manifest.json").read_bytes()).hexdigest()
