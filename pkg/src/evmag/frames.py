"""Frame and frame-sequence containers plus image file I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

# Rec.601 luma weights for collapsing RGB input to a single channel.
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class Frame:
    """Single-channel linear-intensity raster in [0, 1] at one timestamp.

    ``t`` is in integer microseconds. ``data`` is a float64 (height, width)
    array; it is treated as immutable after construction.
    """

    data: np.ndarray
    t: int = 0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError(f"frame data must be 2-D, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("frame intensities must be finite")
        if data.min() < 0.0 or data.max() > 1.0:
            raise ValueError("frame intensities must lie in [0, 1]")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "t", int(self.t))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


@dataclass
class FrameSequence:
    """Time-ordered frames with uniform extent and strictly increasing t."""

    frames: list[Frame] = field(default_factory=list)

    def __post_init__(self):
        if not self.frames:
            return
        shape = self.frames[0].shape
        for a, b in zip(self.frames, self.frames[1:]):
            if b.shape != shape:
                raise ValueError(f"mixed frame extents: {shape} vs {b.shape}")
            if b.t <= a.t:
                raise ValueError("frame timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, i) -> Frame:
        return self.frames[i]

    def __iter__(self):
        return iter(self.frames)

    @property
    def timestamps(self) -> np.ndarray:
        return np.array([f.t for f in self.frames], dtype=np.int64)

    def stack(self) -> np.ndarray:
        """All frames as one (n, height, width) array."""
        return np.stack([f.data for f in self.frames])


def to_gray(arr: np.ndarray) -> np.ndarray:
    """Collapse an (H, W[, 3/4]) array to (H, W) using Rec.601 luma."""
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] in (3, 4):
        return arr[:, :, :3] @ _LUMA
    raise ValueError(f"cannot interpret array of shape {arr.shape} as an image")


def load_image(path: str | Path, t: int = 0) -> Frame:
    """Load a PNG/PGM image as a grayscale Frame (values scaled to [0, 1])."""
    img = Image.open(path)
    arr = np.asarray(img)
    if arr.dtype == np.uint8:
        arr = arr / 255.0
    elif arr.dtype == np.uint16:
        arr = arr / 65535.0
    else:
        arr = arr.astype(np.float64)
    return Frame(np.clip(to_gray(arr), 0.0, 1.0), t=t)


def save_image(frame: Frame, path: str | Path, bits: int = 8) -> None:
    """Write a frame as an 8- or 16-bit grayscale PNG/PGM."""
    if bits == 8:
        arr = np.round(frame.data * 255.0).astype(np.uint8)
        Image.fromarray(arr, mode="L").save(path)
    elif bits == 16:
        arr = np.round(frame.data * 65535.0).astype(np.uint16)
        Image.fromarray(arr).save(path)
    else:
        raise ValueError(f"unsupported bit depth: {bits}")


_IMG_EXT = {".png", ".pgm"}


def load_sequence(directory: str | Path, fps: float) -> FrameSequence:
    """Load a directory of images, lexicographic filename order = time order.

    Frame k gets timestamp round(k / fps * 1e6) microseconds.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"frame directory not found: {directory}")
    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in _IMG_EXT)
    if not paths:
        raise ValueError(f"no .png/.pgm frames in {directory}")
    if fps <= 0:
        raise ValueError("fps must be positive")
    frames = [
        load_image(p, t=round(k / fps * 1e6)) for k, p in enumerate(paths)
    ]
    return FrameSequence(frames)


def save_sequence(seq: FrameSequence, directory: str | Path, bits: int = 8) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, frame in enumerate(seq):
        path = directory / f"{k:04d}.png"
        save_image(frame, path, bits=bits)
        paths.append(path)
    return paths
