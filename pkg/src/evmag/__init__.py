"""Analytic event-based motion magnification.

Simulates an ideal event camera from frame sequences, recovers per-pixel
sub-pixel motion from a keyframe plus the event stream via closed-form
windowed least squares, magnifies the motion with optional temporal
band-pass filtering, and evaluates results with PSNR/SSIM and
frequency-recovery metrics.
"""

from ._backend import BACKEND
from .events import (
    Event,
    EventStream,
    VoxelGrid,
    accumulate_polarity,
    accumulate_polarity_map,
    build_voxel_grid,
    polarity_of_change,
)
from .event_io import read_events, read_events_csv, write_events, write_events_csv
from .frames import Frame, FrameSequence, load_image, load_sequence, save_image, save_sequence
from .magnify import (
    FilterSpec,
    MagnifyRequest,
    MagnifyResult,
    magnify_sequence,
    temporal_bandpass,
    warp_magnified,
)
from .metrics import (
    FrequencyReport,
    ProbeRegion,
    dominant_frequency,
    psnr,
    rmse_freq,
    ssim,
)
from .simulate import SimConfig, reconstruct_intensity, simulate_events
from .solver import (
    ContrastMap,
    MotionField,
    SolverConfig,
    contrast_map,
    motion_field_series,
    solve_motion_1d,
    solve_motion_2d,
)
from .synth import (
    DatasetConfig,
    SceneSpec,
    Trajectory,
    generate_dataset,
    generate_trajectory,
    render_scene,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Event",
    "EventStream",
    "VoxelGrid",
    "accumulate_polarity",
    "accumulate_polarity_map",
    "build_voxel_grid",
    "polarity_of_change",
    "read_events",
    "read_events_csv",
    "write_events",
    "write_events_csv",
    "Frame",
    "FrameSequence",
    "load_image",
    "load_sequence",
    "save_image",
    "save_sequence",
    "FilterSpec",
    "MagnifyRequest",
    "MagnifyResult",
    "magnify_sequence",
    "temporal_bandpass",
    "warp_magnified",
    "FrequencyReport",
    "ProbeRegion",
    "dominant_frequency",
    "psnr",
    "rmse_freq",
    "ssim",
    "SimConfig",
    "reconstruct_intensity",
    "simulate_events",
    "ContrastMap",
    "MotionField",
    "SolverConfig",
    "contrast_map",
    "motion_field_series",
    "solve_motion_1d",
    "solve_motion_2d",
    "DatasetConfig",
    "SceneSpec",
    "Trajectory",
    "generate_dataset",
    "generate_trajectory",
    "render_scene",
]
