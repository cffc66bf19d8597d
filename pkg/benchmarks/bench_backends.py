"""Compare the compiled event-simulation kernel against the numpy fallback.

Usage: python benchmarks/bench_backends.py [--size N] [--frames K] [--reps R]
"""

import argparse
import statistics
import time

import numpy as np

from evmag import Frame, FrameSequence, SimConfig, simulate_events
from evmag import _kernels_py

try:
    from evmag import _kernels as _kernels_native
except ImportError:
    _kernels_native = None


def make_frames(size: int, n_frames: int, seed: int = 0) -> FrameSequence:
    """Drifting smooth texture: plenty of events everywhere."""
    from scipy.ndimage import gaussian_filter

    rng = np.random.default_rng(seed)
    big = gaussian_filter(rng.random((size, size + n_frames)), sigma=3.0)
    big = 0.05 + 0.9 * (big - big.min()) / (big.max() - big.min())
    return FrameSequence([
        Frame(big[:, k:k + size], t=k * 1000) for k in range(n_frames)])


def bench(kernel, frames: FrameSequence, reps: int) -> tuple[float, int]:
    import evmag.simulate as sim

    original = sim.interval_events
    sim.interval_events = kernel.interval_events
    try:
        cfg = SimConfig(c=0.1)
        stream = simulate_events(frames, cfg)  # warm-up + event count
        times = []
        for _ in range(reps):
            start = time.perf_counter()
            simulate_events(frames, cfg)
            times.append(time.perf_counter() - start)
        return statistics.median(times), len(stream)
    finally:
        sim.interval_events = original


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=256)
    parser.add_argument("--frames", type=int, default=30)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    frames = make_frames(args.size, args.frames)
    t_py, n_events = bench(_kernels_py, frames, args.reps)
    print(f"scene: {args.size}x{args.size}, {args.frames} frames, "
          f"{n_events} events, median of {args.reps} runs")
    print(f"python backend: {t_py * 1e3:8.1f} ms "
          f"({n_events / t_py / 1e6:.2f} Mev/s)")
    if _kernels_native is None:
        print("native backend: not built")
        return
    t_nat, n_nat = bench(_kernels_native, frames, args.reps)
    assert n_nat == n_events, "backends disagree on event count"
    print(f"native backend: {t_nat * 1e3:8.1f} ms "
          f"({n_events / t_nat / 1e6:.2f} Mev/s)")
    print(f"speedup: {t_py / t_nat:.2f}x")


if __name__ == "__main__":
    main()
