"""Batch command-line surface: simulate, dataset, magnify, eval, spectrum.

Options may come from a JSON/TOML config file (--config); explicit
command-line flags win over config values. Exit codes: 0 success, 2 for
usage/config errors, 1 for runtime failures.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

import click
import numpy as np
from click.core import ParameterSource
from PIL import Image

from . import event_io, frames, metrics
from .magnify import FilterSpec, MagnifyRequest, magnify_sequence
from .simulate import SimConfig, simulate_events
from .synth import DatasetConfig, generate_dataset


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        if p.suffix.lower() == ".toml":
            with open(p, "rb") as fh:
                return tomllib.load(fh)
        return json.loads(p.read_text())
    except (OSError, ValueError, tomllib.TOMLDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")


def _resolve(ctx: click.Context, config: dict, **values) -> dict:
    """Merge config-file values under explicitly given flags."""
    out = {}
    for name, value in values.items():
        src = ctx.get_parameter_source(name)
        if name in config and src != ParameterSource.COMMANDLINE:
            out[name] = config[name]
        else:
            out[name] = value
    return out


def _parse_probe(text: str) -> metrics.ProbeRegion:
    try:
        x0, y0, x1, y1 = (int(v) for v in text.split(","))
        return metrics.ProbeRegion(x0, y0, x1, y1)
    except ValueError as exc:
        raise click.UsageError(f"bad probe {text!r} (want x0,y0,x1,y1): {exc}")


@click.group()
def main():
    """Analytic event-based motion magnification toolkit."""


@main.command()
@click.argument("frames_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--fps", type=float, default=960.0, show_default=True)
@click.option("--c", "c_thresh", type=float, default=0.2, show_default=True)
@click.option("--log-floor", type=float, default=1.0 / 255.0)
@click.option("--noise-rate", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def simulate(ctx, frames_dir, output, config_path, fps, c_thresh, log_floor,
             noise_rate, seed):
    """Convert an image-sequence directory into an EVMG event file."""
    cfg = _resolve(ctx, _load_config(config_path), fps=fps, c_thresh=c_thresh,
                   log_floor=log_floor, noise_rate=noise_rate, seed=seed)
    try:
        seq = frames.load_sequence(frames_dir, cfg["fps"])
        sim = SimConfig(c=cfg["c_thresh"], log_floor=cfg["log_floor"],
                        noise_rate=cfg["noise_rate"], seed=cfg["seed"])
    except (ValueError, FileNotFoundError) as exc:
        raise click.UsageError(str(exc))
    stream = simulate_events(seq, sim)
    event_io.write_events(stream, output)
    duration_s = (stream.t_end - stream.t_start) * 1e-6
    summary = {
        "output": str(output),
        "n_frames": len(seq),
        "n_events": len(stream),
        "duration_s": duration_s,
        "events_per_second": len(stream) / duration_s if duration_s > 0 else 0.0,
        "config": {"fps": cfg["fps"], "c": sim.c, "log_floor": sim.log_floor,
                   "noise_rate": sim.noise_rate, "seed": sim.seed},
    }
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@main.command()
@click.option("-o", "--output", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--n-scenes", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-size", type=int, default=64, show_default=True)
@click.option("--supersample", type=int, default=16, show_default=True)
@click.option("--n-frames", type=int, default=30, show_default=True)
@click.option("--fps", type=float, default=960.0, show_default=True)
@click.option("--amp-min", type=float, default=0.1)
@click.option("--amp-max", type=float, default=0.3)
@click.option("--freq-min", type=float, default=20.0)
@click.option("--freq-max", type=float, default=100.0)
@click.option("--alpha-min", type=float, default=30.0)
@click.option("--alpha-max", type=float, default=80.0)
@click.option("--write-16bit", is_flag=True, default=False)
@click.pass_context
def dataset(ctx, out_dir, config_path, n_scenes, seed, out_size, supersample,
            n_frames, fps, amp_min, amp_max, freq_min, freq_max, alpha_min,
            alpha_max, write_16bit):
    """Generate a paired small/magnified synthetic dataset with events."""
    cfg = _resolve(ctx, _load_config(config_path), n_scenes=n_scenes, seed=seed,
                   out_size=out_size, supersample=supersample, n_frames=n_frames,
                   fps=fps, amp_min=amp_min, amp_max=amp_max, freq_min=freq_min,
                   freq_max=freq_max, alpha_min=alpha_min, alpha_max=alpha_max,
                   write_16bit=write_16bit)
    try:
        ds = DatasetConfig(
            out_width=cfg["out_size"], out_height=cfg["out_size"],
            supersample=cfg["supersample"], n_frames=cfg["n_frames"],
            fps=cfg["fps"], amplitude_range=(cfg["amp_min"], cfg["amp_max"]),
            freq_range=(cfg["freq_min"], cfg["freq_max"]),
            alpha_range=(cfg["alpha_min"], cfg["alpha_max"]),
            write_16bit=cfg["write_16bit"])
        manifest = generate_dataset(cfg["n_scenes"], out_dir, seed=cfg["seed"], config=ds)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(json.dumps({"output": str(out_dir),
                           "n_scenes": manifest["n_scenes"],
                           "seed": manifest["seed"]}, indent=2, sort_keys=True))


def _load_keyframes_gray(i0_path, i1_path, t0, t1):
    i0 = frames.load_image(i0_path, t=t0)
    i1 = frames.load_image(i1_path, t=t1)
    return [(i0, i1, None)]


def _load_keyframes_color(i0_path, i1_path, t0, t1):
    a = np.asarray(Image.open(i0_path).convert("RGB")) / 255.0
    b = np.asarray(Image.open(i1_path).convert("RGB")) / 255.0
    return [(frames.Frame(a[:, :, ch], t=t0), frames.Frame(b[:, :, ch], t=t1), ch)
            for ch in range(3)]


@main.command()
@click.argument("i0_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("i1_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("events_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--alpha", type=float, default=0.0, show_default=True)
@click.option("--n-frames", type=int, default=30, show_default=True)
@click.option("--c", "c_thresh", type=float, default=0.2, show_default=True)
@click.option("--f-lo", type=float, default=None, help="Band-pass low edge (Hz)")
@click.option("--f-hi", type=float, default=None, help="Band-pass high edge (Hz)")
@click.option("--window", type=int, default=5, show_default=True)
@click.option("--t0-us", type=int, default=0, show_default=True)
@click.option("--t1-us", type=int, default=None,
              help="Second keyframe time; defaults to the last event timestamp")
@click.option("--per-channel", is_flag=True, default=False,
              help="Process RGB channels independently instead of Rec.601 luma")
@click.pass_context
def magnify(ctx, i0_path, i1_path, events_path, out_dir, config_path, alpha,
            n_frames, c_thresh, f_lo, f_hi, window, t0_us, t1_us, per_channel):
    """Magnify motion between two keyframes using the event stream."""
    from .solver import SolverConfig

    cfg = _resolve(ctx, _load_config(config_path), alpha=alpha, n_frames=n_frames,
                   c_thresh=c_thresh, f_lo=f_lo, f_hi=f_hi, window=window,
                   t0_us=t0_us, t1_us=t1_us, per_channel=per_channel)
    stream = event_io.read_events(events_path)
    t0 = cfg["t0_us"]
    t1 = cfg["t1_us"] if cfg["t1_us"] is not None else stream.t_end
    if t1 <= t0:
        raise click.UsageError(f"empty keyframe interval: t0={t0}, t1={t1}")
    stream = event_io.read_events(events_path, t_start=min(t0, stream.t_start),
                                  t_end=max(t1, stream.t_end))

    loader = _load_keyframes_color if cfg["per_channel"] else _load_keyframes_gray
    pairs = loader(i0_path, i1_path, t0, t1)
    if pairs[0][0].shape != pairs[0][1].shape:
        raise click.UsageError(
            f"keyframe extents differ: {pairs[0][0].shape} vs {pairs[0][1].shape}")

    span_s = (t1 - t0) * 1e-6
    fps_series = cfg["n_frames"] / span_s
    filter_spec = None
    if (cfg["f_lo"] is None) != (cfg["f_hi"] is None):
        raise click.UsageError("--f-lo and --f-hi must be given together")
    if cfg["f_lo"] is not None:
        try:
            filter_spec = FilterSpec(fps=fps_series, f_lo=cfg["f_lo"], f_hi=cfg["f_hi"])
        except ValueError as exc:
            raise click.UsageError(str(exc))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    channel_outputs = []
    result = None
    for i0, i1, channel in pairs:
        try:
            req = MagnifyRequest(i0=i0, i1=i1, stream=stream, alpha=cfg["alpha"],
                                 n_frames=cfg["n_frames"], c=cfg["c_thresh"],
                                 filter=filter_spec,
                                 solver=SolverConfig(window=cfg["window"]))
        except ValueError as exc:
            raise click.UsageError(str(exc))
        result = magnify_sequence(req)
        channel_outputs.append((channel, result))

    if cfg["per_channel"]:
        for k in range(cfg["n_frames"]):
            rgb = np.stack([res.frames[k].data for _, res in channel_outputs], axis=-1)
            Image.fromarray(np.round(rgb * 255).astype(np.uint8), mode="RGB").save(
                out_dir / f"{k:04d}.png")
    else:
        frames.save_sequence(result.frames, out_dir)

    meta = dict(result.metadata)
    meta["warnings"] = result.warnings
    meta["per_channel"] = cfg["per_channel"]
    meta["window"] = cfg["window"]
    meta["inputs"] = {"i0": str(i0_path), "i1": str(i1_path), "events": str(events_path)}
    (out_dir / "result.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    click.echo(json.dumps({"output": str(out_dir), "n_frames": cfg["n_frames"],
                           "n_events": meta["n_events"],
                           "warnings": result.warnings}, indent=2, sort_keys=True))


def _sequence_metrics(out_seq, gt_seq):
    per_frame = []
    for a, b in zip(out_seq, gt_seq):
        if a.shape != b.shape:
            raise click.UsageError(f"extent mismatch: {a.shape} vs {b.shape}")
        p = metrics.psnr(a, b)
        per_frame.append({
            "psnr_db": min(p, metrics.PSNR_CAP_DB),
            "ssim": metrics.ssim(a, b),
        })
    return per_frame


@main.command(name="eval")
@click.option("--output-dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--gt-dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--probe", type=str, default=None, help="x0,y0,x1,y1 pixel rectangle")
@click.option("--fps", type=float, default=None, help="Frame rate of the evaluated sequence")
@click.option("-o", "--report", type=click.Path(dir_okay=False), default=None)
@click.option("--spectrum-csv", type=click.Path(dir_okay=False), default=None)
def eval_cmd(output_dir, gt_dir, probe, fps, report, spectrum_csv):
    """PSNR/SSIM against a ground-truth directory and/or probe spectrum."""
    if gt_dir is None and probe is None:
        raise click.UsageError("need --gt-dir and/or --probe")
    nominal_fps = fps if fps is not None else 1000.0
    out_seq = frames.load_sequence(output_dir, nominal_fps)
    results = {"protocol": "per-frame metrics, then mean"}

    if gt_dir is not None:
        gt_seq = frames.load_sequence(gt_dir, nominal_fps)
        if len(gt_seq) != len(out_seq):
            raise click.UsageError(
                f"frame count mismatch: {len(out_seq)} vs {len(gt_seq)}")
        per_frame = _sequence_metrics(out_seq, gt_seq)
        results["per_frame"] = per_frame
        results["psnr_db_mean"] = float(np.mean([f["psnr_db"] for f in per_frame]))
        results["ssim_mean"] = float(np.mean([f["ssim"] for f in per_frame]))

    if probe is not None:
        if fps is None:
            raise click.UsageError("--probe requires --fps")
        region = _parse_probe(probe)
        fr = metrics.dominant_frequency(out_seq, region, fps)
        results["frequency"] = {
            "probe": [region.x0, region.y0, region.x1, region.y1],
            "fps": fps,
            "dominant_hz": fr.dominant_hz,
            "zero_amplitude": fr.zero_amplitude,
            "spectrum": fr.spectrum.tolist(),
        }
        if spectrum_csv is not None:
            _write_spectrum_csv(fr, spectrum_csv)

    text = json.dumps(results, indent=2, sort_keys=True)
    if report is not None:
        Path(report).write_text(text)
    click.echo(text)


def _write_spectrum_csv(fr: metrics.FrequencyReport, path) -> None:
    rows = "\n".join(f"{f!r},{a!r}" for f, a in fr.spectrum)
    Path(path).write_text(f"freq_hz,amplitude\n{rows}\n")


@main.command()
@click.option("--frames-dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--probe", type=str, required=True, help="x0,y0,x1,y1 pixel rectangle")
@click.option("--fps", type=float, required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def spectrum(frames_dir, probe, fps, output):
    """Dump the probe region's amplitude spectrum as freq_hz,amplitude CSV."""
    seq = frames.load_sequence(frames_dir, fps)
    region = _parse_probe(probe)
    fr = metrics.dominant_frequency(seq, region, fps)
    _write_spectrum_csv(fr, output)
    click.echo(json.dumps({"output": str(output),
                           "dominant_hz": fr.dominant_hz,
                           "zero_amplitude": fr.zero_amplitude}, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
