"""Parity between the compiled kernel and the pure-numpy fallback."""

import numpy as np
import pytest

from evmag import _kernels_py
from evmag import Frame, FrameSequence, SimConfig, simulate_events

try:
    from evmag import _kernels as _kernels_native
except ImportError:  # pragma: no cover - depends on build environment
    _kernels_native = None

needs_native = pytest.mark.skipif(
    _kernels_native is None, reason="compiled kernel extension not built")


def _interval_args(seed, n=256):
    rng = np.random.default_rng(seed)
    l_a = np.log(np.clip(rng.random(n), 0.02, 0.98))
    l_b = np.log(np.clip(rng.random(n), 0.02, 0.98))
    l_ref = l_a + rng.uniform(-0.19, 0.19, n)  # residual below one threshold
    return l_ref, l_a, l_b


class TestPythonKernel:
    def test_no_crossings_no_events(self):
        l = np.log(np.full(16, 0.5))
        x, y, t, p = _kernels_py.interval_events(l.copy(), l, l, 0, 1000, 0.2, 4)
        assert len(t) == 0

    def test_single_crossing_midpoint(self):
        l_a = np.array([0.0])
        l_b = np.array([0.4])
        l_ref = l_a.copy()
        x, y, t, p = _kernels_py.interval_events(l_ref, l_a, l_b, 0, 1000, 0.2, 1)
        assert list(t) == [500, 1000]
        assert list(p) == [1, 1]
        assert l_ref[0] == pytest.approx(0.4)


@needs_native
class TestBackendParity:
    def test_interval_events_identical(self):
        for seed in range(20):
            l_ref, l_a, l_b = _interval_args(seed)
            ref_state_py = l_ref.copy()
            ref_state_nat = l_ref.copy()
            out_py = _kernels_py.interval_events(
                ref_state_py, l_a, l_b, 0, 33_333, 0.2, 16)
            out_nat = _kernels_native.interval_events(
                ref_state_nat, l_a, l_b, 0, 33_333, 0.2, 16)
            for a, b in zip(out_py, out_nat):
                assert np.array_equal(np.asarray(a), np.asarray(b))
            np.testing.assert_allclose(ref_state_py, ref_state_nat, atol=1e-15)

    def test_simulated_streams_identical(self, monkeypatch):
        rng = np.random.default_rng(123)
        arrays = [np.clip(rng.random((24, 24)), 0.05, 0.95) for _ in range(4)]
        frames = FrameSequence([
            Frame(a, t=k * 1000) for k, a in enumerate(arrays)])
        cfg = SimConfig(c=0.15)

        import evmag.simulate as sim

        monkeypatch.setattr(sim, "interval_events", _kernels_py.interval_events)
        s_py = simulate_events(frames, cfg)
        monkeypatch.setattr(sim, "interval_events", _kernels_native.interval_events)
        s_nat = simulate_events(frames, cfg)

        assert len(s_py) == len(s_nat) > 0
        for name in ("x", "y", "t", "p"):
            assert np.array_equal(getattr(s_py, name), getattr(s_nat, name))
