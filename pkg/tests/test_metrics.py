import numpy as np
import pytest

from evmag import Frame, FrameSequence, ProbeRegion, dominant_frequency, psnr, rmse_freq, ssim

from oracles import ssim_reference


class TestPsnr:
    def test_identity_is_infinite(self):
        f = Frame(np.random.default_rng(0).random((8, 8)))
        assert psnr(f, f) == float("inf")

    def test_known_mse_gives_20db(self):
        a = Frame(np.full((10, 10), 0.5))
        b = Frame(np.full((10, 10), 0.6))  # MSE = 0.01
        assert psnr(a, b) == pytest.approx(20.0, abs=1e-12)

    def test_single_pixel_difference(self):
        a = np.zeros((10, 10))
        b = a.copy()
        b[0, 0] = 0.5  # MSE = 0.25 / 100
        assert psnr(Frame(a), Frame(b)) == pytest.approx(10 * np.log10(400), abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        a, b = Frame(rng.random((8, 8))), Frame(rng.random((8, 8)))
        assert psnr(a, b) == psnr(b, a)

    def test_rejects_extent_mismatch(self):
        with pytest.raises(ValueError):
            psnr(Frame(np.zeros((8, 8))), Frame(np.zeros((8, 9))))


class TestSsim:
    def test_identity_is_one(self):
        f = Frame(np.random.default_rng(2).random((16, 16)))
        assert ssim(f, f) == pytest.approx(1.0, abs=1e-12)

    def test_matches_direct_formula_reference(self):
        rng = np.random.default_rng(3)
        for _ in range(3):
            a = rng.random((20, 20))
            b = np.clip(a + rng.normal(0, 0.1, a.shape), 0, 1)
            assert ssim(Frame(a), Frame(b)) == pytest.approx(
                ssim_reference(a, b), abs=1e-6)

    def test_symmetric(self):
        rng = np.random.default_rng(4)
        a, b = Frame(rng.random((16, 16))), Frame(rng.random((16, 16)))
        assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)

    def test_anticorrelated_patterns_score_negative(self):
        yy, xx = np.mgrid[0:16, 0:16]
        checker = 0.5 + 0.4 * np.sin(xx * 2.0) * np.sin(yy * 2.0)
        inverted = 1.0 - checker
        assert ssim(Frame(checker), Frame(inverted)) < 0

    def test_less_than_one_under_noise(self):
        rng = np.random.default_rng(5)
        a = rng.random((16, 16))
        b = np.clip(a + rng.normal(0, 0.2, a.shape), 0, 1)
        assert ssim(Frame(a), Frame(b)) < 1.0

    def test_rejects_small_frames(self):
        with pytest.raises(ValueError):
            ssim(Frame(np.zeros((8, 8))), Frame(np.zeros((8, 8))))


def _series_frames(series, fps):
    """Constant-valued frames whose mean follows the given series."""
    frames = [
        Frame(np.full((12, 12), v), t=round(k / fps * 1e6))
        for k, v in enumerate(series)
    ]
    return FrameSequence(frames)


class TestProbeRegion:
    def test_mean_series(self):
        frames = _series_frames([0.1, 0.2, 0.3], fps=100.0)
        probe = ProbeRegion(2, 2, 6, 6)
        np.testing.assert_allclose(probe.mean_series(frames), [0.1, 0.2, 0.3])

    def test_rejects_empty_or_outside(self):
        with pytest.raises(ValueError):
            ProbeRegion(4, 4, 4, 8)
        frames = _series_frames([0.1, 0.2], fps=100.0)
        with pytest.raises(ValueError):
            ProbeRegion(8, 8, 16, 16).mean_series(frames)


class TestDominantFrequency:
    def test_pure_tone_at_exact_bin(self):
        fps, n, hz = 128.0, 128, 24.0
        series = 0.5 + 0.2 * np.sin(2 * np.pi * hz * np.arange(n) / fps)
        frames = _series_frames(series, fps)
        report = dominant_frequency(frames, ProbeRegion(0, 0, 12, 12), fps)
        assert report.dominant_hz == pytest.approx(hz, abs=1e-9)
        assert not report.zero_amplitude

    def test_strongest_of_two_tones_wins(self):
        fps, n = 128.0, 128
        t = np.arange(n) / fps
        series = 0.5 + 0.05 * np.sin(2 * np.pi * 10 * t) + 0.2 * np.sin(2 * np.pi * 30 * t)
        report = dominant_frequency(_series_frames(series, fps),
                                    ProbeRegion(0, 0, 12, 12), fps)
        assert report.dominant_hz == pytest.approx(30.0, abs=1e-9)

    def test_constant_series_flags_zero_amplitude(self):
        frames = _series_frames([0.5] * 16, fps=64.0)
        report = dominant_frequency(frames, ProbeRegion(0, 0, 12, 12), 64.0)
        assert report.zero_amplitude
        assert report.dominant_hz == 0.0

    def test_mean_offset_ignored(self):
        fps, n = 64.0, 64
        tone = 0.1 * np.sin(2 * np.pi * 8 * np.arange(n) / fps)
        r1 = dominant_frequency(_series_frames(0.3 + tone, fps),
                                ProbeRegion(0, 0, 12, 12), fps)
        r2 = dominant_frequency(_series_frames(0.7 + tone, fps),
                                ProbeRegion(0, 0, 12, 12), fps)
        assert r1.dominant_hz == r2.dominant_hz

    def test_spectrum_rows_are_frequency_amplitude(self):
        fps, n = 64.0, 64
        series = 0.5 + 0.2 * np.sin(2 * np.pi * 8 * np.arange(n) / fps)
        report = dominant_frequency(_series_frames(series, fps),
                                    ProbeRegion(0, 0, 12, 12), fps)
        assert report.spectrum.shape == (n // 2 + 1, 2)
        k = int(np.argmin(np.abs(report.spectrum[:, 0] - 8.0)))
        assert report.spectrum[k, 1] == pytest.approx(0.2, abs=1e-9)

    def test_rejects_short_sequences(self):
        frames = _series_frames([0.5] * 4, fps=64.0)
        with pytest.raises(ValueError):
            dominant_frequency(frames, ProbeRegion(0, 0, 12, 12), 64.0)


class TestRmseFreq:
    def test_exact_match_is_zero(self):
        assert rmse_freq([30.0, 60.0], [30.0, 60.0]) == 0.0

    def test_known_value(self):
        # relative errors 0.1 and -0.2 -> mean of squares = 0.025
        assert rmse_freq([33.0, 40.0], [30.0, 50.0]) == pytest.approx(0.025, abs=1e-12)

    def test_scale_invariant(self):
        est, truth = [31.0, 58.0], [30.0, 60.0]
        a = rmse_freq(est, truth)
        b = rmse_freq([10 * e for e in est], [10 * t for t in truth])
        assert a == pytest.approx(b, abs=1e-15)

    def test_rejects_mismatched_or_nonpositive(self):
        with pytest.raises(ValueError):
            rmse_freq([30.0], [30.0, 60.0])
        with pytest.raises(ValueError):
            rmse_freq([30.0], [0.0])
