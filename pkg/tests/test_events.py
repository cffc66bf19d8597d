import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evmag import (
    Event,
    EventStream,
    accumulate_polarity,
    accumulate_polarity_map,
    build_voxel_grid,
    polarity_of_change,
)


class TestPolarityOfChange:
    def test_positive_crossing(self):
        assert polarity_of_change(0.0, 0.25, 0.2) == 1

    def test_negative_crossing(self):
        assert polarity_of_change(0.0, -0.25, 0.2) == -1

    def test_subthreshold_is_zero(self):
        assert polarity_of_change(0.0, 0.19, 0.2) == 0
        assert polarity_of_change(0.0, -0.19, 0.2) == 0

    def test_exact_threshold_fires(self):
        assert polarity_of_change(0.0, 0.2, 0.2) == 1
        assert polarity_of_change(0.2, 0.0, 0.2) == -1

    def test_rejects_nonpositive_threshold(self):
        with pytest.raises(ValueError):
            polarity_of_change(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            polarity_of_change(0.0, 1.0, -0.1)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            polarity_of_change(np.nan, 0.0, 0.2)
        with pytest.raises(ValueError):
            polarity_of_change(0.0, np.inf, 0.2)

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 2.0))
    def test_antisymmetric(self, a, b, c):
        assert polarity_of_change(a, b, c) == -polarity_of_change(b, a, c)


def _stream(events, width=8, height=8, t_start=0, t_end=1000):
    evs = [Event(*e) for e in events]
    return EventStream.from_arrays(
        width, height, t_start, t_end,
        [e.x for e in evs], [e.y for e in evs],
        [e.t for e in evs], [e.p for e in evs])


class TestEventStream:
    def test_sorted_by_time_then_pixel(self):
        s = _stream([(3, 1, 500, 1), (0, 0, 100, -1), (1, 1, 500, 1), (3, 0, 500, -1)])
        assert list(s.t) == [100, 500, 500, 500]
        # ties broken by (y, x) ascending
        assert [(e.x, e.y) for e in s][1:] == [(3, 0), (1, 1), (3, 1)]

    def test_rejects_out_of_extent(self):
        with pytest.raises(ValueError):
            _stream([(8, 0, 10, 1)])
        with pytest.raises(ValueError):
            _stream([(0, -1, 10, 1)])

    def test_rejects_zero_polarity(self):
        with pytest.raises(ValueError):
            _stream([(0, 0, 10, 0)])

    def test_rejects_timestamps_outside_span(self):
        with pytest.raises(ValueError):
            _stream([(0, 0, 2000, 1)], t_end=1000)

    def test_rejects_inverted_span(self):
        with pytest.raises(ValueError):
            EventStream.empty(4, 4, 10, 5)

    def test_arrays_are_readonly(self):
        s = _stream([(0, 0, 10, 1)])
        with pytest.raises(ValueError):
            s.t[0] = 5

    def test_slice_time_is_left_open(self):
        s = _stream([(0, 0, 100, 1), (0, 0, 200, 1), (0, 0, 300, 1)])
        sub = s.slice_time(100, 300)
        assert list(sub.t) == [200, 300]
        assert sub.t_start == 100 and sub.t_end == 300

    def test_iter_yields_events(self):
        s = _stream([(2, 3, 10, -1)])
        assert list(s) == [Event(2, 3, 10, -1)]


class TestAccumulatePolarity:
    def test_signed_count(self):
        s = _stream([(1, 1, 100, 1), (1, 1, 200, 1), (1, 1, 300, -1), (2, 1, 150, 1)])
        assert accumulate_polarity(s, 1, 1, 0, 1000) == 1
        assert accumulate_polarity(s, 2, 1, 0, 1000) == 1

    def test_interval_is_left_open_right_closed(self):
        s = _stream([(0, 0, 100, 1), (0, 0, 200, 1)])
        assert accumulate_polarity(s, 0, 0, 100, 200) == 1
        assert accumulate_polarity(s, 0, 0, 99, 100) == 1

    def test_empty_pixel_is_zero(self):
        s = _stream([(1, 1, 100, 1)])
        assert accumulate_polarity(s, 5, 5, 0, 1000) == 0

    def test_rejects_bad_pixel(self):
        s = _stream([(1, 1, 100, 1)])
        with pytest.raises(ValueError):
            accumulate_polarity(s, 8, 0, 0, 1000)

    def test_rejects_inverted_interval(self):
        s = _stream([(1, 1, 100, 1)])
        with pytest.raises(ValueError):
            accumulate_polarity(s, 1, 1, 500, 100)

    def test_map_matches_scalar(self):
        rng = np.random.default_rng(0)
        n = 200
        s = EventStream.from_arrays(
            8, 8, 0, 1000,
            rng.integers(0, 8, n), rng.integers(0, 8, n),
            rng.integers(0, 1001, n), rng.choice([-1, 1], n))
        pmap = accumulate_polarity_map(s, 100, 800)
        for x, y in ((0, 0), (3, 5), (7, 7)):
            assert pmap[y, x] == accumulate_polarity(s, x, y, 100, 800)


class TestVoxelGrid:
    def test_single_event_lands_in_expected_bin(self):
        s = _stream([(2, 3, 250, 1)])
        grid = build_voxel_grid(s, 4, 0, 1000)
        assert grid.pos[0, 3, 2] == 1  # (0, 250] is bin 0
        assert grid.pos.sum() == 1 and grid.neg.sum() == 0

    def test_bin_edges_upper_inclusive(self):
        s = _stream([(0, 0, 250, 1), (0, 0, 251, 1), (0, 0, 0, 1)])
        grid = build_voxel_grid(s, 4, 0, 1000)
        assert grid.pos[0, 0, 0] == 2  # t=0 and t=250 both in bin 0
        assert grid.pos[1, 0, 0] == 1

    def test_counts_conserved(self):
        rng = np.random.default_rng(1)
        n = 500
        s = EventStream.from_arrays(
            16, 16, 0, 10_000,
            rng.integers(0, 16, n), rng.integers(0, 16, n),
            rng.integers(0, 10_001, n), rng.choice([-1, 1], n))
        grid = build_voxel_grid(s, 7, 0, 10_000)
        n_pos = int((s.p > 0).sum())
        assert grid.pos.sum() == n_pos
        assert grid.neg.sum() == n - n_pos

    def test_stacked_shape(self):
        s = _stream([(0, 0, 10, 1)])
        grid = build_voxel_grid(s, 3, 0, 1000)
        assert grid.stacked().shape == (6, 8, 8)

    def test_rejects_bad_args(self):
        s = _stream([(0, 0, 10, 1)])
        with pytest.raises(ValueError):
            build_voxel_grid(s, 0, 0, 1000)
        with pytest.raises(ValueError):
            build_voxel_grid(s, 4, 1000, 1000)

    @settings(deadline=None)
    @given(st.integers(1, 9), st.integers(0, 2**32 - 1))
    def test_consistent_with_accumulator(self, n_bins, seed):
        rng = np.random.default_rng(seed)
        n = 50
        s = EventStream.from_arrays(
            4, 4, 0, 999,
            rng.integers(0, 4, n), rng.integers(0, 4, n),
            rng.integers(0, 1000, n), rng.choice([-1, 1], n))
        grid = build_voxel_grid(s, n_bins, 0, 999)
        signed = (grid.pos - grid.neg).sum(axis=0)
        # all bins together cover (t0, t1] plus events at exactly t0
        at_t0 = np.zeros((4, 4), dtype=np.int64)
        sel = s.t == 0
        np.add.at(at_t0, (s.y[sel], s.x[sel]), s.p[sel])
        expected = accumulate_polarity_map(s, 0, 999) + at_t0
        assert np.array_equal(signed, expected)
