"""Incidence parsing, total infectiousness, and the observed log-ratio series."""

import datetime as dt
import io
import math

import numpy as np
import pytest

import rtfilter as rt
from rtfilter import CsvFormatError, GapFilledWarning

from conftest import random_incidence

START = dt.date(2020, 5, 1)


def make_interval(weights):
    w = np.asarray(weights, dtype=float)
    return rt.GenerationInterval(weights=w / w.sum(), s_max=len(w), truncated_mass=0.0)


def make_series(counts):
    return rt.IncidenceSeries(START, np.asarray(counts, dtype=np.int64))


class TestIncidenceSeries:
    def test_validation(self):
        with pytest.raises(ValueError):
            make_series([])
        with pytest.raises(ValueError):
            make_series([3, -1, 2])
        with pytest.raises(ValueError):
            rt.IncidenceSeries(START, np.array([1.5, 2.0]))

    def test_dates(self):
        s = make_series([1, 2, 3])
        assert s.dates == [START, START + dt.timedelta(days=1), START + dt.timedelta(days=2)]

    def test_scaled(self):
        s = make_series([1, 2, 3]).scaled(10)
        assert list(s.counts) == [10, 20, 30]


class TestComputeLambda:
    def test_two_day_weights(self):
        lam = rt.compute_lambda(make_series([10, 10, 10]), make_interval([0.5, 0.5]))
        assert lam[0] == 0.0
        assert lam[1] == pytest.approx(5.0, abs=1e-15)
        assert lam[2] == pytest.approx(10.0, abs=1e-15)

    def test_all_zero_counts(self):
        lam = rt.compute_lambda(make_series([0] * 10), make_interval([0.3, 0.7]))
        assert np.all(lam == 0.0)

    def test_linearity(self):
        rng = np.random.default_rng(5)
        gi = make_interval(rng.random(8))
        a = random_incidence(rng, 40)
        b = random_incidence(rng, 40)
        combined = make_series(a.counts + b.counts)
        assert np.allclose(
            rt.compute_lambda(combined, gi),
            rt.compute_lambda(a, gi) + rt.compute_lambda(b, gi),
            rtol=1e-12,
        )

    def test_causality(self):
        rng = np.random.default_rng(6)
        gi = make_interval(rng.random(6))
        base = random_incidence(rng, 30)
        bumped_counts = base.counts.copy()
        u = 14
        bumped_counts[u] += 500
        lam0 = rt.compute_lambda(base, gi)
        lam1 = rt.compute_lambda(make_series(bumped_counts), gi)
        assert np.array_equal(lam0[: u + 1], lam1[: u + 1])
        assert lam1[u + 1] != lam0[u + 1]


class TestComputeObservations:
    def test_matched_ratio_gives_zero(self):
        # constant counts with a one-day interval: Lambda_t = I_t from day 2
        obs = rt.compute_observations(make_series([50] * 10), make_interval([1.0]), 10)
        assert np.all(obs.valid[1:])
        assert not obs.valid[0]
        assert np.all(obs.y[1:] == 0.0)

    def test_scaling_leaves_y_bit_identical(self):
        rng = np.random.default_rng(7)
        gi = rt.discretize(rt.DEFAULT_ERLANG, 30)
        series = random_incidence(rng, 80)
        obs1 = rt.compute_observations(series, gi)
        obs10 = rt.compute_observations(series.scaled(10), gi)
        both = obs1.valid & obs10.valid
        assert both.any()
        assert np.array_equal(obs1.y[both], obs10.y[both])

    def test_min_incidence_threshold(self):
        counts = [50] * 10
        counts[6] = 9
        obs = rt.compute_observations(make_series(counts), make_interval([1.0]), 10)
        assert not obs.valid[6]
        assert obs.valid[5] and obs.valid[7]
        assert math.isnan(obs.y[6])

    def test_scaling_changes_mask_only_through_threshold(self):
        # K = 2 lifts the 6-count days over the threshold; everything else
        # about the two masks must agree, and y must agree bitwise where
        # both are valid
        counts = [50, 50, 50, 6, 50, 6, 50, 50, 50, 50]
        series = make_series(counts)
        gi = make_interval([1.0])
        obs1 = rt.compute_observations(series, gi, 10)
        obs2 = rt.compute_observations(series.scaled(2), gi, 10)
        newly_valid = obs2.valid & ~obs1.valid
        assert set(np.flatnonzero(newly_valid)) == {3, 5}
        assert np.all(obs2.valid[obs1.valid])  # threshold can only add days
        both = obs1.valid & obs2.valid
        assert np.array_equal(obs1.y[both], obs2.y[both])

    def test_burn_in_excludes_early_days(self, default_gi):
        obs = rt.compute_observations(make_series([100] * 40), default_gi)
        first_valid_day = int(np.flatnonzero(obs.valid)[0]) + 1  # 1-based t
        assert first_valid_day > default_gi.mean
        assert first_valid_day == math.floor(default_gi.mean) + 1

    def test_zero_lambda_invalid(self):
        # a fresh restart after zeros: I_t fine but no accumulated infectiousness
        counts = [0, 0, 0, 50, 50]
        obs = rt.compute_observations(make_series(counts), make_interval([1.0]), 10)
        assert not obs.valid[3]  # Lambda_4 = I_3 = 0
        assert obs.valid[4]

    def test_no_valid_day_raises(self):
        with pytest.raises(ValueError, match="no valid observation day"):
            rt.compute_observations(make_series([1, 1, 1, 1]), make_interval([1.0]), 10)

    def test_y_matches_log_ratio(self, default_gi):
        rng = np.random.default_rng(8)
        series = random_incidence(rng, 60)
        obs = rt.compute_observations(series, default_gi)
        lam = rt.compute_lambda(series, default_gi)
        for i in np.flatnonzero(obs.valid):
            expected = math.log(series.counts[i]) - math.log(lam[i])
            assert obs.y[i] == pytest.approx(expected, abs=1e-12)


class TestObservedRt:
    def test_values(self):
        obs = rt.ObservationSeries(
            START,
            lam=np.array([0.0, 50.0, 25.0]),
            y=np.array([np.nan, 0.0, math.log(2)]),
            valid=np.array([False, True, True]),
        )
        out = rt.observed_rt(obs)
        assert math.isnan(out[0])
        assert out[1] == pytest.approx(1.0)
        assert out[2] == pytest.approx(2.0)


class TestParseCsv:
    def test_happy_path(self):
        text = "date,cases\n2020-05-01,12\n2020-05-02,15\n"
        series = rt.parse_csv(io.StringIO(text))
        assert series.start_date == dt.date(2020, 5, 1)
        assert list(series.counts) == [12, 15]

    def test_gap_filled_with_warning(self):
        text = "date,cases\n2020-05-01,12\n2020-05-03,15\n"
        with pytest.warns(GapFilledWarning):
            series = rt.parse_csv(io.StringIO(text))
        assert list(series.counts) == [12, 0, 15]

    def test_negative_count_names_line(self):
        text = "date,cases\n2020-05-01,-3\n"
        with pytest.raises(CsvFormatError, match="line 2"):
            rt.parse_csv(io.StringIO(text))

    def test_duplicate_date(self):
        text = "date,cases\n2020-05-01,3\n2020-05-01,4\n"
        with pytest.raises(CsvFormatError, match="duplicate"):
            rt.parse_csv(io.StringIO(text))

    def test_empty_file(self):
        with pytest.raises(CsvFormatError, match="empty"):
            rt.parse_csv(io.StringIO(""))
        with pytest.raises(CsvFormatError, match="no data rows"):
            rt.parse_csv(io.StringIO("date,cases\n"))

    def test_bad_header(self):
        with pytest.raises(CsvFormatError, match="header"):
            rt.parse_csv(io.StringIO("day,count\n2020-05-01,3\n"))

    def test_bad_date_and_count(self):
        with pytest.raises(CsvFormatError, match="line 3"):
            rt.parse_csv(io.StringIO("date,cases\n2020-05-01,3\n01/05/2020,4\n"))
        with pytest.raises(CsvFormatError, match="line 2"):
            rt.parse_csv(io.StringIO("date,cases\n2020-05-01,three\n"))

    def test_bytes_input(self):
        series = rt.parse_csv(b"date,cases\n2020-05-01,12\n")
        assert list(series.counts) == [12]

    def test_unordered_rows_are_sorted(self):
        text = "date,cases\n2020-05-02,2\n2020-05-01,1\n"
        series = rt.parse_csv(io.StringIO(text))
        assert list(series.counts) == [1, 2]
