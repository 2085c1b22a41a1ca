"""Shared fixtures and synthetic-data helpers."""

import datetime as dt
import math
from pathlib import Path

import numpy as np
import pytest

import rtfilter as rt

REPO_ROOT = Path(__file__).resolve().parent.parent
BUNDLED_CSV = REPO_ROOT / "data" / "synthetic_120d.csv"


@pytest.fixture(scope="session")
def default_gi():
    return rt.discretize(rt.DEFAULT_ERLANG, rt.DEFAULT_S_MAX)


@pytest.fixture(scope="session")
def bundled_csv():
    assert BUNDLED_CSV.exists()
    return BUNDLED_CSV


def series_from_ratios(y_path, interval, base=10000, warm=45, start=dt.date(2020, 3, 1)):
    """Incidence whose observed log-ratios follow y_path (up to count rounding).

    Seeds ``warm`` constant days so the convolution window is full, then sets
    I_t = round(Lambda_t * exp(y_t)) day by day.
    """
    counts = list(np.full(warm, base))
    w = interval.weights
    s_len = len(w)
    assert warm >= s_len
    for yt in y_path:
        lam = float(np.dot(np.array(counts[-s_len:], dtype=float)[::-1], w))
        counts.append(max(int(round(lam * math.exp(yt))), 1))
    return rt.IncidenceSeries(start, np.array(counts, dtype=np.int64))


def random_incidence(rng, length=90, lo=50, hi=400, drift=0.08, start=dt.date(2020, 3, 1)):
    """A jittery multiplicative-walk incidence series with counts >= lo."""
    base = rng.integers(lo, hi)
    logc = np.log(base) + np.cumsum(rng.normal(0.0, drift, length))
    counts = np.maximum(np.round(np.exp(logc)).astype(np.int64), lo)
    return rt.IncidenceSeries(start, counts)
