"""Windowed Poisson-Gamma baseline estimator (Cori et al. 2013 style).

Assumes a constant reproduction number over a trailing tau-day window with
a Poisson likelihood I_u ~ Po(R * Lambda_u) and a conjugate Gamma(a, b)
prior, giving the closed-form posterior Gamma(a + sum I, b + sum Lambda)
per day.  Its posterior coefficient of variation 1/sqrt(a + sum I) depends
on the absolute count level, not on the variability of the observed
ratios; the package keeps the estimator around precisely so that contrast
stays measurable.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dlm import DEFAULT_QUANTILE_LEVELS, _validate_levels
from .generation import GenerationInterval
from .incidence import IncidenceSeries, compute_lambda
from .special import gamma_quantile

__all__ = ["CoriConfig", "CoriRecord", "CoriPosterior", "run_cori"]


@dataclass(frozen=True)
class CoriConfig:
    """Window length and Gamma prior shape/rate (defaults Ga(5, 1), tau=7)."""

    tau: int = 7
    a: float = 5.0
    b: float = 1.0

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError(f"tau must be a positive integer, got {self.tau!r}")
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("prior shape a and rate b must be positive")


@dataclass(frozen=True)
class CoriRecord:
    """Posterior Gamma(shape, rate) for one day; fields None when invalid."""

    date: object
    shape: Optional[float]
    rate: Optional[float]
    cv: Optional[float]
    quantiles: Optional[dict]
    valid: bool


@dataclass(frozen=True)
class CoriPosterior:
    records: tuple
    levels: tuple

    def __len__(self) -> int:
        return len(self.records)

    @property
    def dates(self) -> list:
        return [r.date for r in self.records]

    @property
    def valid(self) -> np.ndarray:
        return np.array([r.valid for r in self.records])

    def cv_series(self) -> np.ndarray:
        """Posterior CV per day, NaN where invalid."""
        return np.array([r.cv if r.valid else np.nan for r in self.records])

    def quantile_series(self, p: float) -> np.ndarray:
        return np.array([r.quantiles[p] if r.valid else np.nan for r in self.records])


def run_cori(
    series: IncidenceSeries,
    interval: GenerationInterval,
    config: Optional[CoriConfig] = None,
    levels: Sequence[float] = DEFAULT_QUANTILE_LEVELS,
) -> CoriPosterior:
    """Run the windowed baseline over the whole series.

    A day t is valid when the full window [t-tau+1, t] fits in the series
    and every Lambda in the window is positive; partial windows would bias
    the posterior silently, so they are marked invalid instead.  One record
    is emitted per input day.  Raises ValueError when no day is valid.
    """
    config = config or CoriConfig()
    levels = _validate_levels(levels)
    if len(series) < config.tau:
        raise ValueError(f"series length {len(series)} is shorter than the window tau={config.tau}")
    lam = compute_lambda(series, interval)
    dates = series.dates
    counts = series.counts
    records = []
    for i in range(len(series)):
        lo = i - config.tau + 1
        if lo < 0 or np.any(lam[lo : i + 1] <= 0.0):
            records.append(CoriRecord(dates[i], None, None, None, None, False))
            continue
        shape = config.a + float(counts[lo : i + 1].sum())
        rate = config.b + float(lam[lo : i + 1].sum())
        cv = 1.0 / math.sqrt(shape)
        quantiles = {p: gamma_quantile(p, shape, rate) for p in levels}
        records.append(CoriRecord(dates[i], shape, rate, cv, quantiles, True))
    if not any(r.valid for r in records):
        raise ValueError("no day has a complete window of positive infectiousness")
    return CoriPosterior(records=tuple(records), levels=levels)
