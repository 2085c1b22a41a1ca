"""Incidence ingestion, total infectiousness, and the observed log-ratio series.

The renewal-equation denominator Lambda_t convolves past counts with the
generation-interval weights, using strictly past days only.  The observed
log reproduction number y_t = ln(I_t) - ln(Lambda_t) is what the filter
assimilates; days with too few cases, no accumulated infectiousness, or too
little history are masked out.
"""

import csv
import datetime as dt
import io
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .generation import GenerationInterval

__all__ = [
    "IncidenceSeries",
    "ObservationSeries",
    "CsvFormatError",
    "GapFilledWarning",
    "compute_lambda",
    "compute_observations",
    "observed_rt",
    "parse_csv",
]

DEFAULT_MIN_INCIDENCE = 10


class CsvFormatError(ValueError):
    """Malformed incidence CSV; carries the offending 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GapFilledWarning(UserWarning):
    """A calendar gap in the input was filled with zero counts."""


@dataclass(frozen=True)
class IncidenceSeries:
    """Daily case counts I_1..I_T starting at ``start_date``."""

    start_date: dt.date
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("counts must be a nonempty 1-D array")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(c == np.floor(c)):
                raise ValueError("counts must be integers")
            c = c.astype(np.int64)
        else:
            c = c.astype(np.int64)
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def dates(self) -> list:
        return [self.start_date + dt.timedelta(days=i) for i in range(len(self))]

    def scaled(self, k: int) -> "IncidenceSeries":
        """Counts multiplied by a positive integer, for scale experiments."""
        if k < 1:
            raise ValueError("scale factor must be a positive integer")
        return IncidenceSeries(self.start_date, self.counts * int(k))


@dataclass(frozen=True)
class ObservationSeries:
    """Per-day Lambda_t, log-ratio y_t, and validity mask.

    y is NaN exactly where ``valid`` is False; on valid days it equals
    ln(I_t) - ln(Lambda_t).
    """

    start_date: dt.date
    lam: np.ndarray
    y: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        for name in ("lam", "y", "valid"):
            a = np.asarray(getattr(self, name))
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        if not (len(self.lam) == len(self.y) == len(self.valid)):
            raise ValueError("lam, y, valid must share one length")

    def __len__(self) -> int:
        return len(self.y)

    @property
    def dates(self) -> list:
        return [self.start_date + dt.timedelta(days=i) for i in range(len(self))]


def compute_lambda(series: IncidenceSeries, interval: GenerationInterval) -> np.ndarray:
    """Total infectiousness Lambda_t = sum_s I_{t-s} w_s over s = 1..s_max.

    Only strictly past counts enter, so Lambda_1 = 0 and perturbing day u
    can change Lambda_t for t > u alone.
    """
    counts = series.counts.astype(float)
    conv = np.convolve(counts, interval.weights)
    lam = np.empty(len(counts))
    lam[0] = 0.0
    lam[1:] = conv[: len(counts) - 1]
    return lam


def _log_ratio(counts, i, weights):
    # y_i = ln(I_i / Lambda_i) computed from the lag ratios I_{i-s}/I_i so
    # that integer rescalings of the whole series leave it bit-identical:
    # (K*a)/(K*b) rounds to the same double as a/b.
    s_len = min(i, len(weights))
    lags = counts[i - s_len : i][::-1].astype(float)
    z = float(np.dot(lags / float(counts[i]), weights[:s_len]))
    return -np.log(z)


def compute_observations(
    series: IncidenceSeries,
    interval: GenerationInterval,
    min_incidence: int = DEFAULT_MIN_INCIDENCE,
) -> ObservationSeries:
    """Derive the observed log-ratio series and its validity mask.

    A day t (1-based) is valid when I_t >= min_incidence, Lambda_t > 0, and
    t exceeds the mean generation interval (burn-in: earlier Lambda_t spans
    too little history and yields wild ratios).

    Raises ValueError when no day is valid.
    """
    if min_incidence < 1:
        raise ValueError("min_incidence must be a positive integer")
    lam = compute_lambda(series, interval)
    t = np.arange(1, len(series) + 1)
    valid = (series.counts >= min_incidence) & (lam > 0.0) & (t > interval.mean)
    y = np.full(len(series), np.nan)
    for i in np.flatnonzero(valid):
        y[i] = _log_ratio(series.counts, i, interval.weights)
    finite = np.isfinite(y)
    valid &= finite
    if not valid.any():
        raise ValueError(
            "no valid observation day: need counts >= "
            f"{min_incidence} with positive infectiousness after burn-in"
        )
    y[~valid] = np.nan
    return ObservationSeries(series.start_date, lam=lam, y=y, valid=valid)


def observed_rt(obs: ObservationSeries) -> np.ndarray:
    """Observed reproduction numbers e^{y_t}; NaN where the day is invalid."""
    out = np.full(len(obs), np.nan)
    out[obs.valid] = np.exp(obs.y[obs.valid])
    return out


def _open_source(source):
    # utf-8-sig: spreadsheet exports routinely prepend a BOM
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8-sig", newline="")
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8-sig"))
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8-sig")
        return io.StringIO(data)
    raise TypeError(f"cannot read incidence CSV from {type(source)!r}")


def parse_csv(source: Union[str, Path, bytes, io.IOBase]) -> IncidenceSeries:
    """Parse a ``date,cases`` CSV into an IncidenceSeries.

    Dates are ISO-8601, one row per day.  Gaps in the calendar are filled
    with zero counts and reported as GapFilledWarning; duplicate dates,
    negative counts, and malformed rows are errors naming the line.
    """
    with _open_source(source) as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file") from None
        if [h.strip().lower() for h in header] != ["date", "cases"]:
            raise CsvFormatError("header must be 'date,cases'", line=1)
        by_date: dict = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise CsvFormatError(f"expected 2 fields, got {len(row)}", line=lineno)
            try:
                day = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise CsvFormatError(f"bad ISO-8601 date {row[0]!r}", line=lineno) from None
            try:
                count = int(row[1].strip())
            except ValueError:
                raise CsvFormatError(f"bad case count {row[1]!r}", line=lineno) from None
            if count < 0:
                raise CsvFormatError(f"negative case count {count}", line=lineno)
            if day in by_date:
                raise CsvFormatError(f"duplicate date {day.isoformat()}", line=lineno)
            by_date[day] = count
    if not by_date:
        raise CsvFormatError("no data rows")
    first = min(by_date)
    last = max(by_date)
    n_days = (last - first).days + 1
    counts = np.zeros(n_days, dtype=np.int64)
    missing = []
    for i in range(n_days):
        day = first + dt.timedelta(days=i)
        if day in by_date:
            counts[i] = by_date[day]
        else:
            missing.append(day)
    if missing:
        warnings.warn(
            f"filled {len(missing)} missing day(s) with zero counts "
            f"(first: {missing[0].isoformat()})",
            GapFilledWarning,
            stacklevel=2,
        )
    return IncidenceSeries(start_date=first, counts=counts)
