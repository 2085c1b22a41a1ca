"""Time-varying reproduction number estimation from daily incidence counts.

Two estimators over the same renewal-equation plumbing:

* a conjugate discount-DLM filter on the log reproduction number, whose
  uncertainty tracks the recent variability of the observed ratios and is
  invariant to rescaling the counts, with short-horizon Monte Carlo
  forecasting; and
* the classic windowed Poisson-Gamma baseline, kept for comparison.
"""

from .cori import CoriConfig, CoriPosterior, CoriRecord, run_cori
from .dlm import (
    DEFAULT_QUANTILE_LEVELS,
    FilterConfig,
    FilterState,
    NumericError,
    RtPosterior,
    RtRecord,
    forecast_rt,
    prior_state,
    rt_quantile,
    run_filter,
    step,
)
from .generation import (
    DEFAULT_ERLANG,
    DEFAULT_S_MAX,
    ErlangSpec,
    GenerationInterval,
    TruncationError,
    discretize,
    erlang_cdf,
)
from .incidence import (
    DEFAULT_MIN_INCIDENCE,
    CsvFormatError,
    GapFilledWarning,
    IncidenceSeries,
    ObservationSeries,
    compute_lambda,
    compute_observations,
    observed_rt,
    parse_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CoriConfig",
    "CoriPosterior",
    "CoriRecord",
    "CsvFormatError",
    "DEFAULT_ERLANG",
    "DEFAULT_MIN_INCIDENCE",
    "DEFAULT_QUANTILE_LEVELS",
    "DEFAULT_S_MAX",
    "ErlangSpec",
    "FilterConfig",
    "FilterState",
    "GapFilledWarning",
    "GenerationInterval",
    "IncidenceSeries",
    "NumericError",
    "ObservationSeries",
    "RtPosterior",
    "RtRecord",
    "TruncationError",
    "compute_lambda",
    "compute_observations",
    "discretize",
    "erlang_cdf",
    "forecast_rt",
    "observed_rt",
    "parse_csv",
    "prior_state",
    "rt_quantile",
    "run_cori",
    "run_filter",
    "step",
]
