"""Conjugate discount filter on the log reproduction number.

The latent log reproduction number rho_t follows a random walk whose
innovation variance is tied to the (unknown) observation precision; the
precision itself evolves through a multiplicative Beta shock with mean one,
discounted by delta.  Conjugacy keeps every update explicit: after each day
the posterior of rho_t is a location-scale student-t, and the four numbers
(m, c, n, s) below are the entire filter state.

Quantiles of R_t = exp(rho_t) come from the monotone transform of the
student-t quantiles; short-horizon forecasts simulate the same state and
precision dynamics forward from the filtered state.
"""

import datetime as dt
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .incidence import ObservationSeries
from .special import student_t_quantile

__all__ = [
    "DEFAULT_QUANTILE_LEVELS",
    "NumericError",
    "FilterConfig",
    "FilterState",
    "RtRecord",
    "RtPosterior",
    "prior_state",
    "step",
    "run_filter",
    "rt_quantile",
    "forecast_rt",
]

DEFAULT_QUANTILE_LEVELS = (0.10, 0.25, 0.50, 0.75, 0.90)

# Smallest positive normal double: positivity floor for quantities the
# recursions keep mathematically positive but double precision can
# underflow (e.g. the variance estimate after thousands of exactly
# constant ratios).
_TINY = 2.2250738585072014e-308


class NumericError(ValueError):
    """A non-finite value reached the filter recursions."""


@dataclass(frozen=True)
class FilterConfig:
    """Hyperparameters of the discount filter.

    ``delta`` and ``w_star`` default to the tau-derived choices
    delta = 1 - 1/(2 tau) and w_star = 2/tau: the effective sample size of
    the variance estimate then tops out at 2 tau days, and smoothing of the
    state is limited to about tau days.  The prior is centered at m0 = 0
    (R_t = 1) with unit relative scale and a diffuse n0 = 2.
    """

    tau: int = 7
    delta: Optional[float] = None
    w_star: Optional[float] = None
    m0: float = 0.0
    c0_star: float = 1.0
    n0: float = 2.0
    s0: float = 1.0

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError(f"tau must be a positive integer, got {self.tau!r}")
        if self.delta is None:
            object.__setattr__(self, "delta", 1.0 - 1.0 / (2.0 * self.tau))
        if self.w_star is None:
            object.__setattr__(self, "w_star", 2.0 / self.tau)
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if not (self.w_star > 0.0):
            raise ValueError(f"w_star must be positive, got {self.w_star!r}")
        if not (self.c0_star > 0.0 and self.n0 > 0.0 and self.s0 > 0.0):
            raise ValueError("c0_star, n0, s0 must all be positive")
        if not math.isfinite(self.m0):
            raise ValueError("m0 must be finite")


@dataclass(frozen=True)
class FilterState:
    """Student-t posterior of rho_t: location m, scale^2 c, dof n, and the
    point estimate s of the observational variance."""

    m: float
    c: float
    n: float
    s: float

    def __post_init__(self):
        if not (self.c > 0.0 and self.n > 0.0 and self.s > 0.0):
            raise ValueError("FilterState requires c > 0, n > 0, s > 0")
        if not all(map(math.isfinite, (self.m, self.c, self.n, self.s))):
            raise NumericError("FilterState fields must be finite")


def prior_state(config: FilterConfig) -> FilterState:
    """Prior state before any observation: (m0, s0*c0_star, n0, s0)."""
    return FilterState(m=config.m0, c=config.s0 * config.c0_star, n=config.n0, s=config.s0)


def step(state: FilterState, y: Optional[float], config: FilterConfig) -> FilterState:
    """One day of filtering: assimilate y_t, or evolve only when y is None.

    With an observation this is the conjugate one-step update of the
    discount DLM; without one the location is kept, the scale inflates by
    the innovation variance, and the degrees of freedom age by delta.
    """
    delta = config.delta
    w_star = config.w_star
    if y is None:
        return FilterState(
            m=state.m, c=state.c + w_star, n=max(delta * state.n, _TINY), s=state.s
        )
    if not math.isfinite(y):
        raise NumericError(f"observation must be finite, got {y!r}")

    n_new = delta * state.n + 1.0
    a = state.m
    r_star = state.c + w_star
    q_star = r_star + 1.0
    q = state.s * q_star
    r = state.s * r_star
    e = y - a
    try:
        # (e/sqrt(q))**2 rather than e*e/q: immune to e*e overflowing on
        # outlier ratios as long as the quotient itself is representable.
        s_new = delta * (state.n / n_new) * state.s + (state.s / n_new) * (e / math.sqrt(q)) ** 2
        gain = r_star / q_star
        m_new = a + gain * e
        c_new = (s_new / state.s) * (r - gain * gain * q)
    except OverflowError as exc:
        raise NumericError(f"filter update overflowed: {exc}") from None
    return FilterState(m=m_new, c=max(c_new, _TINY), n=n_new, s=max(s_new, _TINY))


def rt_quantile(state: FilterState, p: float) -> float:
    """Quantile of R_t = exp(rho_t) at level p in (0, 1).

    Returns inf (or 0.0 in the lower tail) when the quantile exceeds double
    range, which happens only after the degrees of freedom have decayed
    through a very long observation gap.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"quantile level must lie in (0, 1), got {p!r}")
    try:
        return math.exp(state.m + math.sqrt(state.c) * student_t_quantile(p, state.n))
    except OverflowError:
        return math.inf if p >= 0.5 else 0.0


@dataclass(frozen=True)
class RtRecord:
    """Filter output for one day."""

    date: dt.date
    state: FilterState
    quantiles: dict
    updated: bool


@dataclass(frozen=True)
class RtPosterior:
    """Day-by-day filtered posterior, from the first valid day onward."""

    records: tuple
    levels: tuple

    def __len__(self) -> int:
        return len(self.records)

    @property
    def dates(self) -> list:
        return [r.date for r in self.records]

    def quantile_series(self, p: float) -> np.ndarray:
        """Quantiles at one level across all recorded days."""
        return np.array([r.quantiles[p] for r in self.records])

    def last_state(self) -> FilterState:
        return self.records[-1].state


def _validate_levels(levels) -> tuple:
    levels = tuple(float(p) for p in levels)
    if not levels:
        raise ValueError("need at least one quantile level")
    if any(not (0.0 < p < 1.0) for p in levels):
        raise ValueError("quantile levels must lie strictly in (0, 1)")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("quantile levels must be strictly increasing")
    return levels


def run_filter(
    obs: ObservationSeries,
    config: Optional[FilterConfig] = None,
    levels: Sequence[float] = DEFAULT_QUANTILE_LEVELS,
) -> RtPosterior:
    """Filter the whole observation series.

    Starts from the prior at the first valid day (earlier days carry no
    usable ratio and are skipped entirely); interior invalid days evolve
    the state without assimilation.
    """
    config = config or FilterConfig()
    levels = _validate_levels(levels)
    if not np.any(obs.valid):
        raise ValueError("observation series has no valid day")
    first = int(np.flatnonzero(obs.valid)[0])
    dates = obs.dates
    state = prior_state(config)
    records = []
    for i in range(first, len(obs)):
        updated = bool(obs.valid[i])
        state = step(state, float(obs.y[i]) if updated else None, config)
        quantiles = {p: rt_quantile(state, p) for p in levels}
        records.append(RtRecord(date=dates[i], state=state, quantiles=quantiles, updated=updated))
    return RtPosterior(records=tuple(records), levels=levels)


def forecast_rt(
    state: FilterState,
    config: FilterConfig,
    horizon: int,
    draws: int,
    seed: int,
    levels: Sequence[float] = DEFAULT_QUANTILE_LEVELS,
) -> list:
    """Monte Carlo forecast of R_{t+1}..R_{t+horizon} from a filtered state.

    Each draw samples the precision phi from its Gamma posterior and rho
    from the matching conditional normal (so that marginally rho is the
    filtered student-t), then walks both forward: phi picks up the
    mean-one Beta shock gamma/delta and rho adds a N(0, w_star/phi)
    innovation each day.  Returns one {level: quantile} dict per horizon
    day; deterministic for a fixed seed.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon!r}")
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws!r}")
    levels = _validate_levels(levels)
    delta = config.delta
    rng = np.random.default_rng(seed)
    phi = rng.gamma(shape=state.n / 2.0, scale=2.0 / (state.n * state.s), size=draws)
    rho = rng.normal(loc=state.m, scale=np.sqrt((state.c / state.s) / phi))
    a_shock = delta * state.n / 2.0
    b_shock = (1.0 - delta) * state.n / 2.0
    out = []
    for _ in range(horizon):
        phi = phi * rng.beta(a_shock, b_shock, size=draws) / delta
        rho = rho + rng.normal(loc=0.0, scale=np.sqrt(config.w_star / phi))
        q = np.quantile(np.exp(rho), levels)
        out.append({p: float(v) for p, v in zip(levels, q)})
    return out
