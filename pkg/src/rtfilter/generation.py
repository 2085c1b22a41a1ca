"""Discretized generation-interval weights from an Erlang infectivity profile.

The infectivity profile is an Erlang density (gamma with integer shape); its
CDF F turns into daily weights w_s = F(s) - F(s-1) for s = 1..s_max, and the
weights are renormalized so they form a proper probability mass function.
Support starts at one day after infection: same-day transmission carries no
weight.
"""

from dataclasses import dataclass

import numpy as np

from .special import reg_lower_gamma

__all__ = ["ErlangSpec", "GenerationInterval", "TruncationError", "erlang_cdf", "discretize"]

# Pre-normalization mass allowed beyond the truncation horizon.
MAX_TRUNCATED_MASS = 0.05


class TruncationError(ValueError):
    """Truncation horizon too short to represent the infectivity profile."""


@dataclass(frozen=True)
class ErlangSpec:
    """Erlang density with integer ``shape`` and ``scale`` in days.

    Mean is shape*scale and the mode sits at (shape-1)*scale.  The COVID-19
    default used throughout is ErlangSpec(3, 8/3): mean 8 days, mode 16/3.
    """

    shape: int
    scale: float

    def __post_init__(self):
        if not isinstance(self.shape, (int, np.integer)) or self.shape < 1:
            raise ValueError(f"Erlang shape must be an integer >= 1, got {self.shape!r}")
        if not (self.scale > 0.0 and np.isfinite(self.scale)):
            raise ValueError(f"Erlang scale must be a positive real, got {self.scale!r}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def mode(self) -> float:
        return (self.shape - 1) * self.scale


DEFAULT_ERLANG = ErlangSpec(3, 8.0 / 3.0)
DEFAULT_S_MAX = 30


def erlang_cdf(spec: ErlangSpec, s: float) -> float:
    """Erlang CDF F(s) for s >= 0 days."""
    if not (s >= 0.0):
        raise ValueError(f"erlang_cdf requires s >= 0, got {s!r}")
    if s == 0.0:
        return 0.0
    return reg_lower_gamma(spec.shape, s / spec.scale)


@dataclass(frozen=True)
class GenerationInterval:
    """Daily infectivity weights w_1..w_s_max summing to one.

    ``weights[k]`` is the weight at lag s = k + 1 days.  ``truncated_mass``
    records the pre-normalization tail mass 1 - F(s_max) that the horizon
    discarded.
    """

    weights: np.ndarray
    s_max: int
    truncated_mass: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != self.s_max or self.s_max < 1:
            raise ValueError("weights must be a 1-D array of length s_max")
        if np.any(w < 0.0):
            raise ValueError("generation-interval weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("generation-interval weights must sum to 1")
        if not (0.0 <= self.truncated_mass < 1.0):
            raise ValueError("truncated_mass must lie in [0, 1)")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.s_max

    @property
    def days(self) -> np.ndarray:
        """Lag axis s = 1..s_max."""
        return np.arange(1, self.s_max + 1)

    @property
    def mean(self) -> float:
        """Mean lag of the discretized weights, sum of s * w_s."""
        return float(np.dot(self.days, self.weights))

    @property
    def argmax_day(self) -> int:
        """Lag s with the largest weight (day of maximum infectivity)."""
        return int(np.argmax(self.weights)) + 1


def discretize(spec: ErlangSpec, s_max: int = DEFAULT_S_MAX) -> GenerationInterval:
    """Build the generation interval w_s = F(s) - F(s-1), s = 1..s_max.

    Weights are renormalized by the covered mass F(s_max) so they sum to
    one exactly; otherwise the total-infectiousness convolution would be
    biased low by the discarded tail.

    Raises TruncationError when the tail mass 1 - F(s_max) exceeds
    MAX_TRUNCATED_MASS.
    """
    if s_max < 1:
        raise ValueError(f"s_max must be a positive integer, got {s_max!r}")
    cdf = np.array([erlang_cdf(spec, s) for s in range(s_max + 1)])
    raw = np.diff(cdf)
    covered = float(raw.sum())
    if covered <= 0.0:
        raise ValueError("Erlang CDF carries no mass below s_max")
    truncated = 1.0 - float(cdf[-1])
    if truncated > MAX_TRUNCATED_MASS:
        raise TruncationError(
            f"truncated mass {truncated:.4f} beyond s_max={s_max} exceeds "
            f"{MAX_TRUNCATED_MASS}; raise s_max to cover the infectivity profile"
        )
    return GenerationInterval(weights=raw / covered, s_max=int(s_max), truncated_mass=truncated)
