"""
Deterministic time dependence of the simulated science system.

Cohort sizes n(t) and reference-list targets r(t) grow exponentially from
n0 and r0. Perturbation events switch a rate (or beta) to a new value from
their period onwards; rates accumulate segment by segment so n(t) and r(t)
stay continuous at the switch.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import stats

from .exceptions import (
    ConfigError,
    InsufficientDataError,
    PeriodOutOfRangeError,
)

logger = logging.getLogger(__name__)


class Target(str, Enum):
    BETA = "beta"
    G_R = "g_r"
    G_N = "g_n"


def round_half_up(value):
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class GrowthParams:
    n0: int = 10
    r0: float = 1.0
    g_n: float = 0.033
    g_r: float = 0.018
    T: int = 150

    def __post_init__(self):
        if self.n0 < 1:
            raise ConfigError("n0 must be at least 1")
        if not self.r0 > 0:
            raise ConfigError("r0 must be positive")
        if self.T < 1:
            raise ConfigError("T must be at least 1")
        if not (math.isfinite(self.g_n) and math.isfinite(self.g_r)):
            raise ConfigError("growth rates must be finite")

    @property
    def g_R(self):
        return self.g_n + self.g_r


@dataclass(frozen=True)
class PerturbationEvent:
    t_star: int
    target: Target
    new_value: float

    def __post_init__(self):
        object.__setattr__(self, "target", Target(self.target))
        if self.target is Target.BETA and not 0 <= self.new_value < 1:
            raise ConfigError("beta perturbation must lie in [0, 1)")
        if not math.isfinite(self.new_value):
            raise ConfigError("perturbation value must be finite")


@dataclass(frozen=True)
class GrowthSchedule:
    params: GrowthParams = field(default_factory=GrowthParams)
    events: tuple = ()

    def __post_init__(self):
        events = tuple(sorted(self.events, key=lambda e: (e.t_star, e.target.value)))
        seen = set()
        for event in events:
            if not 0 < event.t_star <= self.params.T:
                raise ConfigError(
                    f"perturbation t_star={event.t_star} outside (0, {self.params.T}]"
                )
            key = (event.t_star, event.target)
            if key in seen:
                raise ConfigError(
                    f"more than one {event.target.value} event at t_star={event.t_star}"
                )
            seen.add(key)
        object.__setattr__(self, "events", events)

    @property
    def T(self):
        return self.params.T

    def _check_period(self, t):
        if not 0 <= t <= self.params.T:
            raise PeriodOutOfRangeError(f"period {t} outside [0, {self.params.T}]")

    def _events_for(self, target):
        return [e for e in self.events if e.target is target]

    def _log_growth(self, target, rate, t):
        """Accumulated exponent of a rate that switches at its events."""
        exponent = 0.0
        start = 0
        for event in self._events_for(target):
            if event.t_star >= t:
                break
            exponent += rate * (event.t_star - start)
            start, rate = event.t_star, event.new_value
        return exponent + rate * (t - start)

    def value_at(self, target, t, default):
        """Value of a perturbed quantity in force during period t."""
        target = Target(target)
        value = default
        for event in self._events_for(target):
            if event.t_star > t:
                break
            value = event.new_value
        return value

    def cohort_size(self, t):
        self._check_period(t)
        return self._cohort_sizes[t]

    def ref_target(self, t):
        self._check_period(t)
        return self._ref_targets[t]

    def reference_supply_target(self, t):
        """Scheduled R(t) = n(t) r(t); zero for the seed cohort."""
        if t == 0:
            self._check_period(t)
            return 0
        return self.cohort_size(t) * self.ref_target(t)

    @cached_property
    def _cohort_sizes(self):
        p = self.params
        return tuple(
            max(0, round_half_up(p.n0 * math.exp(self._log_growth(Target.G_N, p.g_n, t))))
            for t in range(p.T + 1)
        )

    @cached_property
    def _ref_targets(self):
        p = self.params
        return tuple(
            max(0, round_half_up(p.r0 * math.exp(self._log_growth(Target.G_R, p.g_r, t))))
            for t in range(p.T + 1)
        )

    def cohort_sizes(self):
        return np.asarray(self._cohort_sizes, dtype=np.int64)

    def ref_targets(self):
        return np.asarray(self._ref_targets, dtype=np.int64)

    def total_publications(self):
        return int(sum(self._cohort_sizes))


@dataclass(frozen=True)
class TimeSeries:
    t: tuple
    values: tuple
    name: str = "value"

    def __len__(self):
        return len(self.t)

    def __iter__(self):
        return iter(zip(self.t, self.values))


@dataclass(frozen=True)
class GrowthFit:
    rate: float
    stderr: float
    prefactor: float
    n_points: int
    n_excluded: int

    @property
    def doubling_time(self):
        return math.log(2) / self.rate if self.rate > 0 else math.inf


def fit_growth_rate(series):
    """OLS fit of ln(value) = a + g t over the positive points of a series.

    Returns the slope g, its standard error and exp(a). Non-positive values
    are dropped before fitting and counted in `n_excluded`.
    """
    pairs = [(float(t), float(v)) for t, v in series]
    positive = [(t, v) for t, v in pairs if v > 0]
    excluded = len(pairs) - len(positive)
    if len(positive) < 3:
        raise InsufficientDataError(
            f"need at least 3 positive points to fit a growth rate, got {len(positive)}"
        )
    if excluded:
        logger.warning("Excluded %d non-positive points before fitting", excluded)

    t = np.array([p[0] for p in positive])
    y = np.log([p[1] for p in positive])
    if np.ptp(t) == 0:
        raise InsufficientDataError("all points share the same t")
    fit = stats.linregress(t, y)
    return GrowthFit(
        rate=float(fit.slope),
        stderr=float(fit.stderr),
        prefactor=float(math.exp(fit.intercept)),
        n_points=len(positive),
        n_excluded=excluded,
    )
