"""
Inflation-corrected career metrics.

A citation arriving in year t is rescaled by n_a(baseline) / n_a(t), where
n_a is the number of publications the field produced that year, so
citations from small early years weigh as much as those from the large
baseline year.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CitenetError, EmptyInputError, MissingSeriesYearError
from .growth_schedule import fit_growth_rate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeflatorSeries:
    n_a: dict
    baseline_year: int = 2010
    census_year: int = None

    def __post_init__(self):
        n_a = {int(year): float(count) for year, count in self.n_a.items()}
        if self.baseline_year not in n_a:
            raise MissingSeriesYearError(self.baseline_year)
        if n_a[self.baseline_year] <= 0:
            raise CitenetError(f"n_a({self.baseline_year}) must be positive")
        object.__setattr__(self, "n_a", n_a)

    @classmethod
    def from_series(cls, series, baseline_year=2010, census_year=None):
        return cls(
            n_a={int(t): v for t, v in series},
            baseline_year=baseline_year,
            census_year=census_year,
        )

    @property
    def census(self):
        return self.baseline_year if self.census_year is None else self.census_year

    def factor(self, year):
        try:
            count = self.n_a[int(year)]
        except KeyError:
            raise MissingSeriesYearError(year) from None
        if count <= 0:
            raise CitenetError(f"n_a({year}) must be positive")
        return self.n_a[self.baseline_year] / count


@dataclass(frozen=True)
class DeflatedCitations:
    increments: dict
    total: float


def _through_census(delta_c, census):
    return {int(year): count for year, count in delta_c.items() if int(year) <= census}


def deflate_citations(delta_c, series):
    """Deflated yearly increments and their sum through the census year."""
    increments = {
        year: count * series.factor(year)
        for year, count in sorted(_through_census(delta_c, series.census).items())
    }
    return DeflatedCitations(increments=increments, total=float(sum(increments.values())))


def h_index(totals):
    """Largest h with at least h publications holding at least h citations."""
    values = np.sort(np.asarray(list(totals), dtype=float))[::-1]
    if values.size == 0:
        return 0
    ranks = np.arange(1, values.size + 1)
    return int(np.count_nonzero(values >= ranks))


@dataclass(frozen=True)
class PublicationCitations:
    id: str
    year: int
    cites: dict = field(default_factory=dict)

    def __post_init__(self):
        cites = {int(year): int(count) for year, count in self.cites.items()}
        for year, count in cites.items():
            if count < 0:
                raise CitenetError(f"publication {self.id}: negative count in {year}")
            if year < self.year:
                raise CitenetError(
                    f"publication {self.id}: cited in {year} before publication in {self.year}"
                )
        object.__setattr__(self, "cites", cites)


@dataclass(frozen=True)
class CareerProfile:
    researcher_id: str
    pubs: tuple

    @property
    def y0(self):
        return min(pub.year for pub in self.pubs)


@dataclass(frozen=True)
class CareerMetrics:
    researcher_id: str
    y0: int
    h: int
    h_deflated: int
    c_total: float
    c_total_deflated: float
    rho_H: float = None
    rho_C: float = None


def career_metrics(profile, series):
    if not profile.pubs:
        raise EmptyInputError(f"researcher {profile.researcher_id} has no publications")
    raw = []
    deflated = []
    for pub in profile.pubs:
        raw.append(float(sum(_through_census(pub.cites, series.census).values())))
        deflated.append(deflate_citations(pub.cites, series).total)

    h = h_index(raw)
    h_deflated = h_index(deflated)
    c_total = float(sum(raw))
    c_total_deflated = float(sum(deflated))
    return CareerMetrics(
        researcher_id=profile.researcher_id,
        y0=profile.y0,
        h=h,
        h_deflated=h_deflated,
        c_total=c_total,
        c_total_deflated=c_total_deflated,
        rho_H=h_deflated / h if h > 0 else None,
        rho_C=c_total_deflated / c_total if c_total > 0 else None,
    )


def cohort_means(metrics, field="rho_H", decade=10):
    """Mean ratio per career-start cohort of `decade` years, as (cohort start, mean)."""
    groups = defaultdict(list)
    for row in metrics:
        value = getattr(row, field)
        if value is not None:
            groups[(row.y0 // decade) * decade].append(value)
    return [(start, float(np.mean(values))) for start, values in sorted(groups.items())]


@dataclass(frozen=True)
class G10Fit:
    rho0: float
    g10: float
    stderr: float
    n_points: int


def fit_g10(points, reference_year=2000, pooled=False, field="rho_H"):
    """Fit rho(t) = rho0 exp[g10 (reference_year - t) / 10].

    `points` are (cohort year, mean ratio) pairs, or CareerMetrics rows
    when `pooled` is set, in which case every researcher is one point.
    """
    if pooled:
        points = [(row.y0, getattr(row, field)) for row in points]
        points = [(t, rho) for t, rho in points if rho is not None]
    points = list(points)
    bad = [t for t, rho in points if not rho > 0 or not math.isfinite(rho)]
    if bad:
        raise CitenetError(f"non-positive ratio for cohorts {bad}")
    fit = fit_growth_rate(((reference_year - t) / 10, rho) for t, rho in points)
    logger.info("g10 = %.4f +/- %.4f over %d points", fit.rate, fit.stderr, fit.n_points)
    return G10Fit(rho0=fit.prefactor, g10=fit.rate, stderr=fit.stderr, n_points=fit.n_points)
