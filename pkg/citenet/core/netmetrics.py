"""
Per-cohort citation statistics.

Most functions take a plain sequence of citation counts so they apply to
any tally; the network-level helpers build those tallies per cohort.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .exceptions import (
    EmptyInputError,
    InsufficientDataError,
    InsufficientHorizonError,
)
from .growth_schedule import TimeSeries, fit_growth_rate

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLDS = (0, 1, 2, 5, 10)
DEFAULT_PERCENTILES = (0.5, 0.75, 0.9, 0.95, 0.99)


def _counts(values):
    counts = np.asarray(values, dtype=float)
    if counts.size == 0:
        raise EmptyInputError("citation counts are empty")
    return counts


def _rank(q, n):
    # ceil(q n) with a guard against representation error in q
    return max(1, min(n, math.ceil(round(q * n, 9))))


@dataclass(frozen=True)
class WindowedTally:
    cohort: int
    window: int
    counts: np.ndarray
    censored: bool = False


def window_counts(network, window):
    """Per publication, citations arriving within `window` periods of its cohort."""
    lag = network.citing_cohort - network.cited_cohort
    inside = (lag >= 0) & (lag <= window)
    return np.bincount(network.ref_ids[inside], minlength=network.n_nodes)


def windowed_citations(network, t, window):
    """c^p_{t,window}: citations from citing cohorts in [t, t + window]."""
    ids = network.cohort_ids(t)
    censored = t + window > network.last_period
    if censored:
        logger.warning("Cohort %d is right-censored for a %d-period window", t, window)
    counts = window_counts(network, window)[ids.start : ids.stop]
    return WindowedTally(cohort=int(t), window=int(window), counts=counts, censored=censored)


def citations_through(network, t, tau=None):
    """Citations received by cohort t from citing cohorts up to tau."""
    ids = network.cohort_ids(t)
    if tau is None:
        tau = network.last_period
    inside = network.citing_cohort <= tau
    counts = np.bincount(network.ref_ids[inside], minlength=network.n_nodes)
    return counts[ids.start : ids.stop]


def gini(counts):
    """Gini coefficient in its sorted O(n log n) form; 0 when all are zero."""
    x = np.sort(_counts(counts))
    n = x.size
    total = x.sum()
    if total == 0:
        return 0.0
    ranks = np.arange(1, n + 1)
    return float(np.sum((2 * ranks - n - 1) * x) / (n * total))


def hhi(counts):
    """Herfindahl-Hirschman index n <c^2> / C^2."""
    x = _counts(counts)
    total = x.sum()
    if total <= 0:
        raise EmptyInputError("HHI is undefined for an all-zero cohort")
    return float(np.sum(x * x) / (total * total))


def percentile_value(counts, q):
    """Nearest-rank percentile: the sorted value at rank ceil(q n)."""
    if not 0 < q < 1:
        raise ValueError("q must lie strictly between 0 and 1")
    x = np.sort(_counts(counts))
    return float(x[_rank(q, x.size) - 1])


def fraction_at_most(counts, threshold):
    """F(c <= C): share of publications with at most `threshold` citations."""
    x = _counts(counts)
    return float(np.count_nonzero(x <= threshold) / x.size)


@dataclass(frozen=True)
class ZScores:
    z: np.ndarray
    cited: np.ndarray
    n_excluded: int
    mu: float
    sigma: float


def z_normalize(counts):
    """z = (log c - mu_LN) / sigma_LN over the cited publications."""
    x = _counts(counts)
    cited = np.flatnonzero(x >= 1)
    if cited.size < 2:
        raise InsufficientDataError("z-normalization needs at least 2 cited publications")
    logs = np.log(x[cited])
    mu = float(logs.mean())
    sigma = float(logs.std())
    z = np.zeros_like(logs) if sigma == 0 else (logs - mu) / sigma
    return ZScores(z=z, cited=cited, n_excluded=int(x.size - cited.size), mu=mu, sigma=sigma)


def top_share(counts, q=0.01):
    """Share of the cohort's citations held by its top ceil(q n) publications."""
    if not 0 < q < 1:
        raise ValueError("q must lie strictly between 0 and 1")
    x = np.sort(_counts(counts))[::-1]
    total = x.sum()
    if total == 0:
        return 0.0
    return float(x[: _rank(q, x.size)].sum() / total)


def top_share_curve(network, t, taus=None, q=0.01):
    """F(q | t, tau): top-q share of cohort t tallied through each tau in `taus`.

    Defaults to every period from t + 1 to the last one. Tallies with no
    citation yet are skipped.
    """
    ids = network.cohort_ids(t)
    if taus is None:
        taus = range(int(t) + 1, network.last_period + 1)
    into = network.cited_cohort == t
    cited = network.ref_ids[into] - ids.start
    citing = network.citing_cohort[into]
    points, values = [], []
    for tau in sorted(taus):
        counts = np.bincount(cited[citing <= tau], minlength=len(ids))
        if counts.sum() == 0:
            continue
        points.append(int(tau))
        values.append(top_share(counts, q))
    return TimeSeries(t=tuple(points), values=tuple(values), name=f"top{q:g}_share")


def clustering_coefficient(network, chunk=4096):
    """Mean local clustering coefficient of the undirected projection."""
    n = network.n_nodes
    rows = np.concatenate([network.citing, network.ref_ids])
    cols = np.concatenate([network.ref_ids, network.citing])
    keep = rows != cols
    adj = sparse.coo_matrix(
        (np.ones(keep.sum(), dtype=np.int64), (rows[keep], cols[keep])), shape=(n, n)
    ).tocsr()
    adj.data[:] = 1
    adj.sum_duplicates()
    adj.data[:] = 1
    degree = np.asarray(adj.sum(axis=1)).ravel()

    triangles = np.zeros(n, dtype=np.int64)
    for start in range(0, n, chunk):
        block = adj[start : start + chunk]
        paths = (block @ adj).multiply(block)
        triangles[start : start + chunk] = np.asarray(paths.sum(axis=1)).ravel() // 2

    pairs = degree * (degree - 1) / 2
    local = np.divide(triangles, pairs, out=np.zeros(n), where=pairs > 0)
    return float(local.mean()) if n else 0.0


@dataclass(frozen=True)
class Lifecycle:
    cohort: int
    mean_citations: np.ndarray
    peak_age: int
    rate: float
    stderr: float

    @property
    def decaying(self):
        return self.rate < 0 and self.rate + 2 * self.stderr < 0

    @property
    def decay_time(self):
        return -1.0 / self.rate if self.decaying else math.inf


def fit_decay(mean_citations, peak_age=None, fit_span=15, min_tail=10):
    """Exponential fit to the post-peak tail of a life-cycle series."""
    values = np.asarray(mean_citations, dtype=float)
    if peak_age is None:
        peak_age = int(np.argmax(values))
    horizon = values.size - 1
    if horizon - peak_age < min_tail:
        raise InsufficientHorizonError(
            f"{horizon - peak_age} periods observed after the peak, need {min_tail}"
        )
    ages = np.arange(peak_age + 1, min(horizon, peak_age + fit_span) + 1)
    fit = fit_growth_rate(zip(ages.tolist(), values[ages].tolist()))
    return peak_age, fit


def lifecycle(network, t, fit_span=15, min_tail=10):
    """Mean citations per publication of cohort t by age, with post-peak decay fit."""
    ids = network.cohort_ids(t)
    horizon = network.last_period - t
    into = network.cited_cohort == t
    ages = network.citing_cohort[into] - t
    ages = ages[(ages >= 0) & (ages <= horizon)]
    mean = np.bincount(ages, minlength=horizon + 1)[: horizon + 1] / len(ids)
    peak, fit = fit_decay(mean, fit_span=fit_span, min_tail=min_tail)
    return Lifecycle(
        cohort=int(t), mean_citations=mean, peak_age=peak, rate=fit.rate, stderr=fit.stderr
    )


@dataclass(frozen=True)
class CohortMetrics:
    cohort: int
    n: int
    gini: float
    gini_cited_only: float
    hhi: float
    uncited_fracs: dict = field(default_factory=dict)
    percentiles: dict = field(default_factory=dict)
    top_share: float = 0.0
    mu_LN: float = None
    sigma_LN: float = None


def cohort_metrics(
    counts,
    t,
    tally_counts=None,
    percentiles=DEFAULT_PERCENTILES,
    thresholds=DEFAULT_THRESHOLDS,
    top_q=0.01,
):
    """CohortMetrics of one windowed tally; top share uses `tally_counts` if given."""
    x = _counts(counts)
    cited = x[x > 0]
    try:
        z = z_normalize(x)
        mu, sigma = z.mu, z.sigma
    except InsufficientDataError:
        mu = sigma = None
    return CohortMetrics(
        cohort=int(t),
        n=int(x.size),
        gini=gini(x),
        gini_cited_only=gini(cited) if cited.size else None,
        hhi=hhi(x) if cited.size else None,
        uncited_fracs={c: fraction_at_most(x, c) for c in thresholds},
        percentiles={q: percentile_value(x, q) for q in percentiles},
        top_share=top_share(x if tally_counts is None else tally_counts, top_q),
        mu_LN=mu,
        sigma_LN=sigma,
    )


def metrics_table(
    network,
    window=5,
    percentiles=DEFAULT_PERCENTILES,
    thresholds=DEFAULT_THRESHOLDS,
    top_q=0.01,
    tau=None,
):
    """CohortMetrics for every cohort whose window closes inside the network."""
    windowed = window_counts(network, window)
    if tau is None:
        tau = network.last_period
    tally = np.bincount(
        network.ref_ids[network.citing_cohort <= tau], minlength=network.n_nodes
    )
    last = network.last_period - window
    censored = [int(t) for t in network.periods if t > last]
    if censored:
        logger.info("Skipping %d right-censored cohorts (t > %d)", len(censored), last)

    rows = []
    for t in network.periods:
        if t > last:
            break
        ids = network.cohort_ids(t)
        rows.append(
            cohort_metrics(
                windowed[ids.start : ids.stop],
                t,
                tally_counts=tally[ids.start : ids.stop],
                percentiles=percentiles,
                thresholds=thresholds,
                top_q=top_q,
            )
        )
    return rows


def percentile_growth(rows, q):
    """Exponential growth rate of the C(q|t) curve across cohorts."""
    return fit_growth_rate((row.cohort, row.percentiles[q]) for row in rows)
