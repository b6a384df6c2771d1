"""
Reference-distance analysis.

The reference distance of an edge is the citing cohort minus the cited
cohort. Distributions are one-period histograms over a window of citing
cohorts; the memory scales are the ages where consecutive snapshots cross.
"""

import logging
import statistics
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CitenetError, EmptyInputError
from .growth_schedule import TimeSeries

logger = logging.getLogger(__name__)

PERSISTENCE = 2


@dataclass(frozen=True, eq=False)
class RefAgeDistribution:
    window_start: int
    window_end: int
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.sum() == 0:
            raise EmptyInputError(
                f"no references in citing window [{self.window_start}, {self.window_end}]"
            )
        if counts.min() < 0:
            raise CitenetError("histogram counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_deltas(cls, deltas, window_start=0, window_end=0):
        deltas = np.asarray(deltas, dtype=np.int64)
        if deltas.size == 0:
            raise EmptyInputError(
                f"no references in citing window [{window_start}, {window_end}]"
            )
        if deltas.min() < 0:
            raise CitenetError("reference distances must be non-negative")
        return cls(window_start, window_end, np.bincount(deltas))

    @property
    def n_refs(self):
        return int(self.counts.sum())

    @property
    def max_delta(self):
        return int(self.counts.size - 1)

    @property
    def pdf(self):
        return self.counts / self.n_refs

    @property
    def tail_cdf(self):
        """P(delta_r >= d) for d = 0..max_delta."""
        return self.counts[::-1].cumsum()[::-1] / self.n_refs

    def pdf_at(self, d):
        return float(self.counts[d] / self.n_refs) if 0 <= d < self.counts.size else 0.0

    def tail_at(self, d):
        if d <= 0:
            return 1.0
        if d >= self.counts.size:
            return 0.0
        return float(self.counts[d:].sum() / self.n_refs)

    @property
    def mean(self):
        return float(np.dot(np.arange(self.counts.size), self.counts) / self.n_refs)

    def rows(self):
        pdf, tail = self.pdf, self.tail_cdf
        for d in range(self.counts.size):
            yield self.window_start, self.window_end, d, float(pdf[d]), float(tail[d])


def ref_age_histogram(network, t_a, t_b=None):
    """Distribution of reference distances over citing cohorts t_a..t_b."""
    if t_b is None:
        t_b = t_a
    if t_b < t_a:
        raise CitenetError(f"citing window [{t_a}, {t_b}] is empty")
    inside = (network.citing_cohort >= t_a) & (network.citing_cohort <= t_b)
    return RefAgeDistribution.from_deltas(network.delta_r[inside], t_a, t_b)


def snapshots(network, periods, pooling=3):
    """One distribution per snapshot period, pooling citing cohorts [t - pooling + 1, t]."""
    return [ref_age_histogram(network, t - pooling + 1, t) for t in periods]


def _signs(values, start, noise=None, z=0.0):
    significant = np.abs(values) > (z * noise if noise is not None and z > 0 else 0)
    kept = [
        (d, s)
        for d, (s, keep) in enumerate(zip(np.sign(values).tolist(), significant.tolist()))
        if d >= start and s and keep
    ]
    return [d for d, _ in kept], [s for _, s in kept]


def _standard_error(p_early, n_early, p_late, n_late):
    return np.sqrt(p_early * (1 - p_early) / n_early + p_late * (1 - p_late) / n_late)


def crossing_point(early, late, mode="lower", after=None, z=0.0):
    """First persistent sign change of late minus early; None when there is none.

    In lower mode the pdfs are compared from delta_r = 1; in upper mode the
    tail CDFs are compared beyond `after` (normally the lower crossing).
    A bin takes part only when its difference exceeds `z` binomial standard
    errors, and a change counts only when each side holds for PERSISTENCE
    such bins. The crossing is the first bin past the last bin of the old
    sign where the difference already has the new sign.
    """
    size = max(early.counts.size, late.counts.size) + 1
    if mode == "lower":
        p_early = np.array([early.pdf_at(d) for d in range(size)])
        p_late = np.array([late.pdf_at(d) for d in range(size)])
        start = 1
    elif mode == "upper":
        p_early = np.array([early.tail_at(d) for d in range(size)])
        p_late = np.array([late.tail_at(d) for d in range(size)])
        start = 1 if after is None else after + 1
    else:
        raise ValueError(f"unknown crossing mode {mode!r}")
    if z < 0:
        raise CitenetError("crossing threshold must be non-negative")
    diff = p_late - p_early
    # tail sums accumulate rounding noise where the two tails agree
    diff[np.abs(diff) < 1e-12] = 0
    noise = _standard_error(p_early, early.n_refs, p_late, late.n_refs)

    bins, signs = _signs(diff, start, noise, z)
    raw = np.sign(diff)
    for i in range(PERSISTENCE, len(signs) - PERSISTENCE + 1):
        before = signs[i - PERSISTENCE : i]
        beyond = signs[i : i + PERSISTENCE]
        if len(set(before)) == 1 and len(set(beyond)) == 1 and before[0] != beyond[0]:
            for d in range(bins[i - 1] + 1, bins[i] + 1):
                if raw[d] == beyond[0]:
                    return d
    return None


@dataclass(frozen=True)
class PairCrossing:
    early: tuple
    late: tuple
    lower: int = None
    upper: int = None


@dataclass(frozen=True)
class CrossingReport:
    delta_minus: float = None
    delta_plus: float = None
    pairwise_crossings: list = field(default_factory=list)
    mean_delta: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "delta_minus": self.delta_minus,
            "delta_plus": self.delta_plus,
            "pairwise_crossings": [
                {
                    "early": list(pair.early),
                    "late": list(pair.late),
                    "lower": pair.lower,
                    "upper": pair.upper,
                }
                for pair in self.pairwise_crossings
            ],
            "mean_delta": {f"{a}-{b}": mean for (a, b), mean in self.mean_delta.items()},
        }


def crossing_report(distributions, z=0.0):
    """Median crossings over consecutive snapshots, with the per-pair list.

    `z` is the noise threshold handed to crossing_point.
    """
    ordered = sorted(distributions, key=lambda dist: dist.window_start)
    pairs = []
    for early, late in zip(ordered, ordered[1:]):
        lower = crossing_point(early, late, "lower", z=z)
        upper = (
            crossing_point(early, late, "upper", after=lower, z=z) if lower is not None else None
        )
        pairs.append(
            PairCrossing(
                early=(early.window_start, early.window_end),
                late=(late.window_start, late.window_end),
                lower=lower,
                upper=upper,
            )
        )

    lowers = [p.lower for p in pairs if p.lower is not None]
    uppers = [p.upper for p in pairs if p.upper is not None]
    delta_minus = statistics.median(lowers) if lowers else None
    delta_plus = statistics.median(uppers) if uppers else None
    if delta_minus is not None and delta_plus is not None and delta_plus <= delta_minus:
        logger.warning(
            "Upper crossing %.1f does not exceed lower crossing %.1f; dropping it",
            delta_plus,
            delta_minus,
        )
        delta_plus = None
    if not lowers:
        logger.warning("No crossing found across %d snapshot pairs", len(pairs))

    return CrossingReport(
        delta_minus=delta_minus,
        delta_plus=delta_plus,
        pairwise_crossings=pairs,
        mean_delta={(d.window_start, d.window_end): d.mean for d in ordered},
    )


def interval_fractions(dist, delta_minus, delta_plus):
    """Reference shares below, inside and beyond [delta_minus, delta_plus]."""
    if delta_minus is None or delta_plus is None or not delta_minus < delta_plus:
        raise CitenetError(f"invalid interval [{delta_minus}, {delta_plus}]")
    lo = max(0, int(np.ceil(delta_minus)))
    hi = int(np.floor(delta_plus))
    recent = int(dist.counts[:lo].sum())
    mid = int(dist.counts[lo : hi + 1].sum())
    classic = dist.n_refs - recent - mid
    return recent / dist.n_refs, mid / dist.n_refs, classic / dist.n_refs


def fraction_within(dist, delta):
    """F(delta_r <= delta), i.e. 1 - P(delta_r >= delta + 1)."""
    if delta < 0:
        raise CitenetError("delta must be non-negative")
    return float(dist.counts[: int(delta) + 1].sum() / dist.n_refs)


def fraction_within_series(network, deltas, pooling=1):
    """F(delta_r <= delta | t) per citing period, one TimeSeries per delta."""
    width = int(network.delta_r.max()) + 1 if network.n_links else 1
    periods = network.periods
    offset = int(periods[0])
    span = int(periods[-1]) - offset + 1
    flat = (network.citing_cohort - offset) * width + network.delta_r
    table = np.bincount(flat, minlength=span * width).reshape(span, width)
    below = {delta: table[:, : delta + 1].sum(axis=1) for delta in deltas}
    totals = table.sum(axis=1)

    series = {delta: ([], []) for delta in deltas}
    for row in range(span):
        lo = max(0, row - pooling + 1)
        total = totals[lo : row + 1].sum()
        if total == 0:
            continue
        for delta in deltas:
            ts, values = series[delta]
            ts.append(offset + row)
            values.append(float(below[delta][lo : row + 1].sum() / total))
    return {
        delta: TimeSeries(t=tuple(ts), values=tuple(values), name=f"F{delta}")
        for delta, (ts, values) in series.items()
    }


@dataclass(frozen=True)
class IntervalRow:
    window_start: int
    window_end: int
    mean_delta: float
    recent: float = None
    mid: float = None
    classic: float = None
    within: dict = field(default_factory=dict)


def interval_table(distributions, report, deltas=()):
    """Per-snapshot mean distance, recent/mid/classic shares and F(delta_r <= delta).

    The three shares are left as None when the report has no valid
    [delta_minus, delta_plus] interval.
    """
    rows = []
    defined = (
        report.delta_minus is not None
        and report.delta_plus is not None
        and report.delta_minus < report.delta_plus
    )
    for dist in sorted(distributions, key=lambda d: d.window_start):
        shares = (
            interval_fractions(dist, report.delta_minus, report.delta_plus)
            if defined
            else (None, None, None)
        )
        rows.append(
            IntervalRow(
                dist.window_start,
                dist.window_end,
                dist.mean,
                *shares,
                within={delta: fraction_within(dist, delta) for delta in deltas},
            )
        )
    return rows
