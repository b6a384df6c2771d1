"""
Monte Carlo growth of the citation network.

Each period adds a cohort of n(t) publications. Every new publication fills
a reference list of up to r(t) entries by repeating two steps:

  (a) cite one prior publication j drawn with weight (c_cross + c_j) n(t_j)^alpha
  (b) also cite entries of j's own reference list, each independently with
      probability lambda / m_j, so their number is Binomial(m_j, lambda / m_j)

Citation counts used in (a) are frozen at the start of the period, so a
cohort never cites itself and every reference distance is at least 1.

Entries of step (b) that are already cited, or that would overflow r(t), are
lost, so lambda = beta / (1 - beta) alone leaves r^b / R below beta. The
builder scales lambda period by period until the realised share meets beta;
the lambda used in each period is kept on the network as `redirect_means`.
"""

import logging
import math
from array import array
from dataclasses import dataclass

import numpy as np

from .exceptions import CitenetError, ConfigError, EmptyInputError
from .growth_schedule import Target
from .network import CitationNetwork

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 64
# bounds on the per-period redirection scale and on one period's change of it
SCALE_LIMITS = (0.25, 16.0)
MAX_SCALE_STEP = math.log(4.0)


@dataclass(frozen=True)
class ModelParams:
    c_cross: float = 7.0
    alpha: float = 5.0
    beta: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if not self.c_cross > 0:
            raise ConfigError("c_cross must be positive")
        if not self.alpha >= 0:
            raise ConfigError("alpha must be non-negative")
        if not 0 <= self.beta < 1:
            raise ConfigError("beta must satisfy 0 <= beta < 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    @property
    def lam(self):
        return redirect_mean(self.beta)

    def with_seed(self, seed):
        return ModelParams(self.c_cross, self.alpha, self.beta, seed)


def redirect_mean(beta):
    """Mean number of redirected references per direct one, beta / (1 - beta)."""
    return beta / (1.0 - beta)


def log_attachment_weight(c_j, n_at_birth, params, n_ref=1):
    """log of (c_cross + c_j) (n_at_birth / n_ref)^alpha."""
    c_j = np.asarray(c_j, dtype=float)
    log_scale = params.alpha * (np.log(np.asarray(n_at_birth, dtype=float)) - math.log(n_ref))
    return np.log(params.c_cross + c_j) + log_scale


def attachment_weight(c_j, n_at_birth, params, n_ref=1):
    """Attachment weight (c_cross + c_j) n_at_birth^alpha, divided by n_ref^alpha.

    The simulator passes the current cohort size as `n_ref` so the factor
    (n_at_birth / n_ref)^alpha stays at most of order one; ratios between
    weights do not depend on `n_ref`.
    """
    c_j = np.asarray(c_j, dtype=float)
    scale = (np.asarray(n_at_birth, dtype=float) / float(n_ref)) ** params.alpha
    weight = (params.c_cross + c_j) * scale
    return float(weight) if weight.ndim == 0 else weight


class CumulativeSampler:
    """Weighted draws by binary search over cumulative weights.

    Zero weights are allowed and never drawn while some candidate has a
    positive weight.
    """

    def __init__(self, weights, ids=None, log_weights=None):
        weights = np.asarray(weights, dtype=float)
        if weights.size == 0:
            raise EmptyInputError("no eligible publications to cite")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise CitenetError("weights must be finite and non-negative")
        self._cum = np.cumsum(weights)
        if not self._cum[-1] > 0:
            raise EmptyInputError("every eligible publication has zero weight")
        self._ids = None if ids is None else np.asarray(ids, dtype=np.int64)
        self._log_weights = log_weights
        self.total = float(self._cum[-1])
        self.size = weights.size

    @classmethod
    def from_log_weights(cls, log_weights, ids=None):
        """Sampler over exp(log_weights), rescaled so the largest weight is 1."""
        log_weights = np.asarray(log_weights, dtype=float)
        if log_weights.size == 0:
            raise EmptyInputError("no eligible publications to cite")
        weights = np.exp(log_weights - log_weights.max())
        return cls(weights, ids=ids, log_weights=log_weights)

    def lookup(self, u):
        idx = np.searchsorted(self._cum, np.asarray(u) * self.total, side="right")
        idx = np.minimum(idx, self.size - 1)
        return idx if self._ids is None else self._ids[idx]

    def draw_explicit(self, rng, exclude):
        """Exact draw over the candidates not in `exclude`."""
        ids = np.arange(self.size) if self._ids is None else self._ids
        keep = ~np.isin(ids, np.fromiter(exclude, dtype=np.int64, count=len(exclude)))
        if not keep.any():
            raise EmptyInputError("every eligible publication is already cited")
        if self._log_weights is not None:
            # renormalised on the remaining candidates so underflowed weights still count
            kept = self._log_weights[keep]
            weights = np.exp(kept - kept.max())
        else:
            weights = np.diff(self._cum, prepend=0.0)[keep]
        cum = np.cumsum(weights)
        if not cum[-1] > 0:
            raise EmptyInputError("every remaining publication has zero weight")
        k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        return int(ids[keep][min(k, cum.size - 1)])


class CandidateStream:
    """Direct-citation candidates pre-drawn in chunks from one sampler."""

    def __init__(self, sampler, rng, chunk=4096):
        self.sampler = sampler
        self.rng = rng
        self.chunk = chunk
        self._buffer = []
        self._pos = 0

    def next(self):
        if self._pos >= len(self._buffer):
            self._buffer = self.sampler.lookup(self.rng.random(self.chunk)).tolist()
            self._pos = 0
        candidate = self._buffer[self._pos]
        self._pos += 1
        return candidate

    def next_excluding(self, exclude):
        # Rejection keeps the draw exact; small pools fall back to a masked draw.
        for _ in range(MAX_REJECTIONS):
            candidate = self.next()
            if candidate not in exclude:
                return candidate
        return self.sampler.draw_explicit(self.rng, exclude)


class UniformStream:
    def __init__(self, rng, chunk=4096):
        self.rng = rng
        self.chunk = chunk
        self._buffer = []
        self._pos = 0

    def take(self, k):
        if self._pos + k > len(self._buffer):
            self._buffer = self._buffer[self._pos :] + self.rng.random(
                max(self.chunk, k)
            ).tolist()
            self._pos = 0
        values = self._buffer[self._pos : self._pos + k]
        self._pos += k
        return values


def sample_direct_target(eligible, weights, rng, exclude=frozenset()):
    """Draw one publication id from `eligible` with probability proportional to weight."""
    sampler = CumulativeSampler(weights, ids=eligible)
    if len(exclude):
        return CandidateStream(sampler, rng, chunk=16).next_excluding(set(exclude))
    return int(sampler.lookup(rng.random()))


def _redirect(refs, lam, already_cited, uniforms):
    """Entries of `refs` picked by one Binomial(m, lam / m) draw, minus those already cited."""
    m = len(refs)
    if m == 0 or lam <= 0:
        return []
    p = lam / m if lam < m else 1.0
    u = uniforms.take(m + 1)
    offset = int(u[m] * m)
    picked = []
    for k in range(m):
        slot = (k + offset) % m
        if u[slot] < p:
            candidate = refs[slot]
            if candidate not in already_cited:
                picked.append(candidate)
    return picked


def redirect_sample(refs, lam, already_cited, rng):
    """Publications cited through the reference list `refs` of a cited work.

    Draws x ~ Binomial(m, min(1, lam / m)) distinct entries uniformly and
    drops the ones already cited, so the result can be shorter than x.
    """
    uniforms = rng if isinstance(rng, UniformStream) else UniformStream(rng, chunk=64)
    return _redirect(list(refs), lam, already_cited, uniforms)


def _as_numpy(buffer, dtype):
    if not len(buffer):
        return np.zeros(0, dtype=dtype)
    return np.frombuffer(buffer, dtype=dtype).copy()


def _logit(p):
    return math.log(p / (1.0 - p))


class RedirectionControl:
    """Scale on lambda that steers each period's r^b / R toward beta.

    The realised share is modelled as logit(share) = log(scale * lambda) + k,
    where k is the log of the fraction of redirected entries that survive
    exclusion and truncation, estimated from the previous period. Each period
    aims at beta plus whatever the earlier periods fell short by, so the
    aggregate share stays on beta while k drifts with the growing lists.
    """

    def __init__(self):
        self.scale = 1.0
        self.deficit = 0.0
        self._last = None

    def scale_for(self, beta, lam, expected_refs):
        if self._last is not None:
            target = beta + self.deficit / expected_refs
            target = min(max(target, beta / 2), (1 + beta) / 2)
            survival = self._last["logit"] - self._last["log_lam"]
            step = _logit(target) - math.log(lam) - survival - math.log(self.scale)
            step = min(max(step, -MAX_SCALE_STEP), MAX_SCALE_STEP)
            low, high = SCALE_LIMITS
            self.scale = min(max(self.scale * math.exp(step), low), high)
        return self.scale

    def record(self, beta, lam, references, redirected):
        self.deficit += beta * references - redirected
        if 0 < redirected < references:
            self._last = {
                "logit": _logit(redirected / references),
                "log_lam": math.log(lam * self.scale),
            }


class NetworkBuilder:
    """Mutable growth state; `build` freezes it into a CitationNetwork."""

    def __init__(self, schedule, params):
        self.schedule = schedule
        self.params = params
        sizes = schedule.cohort_sizes()
        self.cohort = np.repeat(np.arange(sizes.size, dtype=np.int64), sizes)
        self.birth_size = sizes[self.cohort].astype(float)
        self.citations = np.zeros(self.cohort.size, dtype=np.int64)
        self.n = int(sizes[0])
        self.ref_ptr = array("q", [0] * (self.n + 1))
        self.ref_ids = array("q")
        self.redirected = bytearray()
        self.redirect_means = np.zeros(sizes.size)
        self.control = RedirectionControl()
        self.period = 0

    def _streams(self, t, sampler, expected):
        seq = np.random.SeedSequence(self.params.seed, spawn_key=(t,))
        direct_seq, redirect_seq = seq.spawn(2)
        chunk = int(min(65536, max(256, expected)))
        return (
            CandidateStream(sampler, np.random.default_rng(direct_seq), chunk),
            UniformStream(np.random.default_rng(redirect_seq), chunk),
        )

    def build_reference_list(self, target, direct, uniforms, lam):
        """One reference list of up to `target` ids and their redirection flags."""
        limit = min(target, self.n)
        refs, flags = [], []
        cited = set()
        ptr, ids = self.ref_ptr, self.ref_ids
        while len(refs) < limit:
            j = direct.next_excluding(cited)
            refs.append(j)
            flags.append(0)
            cited.add(j)
            if lam <= 0 or len(refs) >= limit:
                continue
            for k in _redirect(ids[ptr[j] : ptr[j + 1]], lam, cited, uniforms):
                refs.append(k)
                flags.append(1)
                cited.add(k)
                if len(refs) >= limit:
                    break
        return refs, flags

    def add_cohort(self, t):
        n_t = self.schedule.cohort_size(t)
        r_t = self.schedule.ref_target(t)
        beta = self.schedule.value_at(Target.BETA, t, self.params.beta)
        lam = redirect_mean(beta)
        pool = self.n
        start_edge = len(self.ref_ids)
        # a list of one entry leaves no room for a redirected reference
        steered = lam > 0 and n_t > 0 and min(r_t, pool) >= 2
        if steered:
            lam *= self.control.scale_for(beta, lam, n_t * min(r_t, pool))

        if n_t and r_t and pool:
            log_weights = log_attachment_weight(
                self.citations[:pool],
                self.birth_size[:pool],
                self.params,
                n_ref=n_t,
            )
            direct, uniforms = self._streams(
                t, CumulativeSampler.from_log_weights(log_weights), n_t * r_t
            )
            for _ in range(n_t):
                refs, flags = self.build_reference_list(r_t, direct, uniforms, lam)
                self.ref_ids.extend(refs)
                self.redirected.extend(flags)
                self.ref_ptr.append(len(self.ref_ids))
        else:
            self.ref_ptr.extend([start_edge] * n_t)

        new_edges = _as_numpy(self.ref_ids[start_edge:], np.int64)
        if steered:
            redirected = sum(self.redirected[start_edge:])
            self.control.record(beta, redirect_mean(beta), new_edges.size, redirected)
            self.redirect_means[t] = lam
        if new_edges.size:
            self.citations += np.bincount(new_edges, minlength=self.citations.size)
        self.n += n_t
        self.period = t
        logger.debug(
            "period %d: %d publications, %d references (beta=%.3f, lambda=%.3f)",
            t,
            n_t,
            new_edges.size,
            beta,
            lam,
        )

    def build(self):
        n = self.n
        return CitationNetwork(
            cohort=self.cohort[:n],
            ref_ptr=_as_numpy(self.ref_ptr, np.int64),
            ref_ids=_as_numpy(self.ref_ids, np.int64),
            redirected=_as_numpy(self.redirected, np.uint8).astype(bool),
            schedule=self.schedule,
            params=self.params,
            redirect_means=self.redirect_means[: self.period + 1].copy(),
        )


def simulate(schedule, params):
    """Grow a citation network over periods 1..T from the seed cohort."""
    builder = NetworkBuilder(schedule, params)
    for t in range(1, schedule.T + 1):
        builder.add_cohort(t)
    network = builder.build()
    logger.info(
        "Simulated %d publications and %d references over %d periods (seed=%d)",
        network.n_nodes,
        network.n_links,
        schedule.T,
        params.seed,
    )
    return network


@dataclass(frozen=True)
class RedirectionShare:
    redirected: int
    total: int
    beta: float

    @property
    def share(self):
        return self.redirected / self.total if self.total else 0.0

    @property
    def sigma(self):
        """Binomial standard deviation sqrt(beta (1 - beta) / R) of the share."""
        if not self.total:
            return math.inf
        return math.sqrt(self.beta * (1 - self.beta) / self.total)

    @property
    def z(self):
        return (self.share - self.beta) / self.sigma if self.sigma else math.inf


def redirection_share(network, since=20, beta=None):
    """Aggregate r^b / R over citing periods after `since`."""
    if beta is None:
        beta = network.params.beta
    mask = network.citing_cohort > since
    return RedirectionShare(
        redirected=int(network.redirected[mask].sum()),
        total=int(mask.sum()),
        beta=beta,
    )


@dataclass(frozen=True)
class PeriodSupply:
    t: np.ndarray
    n: np.ndarray
    references: np.ndarray
    redirected: np.ndarray
    citations: np.ndarray
    redirect_mean: np.ndarray

    def rows(self):
        return zip(
            self.t.tolist(),
            self.n.tolist(),
            self.references.tolist(),
            self.redirected.tolist(),
            self.citations.tolist(),
            self.redirect_mean.tolist(),
        )


def period_supply(network):
    """n(t), R(t), r^b(t), C(t) and the redirection mean used, per period.

    C(t) counts the citations received by cohort t up to the last period.
    The redirection mean is NaN for networks that were not simulated.
    """
    periods = network.periods
    first = int(periods[0])
    size = int(periods[-1]) - first + 1
    offset_citing = network.citing_cohort - first
    means = np.full(size, np.nan)
    if network.redirect_means is not None:
        means[: network.redirect_means.size] = network.redirect_means[first : first + size]
    return PeriodSupply(
        t=np.arange(first, first + size),
        n=np.bincount(network.cohort - first, minlength=size),
        references=np.bincount(offset_citing, minlength=size),
        redirected=np.bincount(offset_citing, weights=network.redirected, minlength=size).astype(
            np.int64
        ),
        citations=np.bincount(network.cited_cohort - first, minlength=size),
        redirect_mean=means,
    )


__all__ = [
    "ModelParams",
    "attachment_weight",
    "log_attachment_weight",
    "sample_direct_target",
    "redirect_sample",
    "NetworkBuilder",
    "simulate",
    "redirection_share",
    "period_supply",
]
