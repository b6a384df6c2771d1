"""
Citation network data model shared by simulated and ingested corpora.

Publications are dense integer ids grouped by cohort (ids of one cohort
form a contiguous range, cohorts ascending). Reference lists are stored in
CSR form: the references of publication i are
``ref_ids[ref_ptr[i]:ref_ptr[i + 1]]``.
"""

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from .exceptions import CitenetError


class UnknownCohortError(CitenetError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown cohort"


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    year: int
    refs: tuple = ()


def _readonly(array, dtype):
    array = np.array(array, dtype=dtype)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class CitationNetwork:
    cohort: np.ndarray
    ref_ptr: np.ndarray
    ref_ids: np.ndarray
    redirected: np.ndarray = None
    labels: tuple = None
    schedule: object = None
    params: object = None
    redirect_means: np.ndarray = None

    def __post_init__(self):
        cohort = _readonly(self.cohort, np.int64)
        ref_ptr = _readonly(self.ref_ptr, np.int64)
        ref_ids = _readonly(self.ref_ids, np.int64)
        redirected = self.redirected
        if redirected is None:
            redirected = np.zeros(ref_ids.size, dtype=bool)
        redirected = _readonly(redirected, bool)

        if ref_ptr.size != cohort.size + 1 or ref_ptr[-1] != ref_ids.size:
            raise CitenetError("reference offsets do not match the node table")
        if redirected.size != ref_ids.size:
            raise CitenetError("one redirection flag is required per edge")
        if cohort.size and np.any(np.diff(cohort) < 0):
            raise CitenetError("publication ids must be ordered by cohort")
        if ref_ids.size and (ref_ids.min() < 0 or ref_ids.max() >= cohort.size):
            raise CitenetError("edge endpoint outside the node table")
        if self.labels is not None and len(self.labels) != cohort.size:
            raise CitenetError("one label is required per publication")

        object.__setattr__(self, "cohort", cohort)
        object.__setattr__(self, "ref_ptr", ref_ptr)
        object.__setattr__(self, "ref_ids", ref_ids)
        object.__setattr__(self, "redirected", redirected)

    @classmethod
    def from_edges(cls, cohort, citing, cited, redirected=None, **kwargs):
        """Build a network from a node cohort table and an edge list."""
        cohort = np.asarray(cohort, dtype=np.int64)
        citing = np.asarray(citing, dtype=np.int64)
        cited = np.asarray(cited, dtype=np.int64)
        if citing.shape != cited.shape:
            raise CitenetError("citing and cited columns differ in length")
        if citing.size and (citing.min() < 0 or citing.max() >= cohort.size):
            raise CitenetError("edge endpoint outside the node table")
        order = np.argsort(citing, kind="stable")
        ref_ptr = np.zeros(cohort.size + 1, dtype=np.int64)
        np.cumsum(np.bincount(citing, minlength=cohort.size), out=ref_ptr[1:])
        if redirected is not None:
            redirected = np.asarray(redirected, dtype=bool)[order]
        return cls(
            cohort=cohort,
            ref_ptr=ref_ptr,
            ref_ids=cited[order],
            redirected=redirected,
            **kwargs,
        )

    @property
    def n_nodes(self):
        return int(self.cohort.size)

    @property
    def n_links(self):
        return int(self.ref_ids.size)

    @cached_property
    def citing(self):
        return np.repeat(np.arange(self.n_nodes, dtype=np.int64), self.outdegree)

    @property
    def cited(self):
        return self.ref_ids

    @cached_property
    def outdegree(self):
        return np.diff(self.ref_ptr)

    @cached_property
    def indegree(self):
        return np.bincount(self.ref_ids, minlength=self.n_nodes)

    @cached_property
    def citing_cohort(self):
        return self.cohort[self.citing]

    @cached_property
    def cited_cohort(self):
        return self.cohort[self.ref_ids]

    @cached_property
    def delta_r(self):
        """Reference distance per edge; forward-dated edges count as 0."""
        return np.maximum(self.citing_cohort - self.cited_cohort, 0)

    @cached_property
    def periods(self):
        return np.unique(self.cohort)

    @cached_property
    def _cohort_bounds(self):
        periods, starts = np.unique(self.cohort, return_index=True)
        ends = np.append(starts[1:], self.n_nodes)
        return {int(p): (int(s), int(e)) for p, s, e in zip(periods, starts, ends)}

    @property
    def first_period(self):
        return int(self.cohort[0])

    @property
    def last_period(self):
        return int(self.cohort[-1])

    def has_cohort(self, t):
        return int(t) in self._cohort_bounds

    def cohort_ids(self, t):
        try:
            start, end = self._cohort_bounds[int(t)]
        except KeyError:
            raise UnknownCohortError(f"no publications in cohort {t}") from None
        return range(start, end)

    def cohort_size(self, t):
        bounds = self._cohort_bounds.get(int(t))
        return 0 if bounds is None else bounds[1] - bounds[0]

    def refs(self, i):
        return tuple(int(j) for j in self.ref_ids[self.ref_ptr[i] : self.ref_ptr[i + 1]])

    def label(self, i):
        return str(i) if self.labels is None else self.labels[i]

    def to_records(self):
        return [
            PublicationRecord(
                id=self.label(i),
                year=int(self.cohort[i]),
                refs=tuple(self.label(j) for j in self.refs(i)),
            )
            for i in range(self.n_nodes)
        ]

    def to_networkx(self, undirected=False):
        graph = nx.Graph() if undirected else nx.DiGraph()
        graph.add_nodes_from(
            (i, {"cohort": int(c)}) for i, c in enumerate(self.cohort.tolist())
        )
        graph.add_edges_from(zip(self.citing.tolist(), self.ref_ids.tolist()))
        return graph
