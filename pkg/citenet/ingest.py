"""
Readers that turn external corpora into the objects the simulator produces.

JSONL inputs are validated line by line with the DRF serializers; invalid
lines become LineErrors and the remaining lines are still returned, so one
bad record never hides the rest of the report.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd
from django.conf import settings

from .core.deflator import CareerProfile, PublicationCitations
from .core.exceptions import ForwardEdgeError, IngestError, LineError
from .core.growth_schedule import TimeSeries
from .core.network import CitationNetwork, PublicationRecord
from .serializers import CareerSerializer, PublicationRecordSerializer, flatten_errors

logger = logging.getLogger(__name__)


class ForwardEdgePolicy(str, Enum):
    DROP = "drop"
    KEEP = "keep"
    ERROR = "error"


@dataclass
class ParseResult:
    items: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors


@dataclass
class BuildReport:
    n_records: int = 0
    n_edges: int = 0
    dangling: int = 0
    forward: int = 0
    forward_kept: int = 0
    self_refs: int = 0


def _json_lines(lines):
    try:
        for number, line in enumerate(lines, start=1):
            if isinstance(line, bytes):
                line = line.decode("utf-8")
            if not line.strip():
                continue
            try:
                yield number, json.loads(line), None
            except json.JSONDecodeError as exc:
                yield number, None, f"invalid JSON ({exc.msg})"
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"unreadable stream: {exc}") from exc


def _validated(lines, serializer_class, context):
    for number, payload, problem in _json_lines(lines):
        if problem is None and not isinstance(payload, dict):
            problem = "expected a JSON object"
        if problem is not None:
            yield number, None, [LineError(number, problem)]
            continue
        serializer = serializer_class(data=payload, context=context)
        if serializer.is_valid():
            yield number, serializer.validated_data, []
        else:
            yield number, None, [LineError(number, m) for m in flatten_errors(serializer.errors)]


def parse_publications(lines, year_range=settings.CITENET["YEAR_RANGE"]):
    """PublicationRecords from JSONL lines, plus line-addressed errors."""
    result = ParseResult()
    first_seen = {}
    for number, data, errors in _validated(
        lines, PublicationRecordSerializer, {"year_range": year_range}
    ):
        if errors:
            result.errors.extend(errors)
            continue
        if data["id"] in first_seen:
            result.errors.append(
                LineError(number, f"duplicate id '{data['id']}' (first on line {first_seen[data['id']]})")
            )
            continue
        first_seen[data["id"]] = number
        result.items.append(
            PublicationRecord(id=data["id"], year=data["year"], refs=tuple(data["refs"]))
        )
    if result.errors:
        logger.warning("%d invalid publication lines", len(result.errors))
    return result


def build_network(records, policy=ForwardEdgePolicy.DROP):
    """CitationNetwork over the records, cohorts formed by year.

    References to unknown ids are dangling and excluded. Edges to a later
    year follow `policy`; same-year edges are kept.
    """
    policy = ForwardEdgePolicy(policy)
    ordered = sorted(records, key=lambda record: record.year)
    index = {record.id: i for i, record in enumerate(ordered)}
    report = BuildReport(n_records=len(ordered))
    citing, cited = [], []
    for i, record in enumerate(ordered):
        for ref in record.refs:
            j = index.get(ref)
            if j is None:
                report.dangling += 1
                continue
            if j == i:
                report.self_refs += 1
                continue
            if ordered[j].year > record.year:
                report.forward += 1
                if policy is ForwardEdgePolicy.ERROR:
                    raise ForwardEdgeError(
                        f"{record.id} ({record.year}) cites {ref} ({ordered[j].year})"
                    )
                if policy is ForwardEdgePolicy.DROP:
                    continue
                report.forward_kept += 1
            citing.append(i)
            cited.append(j)
    report.n_edges = len(citing)

    if report.dangling:
        logger.warning("Excluded %d dangling references", report.dangling)
    if report.forward:
        logger.warning(
            "%d forward-dated references (%s policy)", report.forward, policy.value
        )
    network = CitationNetwork.from_edges(
        [record.year for record in ordered],
        citing,
        cited,
        labels=tuple(record.id for record in ordered),
    )
    return network, report


def parse_careers(lines, year_range=settings.CITENET["YEAR_RANGE"]):
    result = ParseResult()
    first_seen = {}
    for number, data, errors in _validated(lines, CareerSerializer, {"year_range": year_range}):
        if errors:
            result.errors.extend(errors)
            continue
        researcher = data["researcher"]
        if researcher in first_seen:
            result.errors.append(
                LineError(number, f"duplicate researcher '{researcher}' (first on line {first_seen[researcher]})")
            )
            continue
        first_seen[researcher] = number
        result.items.append(
            CareerProfile(
                researcher_id=researcher,
                pubs=tuple(
                    PublicationCitations(id=pub["id"], year=pub["year"], cites=pub["cites"])
                    for pub in data["pubs"]
                ),
            )
        )
    return result


def _read_csv(source, columns):
    try:
        frame = pd.read_csv(source, dtype=str, skipinitialspace=True, keep_default_na=False)
    except FileNotFoundError as exc:
        raise IngestError(f"{source}: no such file") from exc
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise IngestError(f"{source}: {exc}") from exc
    frame.columns = [str(name).strip() for name in frame.columns]
    if columns is not None:
        missing = [name for name in columns if name not in frame.columns]
        if missing:
            raise IngestError(f"{source}: missing column(s) {', '.join(missing)}")
        frame = frame[list(columns)]
    return frame.apply(lambda column: column.str.strip())


def _numeric(frame, column, source, integer=False):
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = values.isna() | ~np.isfinite(values)
    if integer:
        bad |= values != values.round()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # header is line 1
        raise IngestError(
            f"{source}: line {row + 2}: non-numeric {column} '{frame[column].iloc[row]}'"
        )
    return values.to_numpy(dtype=np.int64 if integer else float)


def parse_series(source):
    """A two-column CSV with a header (`t,value` or `year,n_a`) as a TimeSeries."""
    frame = _read_csv(source, None)
    if frame.shape[1] != 2:
        raise IngestError(f"{source}: expected 2 columns, found {frame.shape[1]}")
    if frame.empty:
        raise IngestError(f"{source}: no rows")
    t_name, value_name = frame.columns
    t = _numeric(frame, t_name, source)
    values = _numeric(frame, value_name, source)
    steps = np.flatnonzero(np.diff(t) <= 0)
    if steps.size:
        raise IngestError(
            f"{source}: line {steps[0] + 3}: {t_name} is not strictly increasing"
        )
    if np.all(t == np.round(t)):
        t = t.astype(np.int64)
    return TimeSeries(t=tuple(t.tolist()), values=tuple(values.tolist()), name=value_name)


def read_network_csv(nodes, edges, policy=ForwardEdgePolicy.DROP):
    """CitationNetwork from `id,cohort` and `citing_id,cited_id` tables."""
    policy = ForwardEdgePolicy(policy)
    node_frame = _read_csv(nodes, ("id", "cohort"))
    edge_frame = _read_csv(edges, ("citing_id", "cited_id"))
    ids = _numeric(node_frame, "id", nodes, integer=True)
    cohort = _numeric(node_frame, "cohort", nodes, integer=True)
    duplicated = [k for k, count in Counter(ids.tolist()).items() if count > 1]
    if duplicated:
        raise IngestError(f"{nodes}: duplicate node id {duplicated[0]}")

    order = np.lexsort((ids, cohort))
    position = pd.Index(ids[order])
    citing = position.get_indexer(_numeric(edge_frame, "citing_id", edges, integer=True))
    cited = position.get_indexer(_numeric(edge_frame, "cited_id", edges, integer=True))
    unknown = (citing < 0) | (cited < 0)
    if unknown.any():
        raise IngestError(
            f"{edges}: line {int(np.flatnonzero(unknown)[0]) + 2}: "
            f"edge endpoint not in {nodes} ({int(unknown.sum())} such edges)"
        )

    sorted_cohort = cohort[order]
    forward = sorted_cohort[cited] > sorted_cohort[citing]
    if forward.any():
        if policy is ForwardEdgePolicy.ERROR:
            raise ForwardEdgeError(f"{edges}: {int(forward.sum())} forward-dated edges")
        logger.warning("%d forward-dated edges (%s policy)", int(forward.sum()), policy.value)
        if policy is ForwardEdgePolicy.DROP:
            citing, cited = citing[~forward], cited[~forward]

    return CitationNetwork.from_edges(
        sorted_cohort,
        citing,
        cited,
        labels=tuple(str(i) for i in ids[order].tolist()),
    )
