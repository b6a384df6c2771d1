import io
import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from citenet import exports
from citenet.core.exceptions import ForwardEdgeError, IngestError
from citenet.core.growth_schedule import GrowthParams, GrowthSchedule
from citenet.core.network import PublicationRecord
from citenet.core.refage import ref_age_histogram
from citenet.core.simulator import ModelParams, simulate
from citenet.ingest import (
    build_network,
    parse_careers,
    parse_publications,
    parse_series,
    read_network_csv,
)


def jsonl(*objects):
    return [json.dumps(obj) for obj in objects]


def labelled_edges(network):
    return {
        (network.label(i), network.label(j))
        for i, j in zip(network.citing.tolist(), network.ref_ids.tolist())
    }


class ParsePublicationsTests(SimpleTestCase):
    def test_well_formed(self):
        parsed = parse_publications(
            jsonl(
                {"id": "a", "year": 2000},
                {"id": "b", "year": 2001, "refs": ["a"]},
                {"id": "c", "year": 2002, "refs": ["a", "b"]},
            )
        )
        self.assertTrue(parsed.ok)
        self.assertEqual(len(parsed.items), 3)
        self.assertEqual(parsed.items[2], PublicationRecord("c", 2002, ("a", "b")))

    def test_missing_year_reports_line(self):
        parsed = parse_publications(
            jsonl({"id": "a", "year": 2000}, {"id": "b", "refs": ["a"]}, {"id": "c", "year": 2002})
        )
        self.assertEqual(len(parsed.items), 2)
        self.assertEqual(len(parsed.errors), 1)
        self.assertEqual(parsed.errors[0].line, 2)
        self.assertIn("year", parsed.errors[0].message)

    def test_bad_json_and_blank_lines(self):
        parsed = parse_publications(['{"id": "a", "year": 2000}', "", "{not json", "[1, 2]"])
        self.assertEqual(len(parsed.items), 1)
        self.assertEqual([error.line for error in parsed.errors], [3, 4])
        self.assertTrue(str(parsed.errors[0]).startswith("line 3: invalid JSON"))

    def test_duplicate_id(self):
        parsed = parse_publications(jsonl({"id": "a", "year": 2000}, {"id": "a", "year": 2001}))
        self.assertEqual(len(parsed.items), 1)
        self.assertIn("first on line 1", parsed.errors[0].message)

    def test_duplicate_reference(self):
        parsed = parse_publications(jsonl({"id": "b", "year": 2001, "refs": ["a", "a"]}))
        self.assertFalse(parsed.ok)
        self.assertIn("refs", str(parsed.errors[0]))

    def test_year_range(self):
        lines = jsonl({"id": "a", "year": 12})
        self.assertFalse(parse_publications(lines).ok)
        self.assertTrue(parse_publications(lines, year_range=None).ok)


class BuildNetworkTests(SimpleTestCase):
    def test_dangling_references_excluded(self):
        records = [PublicationRecord("a", 2000), PublicationRecord("b", 2001, ("a", "zzz"))]
        network, report = build_network(records)
        self.assertEqual(report.dangling, 1)
        self.assertEqual(report.n_edges, 1)
        self.assertEqual(labelled_edges(network), {("b", "a")})

    def test_forward_policies(self):
        records = [PublicationRecord("a", 2000, ("b",)), PublicationRecord("b", 2001)]
        network, report = build_network(records, "drop")
        self.assertEqual((report.forward, network.n_links), (1, 0))

        network, report = build_network(records, "keep")
        self.assertEqual(report.forward_kept, 1)
        self.assertEqual(network.delta_r.tolist(), [0])

        with self.assertRaises(ForwardEdgeError):
            build_network(records, "error")

    def test_same_year_and_self_references(self):
        records = [PublicationRecord("a", 2000, ("a",)), PublicationRecord("b", 2000, ("a",))]
        network, report = build_network(records)
        self.assertEqual(report.self_refs, 1)
        self.assertEqual(labelled_edges(network), {("b", "a")})
        self.assertEqual(network.delta_r.tolist(), [0])

    def test_known_distance_histogram(self):
        records = [PublicationRecord(f"old{k}", 1990 + k) for k in range(10)]
        records.append(PublicationRecord("new", 2000, tuple(f"old{k}" for k in (0, 5, 7, 9))))
        network, _ = build_network(records)
        dist = ref_age_histogram(network, 2000)
        self.assertEqual({d: int(c) for d, c in enumerate(dist.counts) if c}, {10: 1, 5: 1, 3: 1, 1: 1})

    def test_simulated_round_trip(self):
        original = simulate(GrowthSchedule(GrowthParams(T=20)), ModelParams(seed=2))
        with tempfile.TemporaryDirectory() as tmp:
            path = exports.write_records(original, Path(tmp) / "records.jsonl")
            with open(path, encoding="utf-8") as handle:
                parsed = parse_publications(handle, year_range=None)
        self.assertTrue(parsed.ok)
        network, report = build_network(parsed.items)
        self.assertEqual(report.dangling + report.forward, 0)
        self.assertEqual(network.n_nodes, original.n_nodes)
        self.assertEqual(labelled_edges(network), labelled_edges(original))
        cohorts = {network.label(i): int(network.cohort[i]) for i in range(network.n_nodes)}
        self.assertEqual(cohorts, {str(i): int(c) for i, c in enumerate(original.cohort)})


class NetworkCsvTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_round_trip(self):
        original = simulate(GrowthSchedule(GrowthParams(T=20)), ModelParams(seed=6))
        nodes, edges = exports.write_network(original, self.dir / "nodes.csv", self.dir / "edges.csv")
        network = read_network_csv(nodes, edges)
        np.testing.assert_array_equal(network.cohort, original.cohort)
        np.testing.assert_array_equal(network.ref_ptr, original.ref_ptr)
        np.testing.assert_array_equal(network.ref_ids, original.ref_ids)

    def test_missing_file_names_path(self):
        (self.dir / "nodes.csv").write_text("id,cohort\n0,0\n")
        missing = self.dir / "edges.csv"
        with self.assertRaises(IngestError) as caught:
            read_network_csv(self.dir / "nodes.csv", missing)
        self.assertIn(str(missing), str(caught.exception))

    def test_unknown_endpoint(self):
        (self.dir / "nodes.csv").write_text("id,cohort\n0,0\n1,1\n")
        (self.dir / "edges.csv").write_text("citing_id,cited_id\n1,0\n1,7\n")
        with self.assertRaises(IngestError) as caught:
            read_network_csv(self.dir / "nodes.csv", self.dir / "edges.csv")
        self.assertIn("line 3", str(caught.exception))

    def test_duplicate_node(self):
        (self.dir / "nodes.csv").write_text("id,cohort\n0,0\n0,1\n")
        (self.dir / "edges.csv").write_text("citing_id,cited_id\n")
        with self.assertRaises(IngestError):
            read_network_csv(self.dir / "nodes.csv", self.dir / "edges.csv")

    def test_forward_edge_policy(self):
        (self.dir / "nodes.csv").write_text("id,cohort\n0,0\n1,1\n")
        (self.dir / "edges.csv").write_text("citing_id,cited_id\n0,1\n")
        self.assertEqual(read_network_csv(self.dir / "nodes.csv", self.dir / "edges.csv").n_links, 0)
        with self.assertRaises(ForwardEdgeError):
            read_network_csv(self.dir / "nodes.csv", self.dir / "edges.csv", "error")


class ParseSeriesTests(SimpleTestCase):
    def test_ten_rows(self):
        rows = "".join(f"{t},{2 * t + 1}\n" for t in range(10))
        series = parse_series(io.StringIO("t,value\n" + rows))
        self.assertEqual(len(series), 10)
        self.assertEqual(series.t[3], 3)
        self.assertEqual(series.values[3], 7.0)
        self.assertEqual(series.name, "value")

    def test_whitespace_tolerated(self):
        series = parse_series(io.StringIO("year , n_a\n  3 ,  4.5 \n4,5\n"))
        self.assertEqual(series.t, (3, 4))
        self.assertEqual(series.values, (4.5, 5.0))

    def test_duplicate_t(self):
        with self.assertRaises(IngestError) as caught:
            parse_series(io.StringIO("t,value\n1,2\n2,3\n2,4\n"))
        self.assertIn("line 4", str(caught.exception))

    def test_non_numeric(self):
        with self.assertRaises(IngestError) as caught:
            parse_series(io.StringIO("t,value\n1,2\n2,abc\n"))
        self.assertIn("line 3", str(caught.exception))

    def test_wrong_shape(self):
        with self.assertRaises(IngestError):
            parse_series(io.StringIO("t,value,extra\n1,2,3\n"))
        with self.assertRaises(IngestError):
            parse_series(io.StringIO("t,value\n"))


class ParseCareersTests(SimpleTestCase):
    def test_careers(self):
        parsed = parse_careers(
            jsonl(
                {"researcher": "r1", "pubs": [{"id": "p", "year": 2000, "cites": {"2001": 3}}]},
                {"researcher": "r2", "pubs": [{"id": "q", "year": 2000, "cites": {"1999": 1}}]},
                {"researcher": "r3", "pubs": []},
            )
        )
        self.assertEqual(len(parsed.items), 1)
        self.assertEqual(parsed.items[0].pubs[0].cites, {2001: 3})
        self.assertEqual([error.line for error in parsed.errors], [2, 3])
