from pathlib import Path

from ...config import load_analysis
from ...core.exceptions import ConfigError, ForwardEdgeError, IngestError
from ...ingest import ForwardEdgePolicy, build_network, parse_publications, read_network_csv
from ...runner import analyze_files, record_run
from ..base import CitenetCommand


class Command(CitenetCommand):
    help = "Per-cohort metrics and reference-age tables for a network on disk"

    def add_arguments(self, parser):
        self.add_common_arguments(parser, seeds=False)
        parser.add_argument("--nodes", help="Node table CSV with columns id,cohort")
        parser.add_argument("--edges", help="Edge list CSV with columns citing_id,cited_id")
        parser.add_argument("--records", help="Publication records, one JSON object per line")
        parser.add_argument(
            "--forward-policy",
            choices=[policy.value for policy in ForwardEdgePolicy],
            default=ForwardEdgePolicy.DROP.value,
            help="What to do with references to later years (default: drop)",
        )
        parser.add_argument(
            "--any-year",
            action="store_true",
            help="Accept record years outside the configured plausible range",
        )

    def load_network(self, options):
        if options.get("records"):
            path = Path(options["records"])
            try:
                with open(path, encoding="utf-8") as handle:
                    parsed = parse_publications(
                        handle, **({"year_range": None} if options["any_year"] else {})
                    )
            except OSError as exc:
                raise IngestError(f"{path}: {exc.strerror}") from exc
            if parsed.errors:
                for error in parsed.errors:
                    self.stderr.write(f"{path}: {error}")
                raise IngestError(f"{path}: {len(parsed.errors)} invalid line(s)")
            network, report = build_network(parsed.items, options["forward_policy"])
            self.stdout.write(
                f"{report.n_records} records, {report.n_edges} edges, "
                f"{report.dangling} dangling, {report.forward} forward-dated"
            )
            return network, str(path)

        if not (options.get("nodes") and options.get("edges")):
            raise IngestError("give --records, or both --nodes and --edges")
        network = read_network_csv(options["nodes"], options["edges"], options["forward_policy"])
        return network, f"{options['nodes']},{options['edges']}"

    def handle(self, *args, **options):
        try:
            config = load_analysis(options.get("config"))
            network, label = self.load_network(options)
        except (ConfigError, IngestError, ForwardEdgeError) as exc:
            raise self.invalid(exc)
        out = self.output_dir(options)

        summary = self.run_guarded(
            analyze_files, network, config.analysis, out, label, config.config_hash
        )
        name = Path(options["config"]).stem if options.get("config") else "analysis"
        record_run("analyze", name, config.config_hash, summary)
        self.stdout.write(
            self.style.SUCCESS(
                f"✅ Analyzed {summary['n_nodes']} publications and {summary['n_links']} "
                f"references -> {out}"
            )
        )
