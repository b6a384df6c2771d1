from pathlib import Path

from django.conf import settings

from ... import exports
from ...core.deflator import DeflatorSeries, career_metrics, cohort_means, fit_g10
from ...core.exceptions import CitenetError, IngestError
from ...ingest import parse_careers, parse_series
from ..base import CitenetCommand

RATIOS = ("rho_H", "rho_C")


class Command(CitenetCommand):
    help = "Deflated h-index and citation totals per researcher, with the g10 cohort fit"

    def add_arguments(self, parser):
        self.add_common_arguments(parser, config=False, seeds=False)
        parser.add_argument("--careers", required=True, help="Careers, one JSON object per line")
        parser.add_argument("--series", required=True, help="CSV with columns year,n_a")
        parser.add_argument(
            "--baseline-year",
            type=int,
            default=settings.CITENET["BASELINE_YEAR"],
            help="Year whose publication count citations are expressed in",
        )
        parser.add_argument(
            "--census-year",
            type=int,
            help="Last citation year counted (default: the baseline year)",
        )
        parser.add_argument(
            "--reference-year",
            type=int,
            default=settings.CITENET["G10_REFERENCE_YEAR"],
            help="Cohort year at which the fitted ratio equals rho0",
        )
        parser.add_argument(
            "--pooled",
            action="store_true",
            help="Fit every researcher as one point instead of decade cohort means",
        )

    def load(self, options):
        series = DeflatorSeries.from_series(
            parse_series(options["series"]),
            baseline_year=options["baseline_year"],
            census_year=options.get("census_year"),
        )
        path = Path(options["careers"])
        try:
            with open(path, encoding="utf-8") as handle:
                parsed = parse_careers(handle)
        except OSError as exc:
            raise IngestError(f"{path}: {exc.strerror}") from exc
        if parsed.errors:
            for error in parsed.errors:
                self.stderr.write(f"{path}: {error}")
            raise IngestError(f"{path}: {len(parsed.errors)} invalid line(s)")
        return series, parsed.items

    def fit_block(self, metrics, options):
        block = {}
        for ratio in RATIOS:
            means = cohort_means(metrics, ratio)
            points = metrics if options["pooled"] else means
            try:
                fit = fit_g10(
                    points,
                    reference_year=options["reference_year"],
                    pooled=options["pooled"],
                    field=ratio,
                )
            except CitenetError as exc:
                self.stdout.write(self.style.WARNING(f"⚠️ {ratio}: no fit ({exc})"))
                fit = None
            block[ratio] = {
                "cohort_means": [{"cohort": t, "mean": mean} for t, mean in means],
                "fit": None
                if fit is None
                else {"rho0": fit.rho0, "g10": fit.g10, "stderr": fit.stderr, "n_points": fit.n_points},
            }
        return block

    def handle(self, *args, **options):
        try:
            series, careers = self.load(options)
            metrics = [career_metrics(profile, series) for profile in careers]
            block = self.fit_block(metrics, options)
        except CitenetError as exc:
            raise self.invalid(exc)
        out = self.output_dir(options)

        def write():
            exports.write_csv(exports.careers_frame(metrics), out / "careers.csv")
            exports.write_json(
                {
                    "baseline_year": series.baseline_year,
                    "census_year": series.census,
                    "reference_year": options["reference_year"],
                    "pooled": options["pooled"],
                    "researchers": len(metrics),
                    **block,
                },
                out / "g10.json",
            )

        self.run_guarded(write)
        for ratio in RATIOS:
            fit = block[ratio]["fit"]
            if fit is not None:
                self.stdout.write(f"{ratio}: g10 = {fit['g10']:.4f} +/- {fit['stderr']:.4f}")
        self.stdout.write(self.style.SUCCESS(f"✅ {len(metrics)} careers deflated -> {out}"))
