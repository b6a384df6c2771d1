import json

from ...core.exceptions import CitenetError, IngestError
from ...core.growth_schedule import fit_growth_rate
from ...ingest import parse_series
from ..base import CitenetCommand


class Command(CitenetCommand):
    help = "Fit an exponential growth rate to a t,value CSV series by least squares"

    def add_arguments(self, parser):
        parser.add_argument("--series", required=True, help="CSV with a header and two columns")
        parser.add_argument("--json", action="store_true", help="Print the fit as JSON")

    def handle(self, *args, **options):
        try:
            series = parse_series(options["series"])
        except IngestError as exc:
            raise self.invalid(exc)
        try:
            fit = fit_growth_rate(series)
        except CitenetError as exc:
            raise self.invalid(exc)

        result = {
            "g": fit.rate,
            "stderr": fit.stderr,
            "prefactor": fit.prefactor,
            "doubling_time": fit.doubling_time,
            "n_points": fit.n_points,
            "n_excluded": fit.n_excluded,
        }
        if options["json"]:
            self.stdout.write(json.dumps(result, sort_keys=True))
            return
        self.stdout.write(f"g = {fit.rate:.6g} +/- {fit.stderr:.2g}")
        self.stdout.write(f"prefactor = {fit.prefactor:.6g}")
        self.stdout.write(f"doubling time = {fit.doubling_time:.4g}")
        if fit.n_excluded:
            self.stdout.write(
                self.style.WARNING(f"⚠️ {fit.n_excluded} non-positive point(s) excluded")
            )
