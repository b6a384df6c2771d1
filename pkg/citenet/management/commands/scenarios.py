from django.conf import settings

from ...core.exceptions import ConfigError
from ...experiments import EXPERIMENTS, default_analysis, get_experiment, run_experiment
from ...runner import record_run
from ..base import CitenetCommand


class Command(CitenetCommand):
    help = "Run perturbation experiments against their unperturbed controls"

    def add_arguments(self, parser):
        parser.add_argument(
            "names",
            nargs="*",
            help=f"Experiments to run: {', '.join(EXPERIMENTS)}",
        )
        parser.add_argument("--all", action="store_true", help="Run every experiment")
        self.add_common_arguments(parser, config=False)
        parser.add_argument("--workers", type=int, default=settings.CITENET["WORKERS"])
        parser.add_argument(
            "--periods",
            type=int,
            default=settings.CITENET["SCENARIO_PERIODS"],
            help="Number of periods T",
        )
        parser.add_argument(
            "--t-star",
            type=int,
            default=settings.CITENET["SCENARIO_T_STAR"],
            help="Perturbation period",
        )

    def handle(self, *args, **options):
        names = list(EXPERIMENTS) if options["all"] else options["names"]
        if not names:
            raise self.invalid("name at least one experiment or pass --all")
        try:
            for name in names:
                experiment = get_experiment(name)
                experiment.arms(
                    options["periods"],
                    options["t_star"],
                    default_analysis(options["periods"], options["t_star"]),
                )
        except ConfigError as exc:
            raise self.invalid(exc)
        seeds = self.seeds(options, range(10))
        out = self.output_dir(options)

        for name in names:
            self.stdout.write(f"🧪 {name}: {EXPERIMENTS[name].description}, seeds {list(seeds)}")
            comparison = self.run_guarded(
                run_experiment,
                name,
                seeds,
                out,
                workers=options["workers"],
                T=options["periods"],
                t_star=options["t_star"],
            )
            for arm, rows in comparison["arms"].items():
                for row in rows:
                    record_run("scenarios", f"{name}-{arm}", comparison["config_hash"][arm], row)
            for key, test in comparison["sign_test"].items():
                self.stdout.write(
                    f"  {key}: perturbed higher in {test['higher']}, lower in {test['lower']} "
                    f"(p={test['p_value']:.3g})"
                )
        self.stdout.write(self.style.SUCCESS(f"✅ {len(names)} experiment(s) written to {out}"))
