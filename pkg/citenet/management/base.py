from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from ..config import parse_seeds
from ..core.exceptions import CitenetError, ConfigError, IngestError

INVALID = 2
FAILED = 1


class CitenetCommand(BaseCommand):
    """
    Shared flags and error handling for the simulator commands

    Input problems exit with status 2 before anything is written; failures
    while running or writing exit with status 1
    """

    def add_common_arguments(self, parser, config=True, seeds=True):
        if config:
            parser.add_argument(
                "--config",
                help="Scenario file (default: the bundled default.scenario)",
            )
        if seeds:
            parser.add_argument(
                "--seed",
                help="Seed or comma-separated seeds, overriding the scenario's [run] seeds",
            )
        parser.add_argument(
            "--out",
            help=f"Output directory (default: {settings.CITENET['OUT_DIR']})",
        )

    def invalid(self, message):
        return CommandError(str(message), returncode=INVALID)

    def failed(self, message):
        return CommandError(str(message), returncode=FAILED)

    def seeds(self, options, default):
        if not options.get("seed"):
            return tuple(default)
        try:
            return parse_seeds(options["seed"])
        except ConfigError as exc:
            raise self.invalid(exc)

    def output_dir(self, options):
        out = Path(options.get("out") or settings.CITENET["OUT_DIR"])
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise self.failed(f"{out}: cannot create output directory ({exc.strerror})")
        return out

    def run_guarded(self, function, *args, **kwargs):
        """Call `function`, turning domain and I/O errors into CommandErrors."""
        try:
            return function(*args, **kwargs)
        except (ConfigError, IngestError) as exc:
            raise self.invalid(exc)
        except (CitenetError, OSError) as exc:
            raise self.failed(exc)
