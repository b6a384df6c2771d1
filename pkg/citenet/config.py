"""
Scenario files.

A scenario is an INI document with the sections [growth], [model],
[analysis] and [run]. Lists are comma separated; perturbations are one
`t_star, target, value` triple per line of the `perturb` option:

    [growth]
    T = 200
    perturb =
        165, beta, 0.4
"""

import configparser
import copy
import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from django.conf import settings

from .core.exceptions import ConfigError
from .core.growth_schedule import GrowthParams, GrowthSchedule, PerturbationEvent
from .core.simulator import ModelParams
from .serializers import AnalysisBlockSerializer, ScenarioConfigSerializer, flatten_errors

logger = logging.getLogger(__name__)

SECTIONS = ("growth", "model", "analysis", "run")
LIST_OPTIONS = {
    "analysis": ("percentiles", "thresholds", "snapshots", "deltas"),
    "run": ("seeds",),
}


@dataclass(frozen=True)
class Scenario:
    name: str
    growth: GrowthParams
    events: tuple
    model: ModelParams
    analysis: dict
    seeds: tuple
    workers: int = 1
    data: dict = field(default_factory=dict, compare=False)

    @property
    def schedule(self):
        return GrowthSchedule(self.growth, self.events)

    def params_for(self, seed):
        return self.model.with_seed(seed)

    def with_seeds(self, seeds):
        return replace(self, seeds=tuple(seeds))

    @property
    def config_hash(self):
        """sha256 of the validated settings that shape a run; seeds and workers excluded."""
        payload = {key: self.data[key] for key in ("growth", "model", "analysis")}
        payload["name"] = self.name
        encoded = json.dumps(payload, sort_keys=True, default=str).encode()
        return hashlib.sha256(encoded).hexdigest()


def _split_list(value):
    return [item.strip() for item in value.replace("\n", ",").split(",") if item.strip()]


def _perturbations(value):
    events = []
    for number, line in enumerate(value.strip().splitlines(), start=1):
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"growth.perturb: line {number} needs 't_star, target, value'")
        events.append(dict(zip(("t_star", "target", "value"), parts)))
    return events


def _raw_sections(parser):
    unknown = [name for name in parser.sections() if name not in SECTIONS]
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown section")
    raw = {name: {} for name in SECTIONS}
    for name in SECTIONS:
        if not parser.has_section(name):
            continue
        for key, value in parser.items(name):
            if key == "perturb" and name == "growth":
                raw[name][key] = _perturbations(value)
            elif key in LIST_OPTIONS.get(name, ()):
                raw[name][key] = _split_list(value)
            elif name == "analysis" and key == "tau" and not value.strip():
                raw[name][key] = None
            else:
                raw[name][key] = value.strip()
    return raw


def scenario_from_data(raw, name=None):
    """Validate a {section: {key: value}} mapping into a Scenario."""
    raw = copy.deepcopy(raw)
    analysis = dict(settings.CITENET["ANALYSIS"])
    analysis.update(raw.get("analysis", {}))
    raw["analysis"] = analysis
    for section in ("growth", "model", "run"):
        raw.setdefault(section, {})
    if name is not None:
        raw["run"]["name"] = name

    serializer = ScenarioConfigSerializer(data=raw)
    if not serializer.is_valid():
        raise ConfigError("; ".join(flatten_errors(serializer.errors)))
    data = json.loads(json.dumps(serializer.validated_data))

    growth = data["growth"]
    model = data["model"]
    run = data["run"]
    try:
        scenario = Scenario(
            name=run["name"],
            growth=GrowthParams(
                n0=growth["n0"], r0=growth["r0"], g_n=growth["g_n"], g_r=growth["g_r"], T=growth["T"]
            ),
            events=tuple(
                PerturbationEvent(event["t_star"], event["target"], event["value"])
                for event in growth["perturb"]
            ),
            model=ModelParams(c_cross=model["c_cross"], alpha=model["alpha"], beta=model["beta"]),
            analysis=data["analysis"],
            seeds=tuple(run["seeds"]),
            workers=run["workers"],
            data=data,
        )
        # duplicate (t_star, target) events surface here
        scenario.schedule
    except ConfigError as exc:
        raise ConfigError(f"growth: {exc}") from exc
    return scenario


def _read_parser(path):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read scenario ({exc.strerror})") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc.message}") from exc
    return parser


def load_scenario(path=None):
    """Read and validate a scenario file; the bundled default when `path` is None."""
    path = Path(path or settings.CITENET["DEFAULT_SCENARIO"])
    parser = _read_parser(path)
    scenario = scenario_from_data(_raw_sections(parser))
    if not parser.has_option("run", "name"):
        scenario = replace(scenario, name=path.stem.replace(".", "-"))
    logger.debug("Loaded scenario %s from %s", scenario.name, path)
    return scenario


def parse_seeds(value):
    """'7' or '1,2,3' as a tuple of non-negative ints."""
    try:
        seeds = tuple(int(item) for item in _split_list(value))
    except ValueError:
        raise ConfigError(f"run.seeds: '{value}' is not a comma-separated list of integers")
    if not seeds or any(seed < 0 for seed in seeds):
        raise ConfigError("run.seeds: seeds must be non-negative integers")
    return seeds


@dataclass(frozen=True)
class AnalysisConfig:
    analysis: dict

    @property
    def config_hash(self):
        encoded = json.dumps(self.analysis, sort_keys=True, default=str).encode()
        return hashlib.sha256(encoded).hexdigest()


def load_analysis(path=None):
    """The [analysis] block of a scenario file, over the settings defaults.

    Only this block is validated, since networks read from disk are not
    bound by a scenario's growth horizon.
    """
    raw = dict(settings.CITENET["ANALYSIS"])
    if path is not None:
        parser = _read_parser(Path(path))
        raw.update(_raw_sections(parser)["analysis"])
    serializer = AnalysisBlockSerializer(data=raw)
    if not serializer.is_valid():
        raise ConfigError("; ".join(flatten_errors(serializer.errors, "analysis")))
    data = json.loads(json.dumps(serializer.validated_data))
    early = [t for t in data["snapshots"] if t - data["pooling"] + 1 < 0]
    if early:
        raise ConfigError(f"analysis.snapshots: {early} pool citing periods before 0")
    return AnalysisConfig(analysis=data)
