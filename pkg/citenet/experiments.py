"""
Perturbation experiments run against an unperturbed control.

Both arms of an experiment share the seed, and the simulator draws each
period from its own (seed, period) stream, so the arms coincide up to the
perturbation period and every seed gives one paired comparison.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from django.conf import settings
from scipy import stats

from . import exports
from .config import scenario_from_data
from .core import netmetrics, refage
from .core.exceptions import ConfigError
from .core.simulator import period_supply, simulate
from .runner import fan_out, versions

logger = logging.getLogger(__name__)

BASE = {
    "growth": {"n0": 10, "r0": 1.0, "g_n": 0.033, "g_r": 0.018},
    "model": {"c_cross": 6.0, "alpha": 5.0, "beta": 0.2},
}


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    growth: dict = field(default_factory=dict)
    model: dict = field(default_factory=dict)
    perturb: tuple = ()
    modify: dict = field(default_factory=dict)

    def arms(self, T, t_star, analysis=None):
        """(control, perturbed) Scenarios for this experiment."""
        control = {
            "growth": {**BASE["growth"], **self.growth, "T": T},
            "model": {**BASE["model"], **self.model},
            "analysis": dict(analysis or {}),
        }
        perturbed = {
            "growth": {
                **control["growth"],
                "perturb": [
                    {"t_star": t_star, "target": target, "value": value}
                    for target, value in self.perturb
                ],
            },
            "model": {**control["model"], **self.modify},
            "analysis": control["analysis"],
        }
        return (
            scenario_from_data(control, name=f"{self.name}-control"),
            scenario_from_data(perturbed, name=f"{self.name}-perturbed"),
        )


EXPERIMENTS = {
    experiment.name: experiment
    for experiment in (
        Experiment(
            name="beta-jump",
            description="beta 0.2 -> 0.4 at t*",
            perturb=(("beta", 0.4),),
        ),
        Experiment(
            name="gr-jump",
            description="g_r 0.013 -> 0.019 at t*",
            growth={"g_r": 0.013},
            perturb=(("g_r", 0.019),),
        ),
        Experiment(
            name="gn-freeze",
            description="g_n -> 0 at t*",
            perturb=(("g_n", 0.0),),
        ),
        Experiment(
            name="no-redirect",
            description="beta = 0 throughout",
            modify={"beta": 0.0},
        ),
    )
}


def get_experiment(name):
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise ConfigError(
            f"unknown scenario '{name}' (choose from {', '.join(EXPERIMENTS)})"
        ) from None


def _window_mean(rows, attribute, start, stop):
    values = [getattr(row, attribute) for row in rows if start <= row.cohort < stop]
    values = [value for value in values if value is not None]
    return float(np.mean(values)) if values else None


def _mean_citations(network, window, start, stop):
    counts = netmetrics.window_counts(network, window)
    inside = (network.cohort >= start) & (network.cohort < stop)
    return float(counts[inside].mean()) if inside.any() else None


def run_arm(args):
    """Simulate one arm for one seed and write its aligned tables."""
    scenario, seed, out_dir, t_star = args
    started = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    analysis = scenario.analysis

    network = simulate(scenario.schedule, scenario.params_for(seed))
    rows = netmetrics.metrics_table(
        network,
        window=analysis["window"],
        percentiles=analysis["percentiles"],
        thresholds=analysis["thresholds"],
        top_q=analysis["top_q"],
        tau=analysis.get("tau"),
    )
    exports.write_csv(
        exports.metrics_frame(rows, analysis["percentiles"], analysis["thresholds"], analysis["top_q"]),
        out_dir / "metrics.csv",
    )
    distributions = refage.snapshots(network, analysis["snapshots"], analysis["pooling"])
    exports.write_csv(exports.refage_frame(distributions), out_dir / "refage.csv")
    crossings = refage.crossing_report(distributions, z=analysis.get("crossing_z", 0.0))
    exports.write_csv(
        exports.intervals_frame(
            refage.interval_table(distributions, crossings, analysis["deltas"]), analysis["deltas"]
        ),
        out_dir / "intervals.csv",
    )
    exports.write_csv(
        exports.memory_frame(refage.fraction_within_series(network, analysis["deltas"])),
        out_dir / "memory.csv",
    )
    exports.write_csv(exports.supply_frame(period_supply(network)), out_dir / "supply.csv")

    # pre- and post-t* cohort ranges of equal length
    last = network.last_period - analysis["window"] + 1
    span = last - t_star
    summary = {
        "seed": seed,
        "n_nodes": network.n_nodes,
        "n_links": network.n_links,
        "gini_pre": _window_mean(rows, "gini", t_star - span, t_star),
        "gini_post": _window_mean(rows, "gini", t_star, last),
        "citations_pre": _mean_citations(network, analysis["window"], t_star - span, t_star),
        "citations_post": _mean_citations(network, analysis["window"], t_star, last),
        "wall_time": time.perf_counter() - started,
        "output_dir": str(out_dir),
    }
    logger.info("%s seed %d: G post=%.4f", scenario.name, seed, summary["gini_post"] or 0)
    return summary


@dataclass
class SignTest:
    higher: int
    lower: int
    ties: int
    p_value: float

    def as_dict(self):
        return {"higher": self.higher, "lower": self.lower, "ties": self.ties, "p_value": self.p_value}


def sign_test(control, perturbed):
    """Paired sign test of perturbed minus control values."""
    diffs = [p - c for c, p in zip(control, perturbed) if c is not None and p is not None]
    higher = sum(d > 0 for d in diffs)
    lower = sum(d < 0 for d in diffs)
    n = higher + lower
    p_value = float(stats.binomtest(higher, n, 0.5).pvalue) if n else 1.0
    return SignTest(higher=higher, lower=lower, ties=len(diffs) - n, p_value=p_value)


def default_analysis(T, t_star, pooling=3):
    """Decade snapshots from shortly before t* to T."""
    return {
        "snapshots": [t for t in range(t_star - 15, T + 1, 10) if t >= pooling],
        "pooling": pooling,
    }


def run_experiment(name, seeds, out_root, workers=1, T=None, t_star=None, analysis=None):
    """Both arms over all seeds, per-arm tables and a comparison.json."""
    experiment = get_experiment(name)
    T = T or settings.CITENET["SCENARIO_PERIODS"]
    t_star = t_star or settings.CITENET["SCENARIO_T_STAR"]
    if analysis is None:
        analysis = default_analysis(T, t_star)
    control, perturbed = experiment.arms(T, t_star, analysis)
    root = Path(out_root) / experiment.name

    jobs = [
        (arm, seed, root / label / f"seed-{seed}", t_star)
        for label, arm in (("control", control), ("perturbed", perturbed))
        for seed in seeds
    ]
    results = fan_out(run_arm, jobs, workers)
    by_arm = {
        "control": results[: len(seeds)],
        "perturbed": results[len(seeds) :],
    }

    comparison = {
        "experiment": experiment.name,
        "description": experiment.description,
        "T": T,
        "t_star": t_star,
        "seeds": list(seeds),
        "config_hash": {"control": control.config_hash, "perturbed": perturbed.config_hash},
        "versions": versions(),
        "arms": by_arm,
        "sign_test": {
            key: sign_test(
                [row[key] for row in by_arm["control"]],
                [row[key] for row in by_arm["perturbed"]],
            ).as_dict()
            for key in ("gini_post", "citations_post")
        },
    }
    exports.write_json(comparison, root / "comparison.json")
    return comparison
