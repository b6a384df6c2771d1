"""
Simulation and analysis pipelines shared by the management commands.

One run owns one output directory; seeds fan out over a process pool and
each worker writes only its own files.
"""

import logging
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import networkx
import numpy
import pandas
import scipy
from django.db import DatabaseError

from . import __version__, exports
from .core import netmetrics, refage
from .core.exceptions import EmptyInputError
from .core.simulator import period_supply, redirection_share, simulate

logger = logging.getLogger(__name__)


def versions():
    return {
        "citenet": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "pandas": pandas.__version__,
        "networkx": networkx.__version__,
    }


@dataclass
class AnalysisResult:
    rows: list
    distributions: list
    crossings: refage.CrossingReport
    memory: dict
    intervals: list = field(default_factory=list)
    clustering: float = None
    files: list = field(default_factory=list)


def analyze_network(network, analysis, clustering=True):
    """Per-cohort metrics, snapshot distributions, crossings and memory series."""
    rows = netmetrics.metrics_table(
        network,
        window=analysis["window"],
        percentiles=analysis["percentiles"],
        thresholds=analysis["thresholds"],
        top_q=analysis["top_q"],
        tau=analysis.get("tau"),
    )
    distributions = []
    for t in analysis["snapshots"]:
        try:
            distributions.append(
                refage.ref_age_histogram(network, t - analysis["pooling"] + 1, t)
            )
        except EmptyInputError as exc:
            logger.warning("Skipping snapshot %d: %s", t, exc)
    crossings = refage.crossing_report(distributions, z=analysis.get("crossing_z", 0.0))
    memory = (
        refage.fraction_within_series(network, analysis["deltas"], pooling=1)
        if network.n_links and analysis["deltas"]
        else {}
    )
    return AnalysisResult(
        rows=rows,
        distributions=distributions,
        crossings=crossings,
        memory=memory,
        intervals=refage.interval_table(distributions, crossings, analysis["deltas"]),
        clustering=netmetrics.clustering_coefficient(network) if clustering else None,
    )


def write_analysis(result, analysis, out_dir):
    out_dir = Path(out_dir)
    files = [
        exports.write_csv(
            exports.metrics_frame(
                result.rows, analysis["percentiles"], analysis["thresholds"], analysis["top_q"]
            ),
            out_dir / "metrics.csv",
        ),
        exports.write_csv(exports.refage_frame(result.distributions), out_dir / "refage.csv"),
        exports.write_json(result.crossings.as_dict(), out_dir / "crossings.json"),
        exports.write_csv(
            exports.intervals_frame(result.intervals, analysis["deltas"]), out_dir / "intervals.csv"
        ),
    ]
    if result.memory:
        files.append(exports.write_csv(exports.memory_frame(result.memory), out_dir / "memory.csv"))
    result.files.extend(files)
    return files


def _summary(network, result, seed, out_dir, wall_time):
    return {
        "seed": seed,
        "n_nodes": network.n_nodes,
        "n_links": network.n_links,
        "clustering": result.clustering,
        "delta_minus": result.crossings.delta_minus,
        "delta_plus": result.crossings.delta_plus,
        "wall_time": wall_time,
        "output_dir": str(out_dir),
        "files": [Path(path).name for path in result.files],
    }


def write_manifest(out_dir, command, scenario, summary):
    manifest = {
        "command": command,
        "scenario": scenario.name,
        "config_hash": scenario.config_hash,
        "config": scenario.data,
        "versions": versions(),
        **summary,
    }
    return exports.write_json(manifest, Path(out_dir) / "manifest.json")


def run_simulation(scenario, seed, out_root, write_network=True, write_records=False):
    """Simulate one seed of a scenario and write its full output set."""
    started = time.perf_counter()
    out_dir = Path(out_root) / scenario.name / f"seed-{seed}"
    out_dir.mkdir(parents=True, exist_ok=True)

    network = simulate(scenario.schedule, scenario.params_for(seed))
    result = analyze_network(network, scenario.analysis)
    if write_network:
        result.files.extend(
            exports.write_network(network, out_dir / "nodes.csv", out_dir / "edges.csv")
        )
    if write_records:
        result.files.append(exports.write_records(network, out_dir / "records.jsonl"))
    write_analysis(result, scenario.analysis, out_dir)
    result.files.append(
        exports.write_csv(exports.supply_frame(period_supply(network)), out_dir / "supply.csv")
    )

    share = redirection_share(network)
    summary = _summary(network, result, seed, out_dir, time.perf_counter() - started)
    summary["redirection"] = {
        "share": share.share,
        "beta": share.beta,
        "sigma": share.sigma,
    }
    write_manifest(out_dir, "simulate", scenario, summary)
    logger.info(
        "Seed %d: N=%d L=%d clustering=%.4f crossings=(%s, %s) in %.1fs",
        seed,
        network.n_nodes,
        network.n_links,
        result.clustering,
        result.crossings.delta_minus,
        result.crossings.delta_plus,
        summary["wall_time"],
    )
    return summary


def _setup_django():
    # spawned workers start without an app registry
    import django
    from django.apps import apps

    if not apps.ready:
        django.setup()


def _simulate_one(args):
    return run_simulation(*args)


def fan_out(function, jobs, workers):
    """Run `function` over `jobs`, in a process pool when more than one worker is asked for."""
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]
    with ProcessPoolExecutor(
        max_workers=min(workers, len(jobs)), initializer=_setup_django
    ) as pool:
        return list(pool.map(function, jobs))


def run_seeds(scenario, seeds, out_root, workers=1, write_network=True, write_records=False):
    jobs = [(scenario, seed, out_root, write_network, write_records) for seed in seeds]
    return fan_out(_simulate_one, jobs, workers)


def analyze_files(network, analysis, out_dir, label, config_hash=""):
    """Analysis outputs for a network read from disk."""
    started = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = analyze_network(network, analysis)
    write_analysis(result, analysis, out_dir)
    summary = _summary(network, result, None, out_dir, time.perf_counter() - started)
    exports.write_json(
        {
            "command": "analyze",
            "source": label,
            "config_hash": config_hash,
            "analysis": analysis,
            "versions": versions(),
            **summary,
        },
        out_dir / "manifest.json",
    )
    return summary


def record_run(command, scenario_name, config_hash, summary):
    """Index an output set in the database; a missing table only costs a warning."""
    from .models import SimulationRun

    try:
        return SimulationRun.objects.create(
            command=command,
            scenario=scenario_name,
            seed=summary.get("seed"),
            config_hash=config_hash,
            package_version=__version__,
            n_nodes=summary["n_nodes"],
            n_links=summary["n_links"],
            clustering=summary.get("clustering"),
            delta_minus=summary.get("delta_minus"),
            delta_plus=summary.get("delta_plus"),
            wall_time=summary["wall_time"],
            output_dir=summary["output_dir"],
        )
    except DatabaseError as exc:
        logger.warning("Run not recorded (%s); run `manage.py migrate` to enable run records", exc)
        return None


__all__ = [
    "analyze_network",
    "write_analysis",
    "run_simulation",
    "run_seeds",
    "analyze_files",
    "record_run",
    "fan_out",
]
