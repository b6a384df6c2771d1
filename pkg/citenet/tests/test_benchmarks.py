"""
Full-size runs of the bundled scenarios against their calibration
benchmarks. Tagged slow; run with `manage.py test --tag slow`, skip with
`--exclude-tag slow`.
"""

import statistics
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, tag
from scipy import stats

from citenet.config import load_scenario
from citenet.core import netmetrics, refage
from citenet.core.simulator import ModelParams, redirection_share, simulate
from citenet.experiments import run_experiment

SEEDS = range(10)
PERTURBATION = Path(__file__).resolve().parent.parent / "scenarios" / "perturbation.scenario"


def crossings(network, analysis):
    return refage.crossing_report(
        refage.snapshots(network, analysis["snapshots"], analysis["pooling"]),
        z=analysis["crossing_z"],
    )


@tag("slow")
class DefaultScenarioBenchmarks(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.scenario = load_scenario()
        cls.networks = [simulate(cls.scenario.schedule, cls.scenario.params_for(seed)) for seed in SEEDS]
        cls.network = cls.networks[0]
        cls.rows = netmetrics.metrics_table(cls.network, window=5)
        cls.reports = [crossings(network, cls.scenario.analysis) for network in cls.networks]

    def test_size(self):
        for network in self.networks:
            self.assertLess(abs(network.n_nodes - 41703) / 41703, 0.05)
            self.assertLess(abs(network.n_links - 379454) / 379454, 0.12)

    def test_clustering(self):
        value = netmetrics.clustering_coefficient(self.network)
        self.assertGreaterEqual(value, 0.009)
        self.assertLessEqual(value, 0.036)

    def test_memory_crossings(self):
        lowers = [r.delta_minus for r in self.reports if r.delta_minus is not None]
        uppers = [r.delta_plus for r in self.reports if r.delta_plus is not None]
        self.assertGreaterEqual(len(lowers), 8)
        self.assertLessEqual(abs(statistics.mean(lowers) - 8), 2)
        self.assertGreaterEqual(len(uppers), 5)
        self.assertLessEqual(abs(statistics.mean(uppers) - 45), 10)

    def test_lower_crossing_spread(self):
        lowers = [r.delta_minus for r in self.reports if r.delta_minus is not None]
        self.assertLessEqual(statistics.stdev(lowers), 2)

    def test_mid_range_share_grows(self):
        analysis = self.scenario.analysis
        report = self.reports[0]
        self.assertIsNotNone(report.delta_plus)
        rows = refage.interval_table(
            refage.snapshots(self.network, analysis["snapshots"], analysis["pooling"]),
            report,
            analysis["deltas"],
        )
        self.assertGreater(rows[-1].mid, rows[0].mid)

    def test_lifecycle_decay(self):
        life = netmetrics.lifecycle(self.network, 100)
        self.assertTrue(life.decaying)
        # without preferential attachment per-publication citations decay at
        # alpha g_n - g_r; attachment and redirection only slow the decay
        growth = self.scenario.growth
        floor = 1 / (self.scenario.model.alpha * growth.g_n - growth.g_r)
        self.assertGreaterEqual(life.decay_time, floor)
        self.assertLessEqual(life.decay_time, 25)

    def test_inequality_trends(self):
        rows = [row for row in self.rows if 30 <= row.cohort <= 145]
        t = [row.cohort for row in rows]
        gini = stats.spearmanr(t, [row.gini for row in rows])
        self.assertLess(gini.correlation, 0)
        self.assertLess(gini.pvalue, 0.05)
        uncited = stats.spearmanr(t, [row.uncited_fracs[0] for row in rows])
        self.assertLess(uncited.correlation, 0)

    def test_top_share_concentrates_with_age(self):
        for cohort in (80, 100, 120):
            curve = netmetrics.top_share_curve(self.network, cohort, q=0.01)
            trend = stats.spearmanr(curve.t, curve.values)
            self.assertGreater(trend.correlation, 0, cohort)
            self.assertLess(trend.pvalue, 0.05, cohort)


@tag("slow")
class RedirectionCalibrationBenchmarks(SimpleTestCase):
    def check(self, beta):
        scenario = load_scenario()
        params = ModelParams(scenario.model.c_cross, scenario.model.alpha, beta, seed=0)
        share = redirection_share(simulate(scenario.schedule, params))
        self.assertLess(abs(share.share - beta), 3 * share.sigma)

    def test_default_beta(self):
        self.check(0.2)

    def test_doubled_beta(self):
        self.check(0.4)


@tag("slow")
class PerturbationControlBenchmarks(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.scenario = load_scenario(PERTURBATION)
        cls.network = simulate(cls.scenario.schedule, cls.scenario.params_for(0))

    def test_perturbation_control_size(self):
        self.assertEqual(self.network.n_nodes, self.scenario.schedule.total_publications())
        self.assertTrue(np.all(self.network.cited_cohort < self.network.citing_cohort))

    def test_mature_cohort_is_lognormal(self):
        # fifty periods of citations to a cohort of more than a thousand
        counts = netmetrics.citations_through(self.network, 150)
        self.assertGreaterEqual(counts.size, 1000)
        z = netmetrics.z_normalize(counts).z
        self.assertLess(stats.kstest(z, "norm").statistic, 0.08)


@tag("slow")
class PerturbationDirectionBenchmarks(SimpleTestCase):
    def run_pair(self, name):
        with tempfile.TemporaryDirectory() as tmp:
            return run_experiment(name, SEEDS, tmp, workers=settings.CITENET["WORKERS"])

    def test_beta_jump_raises_gini(self):
        comparison = self.run_pair("beta-jump")
        test = comparison["sign_test"]["gini_post"]
        self.assertGreater(test["higher"], test["lower"])
        self.assertLess(test["p_value"], 0.05)

    def test_reference_growth_jump_lowers_gini(self):
        test = self.run_pair("gr-jump")["sign_test"]["gini_post"]
        self.assertGreater(test["lower"], test["higher"])

    def test_growth_freeze(self):
        comparison = self.run_pair("gn-freeze")
        gini = comparison["sign_test"]["gini_post"]
        citations = comparison["sign_test"]["citations_post"]
        self.assertGreater(gini["higher"], gini["lower"])
        self.assertGreater(citations["lower"], citations["higher"])
