import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from citenet.config import load_analysis, load_scenario, parse_seeds, scenario_from_data
from citenet.core.exceptions import ConfigError
from citenet.core.growth_schedule import Target

SMALL = """
[growth]
T = 30
perturb =
    20, beta, 0.4
    25, g_n, 0

[model]
beta = 0.25  # inline comment

[analysis]
snapshots = 10, 20, 30
deltas = 3, 8

[run]
seeds = 1, 2
"""


class ScenarioFileTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text, name="small.scenario"):
        path = self.dir / name
        path.write_text(text)
        return path

    def test_default_scenario(self):
        scenario = load_scenario()
        self.assertEqual(scenario.name, "default")
        self.assertEqual(scenario.growth.T, 150)
        self.assertEqual(scenario.model.c_cross, 7.0)
        self.assertEqual(scenario.seeds, tuple(range(10)))
        self.assertEqual(scenario.analysis["snapshots"], [100, 110, 120, 130, 140, 150])
        self.assertIsNone(scenario.analysis["tau"])
        self.assertEqual(scenario.analysis["crossing_z"], 1.0)

    def test_small_file(self):
        scenario = load_scenario(self.write(SMALL))
        self.assertEqual(scenario.name, "small")
        self.assertEqual(scenario.model.beta, 0.25)
        self.assertEqual(scenario.seeds, (1, 2))
        self.assertEqual(
            [(e.t_star, e.target, e.new_value) for e in scenario.events],
            [(20, Target.BETA, 0.4), (25, Target.G_N, 0.0)],
        )
        # unspecified analysis keys come from settings
        self.assertEqual(scenario.analysis["window"], 5)
        self.assertEqual(scenario.params_for(7).seed, 7)

    def test_beta_of_one_rejected(self):
        with self.assertRaises(ConfigError) as caught:
            load_scenario(self.write("[model]\nbeta = 1\n"))
        self.assertIn("model.beta", str(caught.exception))

    def test_negative_crossing_threshold(self):
        with self.assertRaises(ConfigError) as caught:
            load_scenario(self.write(SMALL.replace("[analysis]", "[analysis]\ncrossing_z = -1")))
        self.assertIn("analysis.crossing_z", str(caught.exception))

    def test_unknown_section(self):
        with self.assertRaises(ConfigError) as caught:
            load_scenario(self.write("[plots]\nx = 1\n"))
        self.assertIn("plots", str(caught.exception))

    def test_perturbation_beyond_horizon(self):
        with self.assertRaises(ConfigError) as caught:
            load_scenario(self.write("[growth]\nT = 10\nperturb = 20, g_n, 0\n"))
        self.assertIn("growth.perturb", str(caught.exception))

    def test_snapshot_beyond_horizon(self):
        with self.assertRaises(ConfigError) as caught:
            load_scenario(self.write("[growth]\nT = 10\n"))
        self.assertIn("analysis.snapshots", str(caught.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_scenario(self.dir / "absent.scenario")

    def test_bundled_perturbation_control(self):
        scenario = load_scenario(Path(__file__).resolve().parent.parent / "scenarios" / "perturbation.scenario")
        self.assertEqual(scenario.name, "control")
        self.assertEqual(scenario.model.c_cross, 6.0)
        self.assertEqual(scenario.growth.T, 200)

    def test_config_hash(self):
        base = load_scenario(self.write(SMALL))
        self.assertEqual(base.config_hash, base.with_seeds([5]).config_hash)
        changed = load_scenario(self.write(SMALL.replace("beta = 0.25", "beta = 0.3")))
        self.assertNotEqual(base.config_hash, changed.config_hash)

    def test_analysis_only(self):
        config = load_analysis(self.write("[growth]\nT = 10\n[analysis]\nsnapshots = 2001, 2002\n"))
        self.assertEqual(config.analysis["snapshots"], [2001, 2002])
        self.assertEqual(load_analysis().analysis["pooling"], 3)


class ScenarioDataTests(SimpleTestCase):
    def test_from_mapping(self):
        scenario = scenario_from_data(
            {"growth": {"T": 20}, "analysis": {"snapshots": [10, 20]}}, name="mapped"
        )
        self.assertEqual(scenario.name, "mapped")
        self.assertEqual(scenario.schedule.cohort_size(0), 10)

    def test_errors_are_collected(self):
        with self.assertRaises(ConfigError) as caught:
            scenario_from_data({"growth": {"T": 0}, "model": {"c_cross": -1}})
        message = str(caught.exception)
        self.assertIn("growth.T", message)
        self.assertIn("model.c_cross", message)

    def test_seeds(self):
        self.assertEqual(parse_seeds("7"), (7,))
        self.assertEqual(parse_seeds("1, 2,3"), (1, 2, 3))
        with self.assertRaises(ConfigError):
            parse_seeds("x")
        with self.assertRaises(ConfigError):
            parse_seeds("-1")
