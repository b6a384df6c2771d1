import math

import numpy as np
from django.test import SimpleTestCase

from citenet.core.exceptions import ConfigError, InsufficientDataError, PeriodOutOfRangeError
from citenet.core.growth_schedule import (
    GrowthParams,
    GrowthSchedule,
    PerturbationEvent,
    Target,
    fit_growth_rate,
    round_half_up,
)


class GrowthScheduleTests(SimpleTestCase):
    def setUp(self):
        self.schedule = GrowthSchedule(GrowthParams())

    def test_baseline_sizes(self):
        self.assertEqual(self.schedule.cohort_size(0), 10)
        self.assertEqual(self.schedule.cohort_size(150), 1412)
        self.assertEqual(self.schedule.ref_target(0), 1)
        self.assertEqual(self.schedule.ref_target(150), 15)

    def test_supply_target(self):
        self.assertEqual(self.schedule.reference_supply_target(0), 0)
        self.assertEqual(self.schedule.reference_supply_target(150), 1412 * 15)

    def test_total_publications_near_reference_scale(self):
        total = self.schedule.total_publications()
        self.assertEqual(total, int(self.schedule.cohort_sizes().sum()))
        self.assertLess(abs(total - 41703) / 41703, 0.05)

    def test_consecutive_ratio_follows_rate(self):
        sizes = self.schedule.cohort_sizes()
        for t in range(self.schedule.T):
            self.assertLessEqual(abs(sizes[t + 1] - math.exp(0.033) * sizes[t]), 2)

    def test_period_out_of_range(self):
        with self.assertRaises(PeriodOutOfRangeError):
            self.schedule.cohort_size(-1)
        with self.assertRaises(PeriodOutOfRangeError):
            self.schedule.ref_target(151)

    def test_growth_freeze_holds_size(self):
        frozen = GrowthSchedule(GrowthParams(), (PerturbationEvent(100, Target.G_N, 0.0),))
        self.assertEqual(frozen.cohort_size(120), frozen.cohort_size(100))
        self.assertEqual(frozen.cohort_size(150), frozen.cohort_size(100))
        self.assertEqual(frozen.cohort_size(99), self.schedule.cohort_size(99))

    def test_rate_jump_is_continuous(self):
        params = GrowthParams(g_r=0.013, T=200)
        plain = GrowthSchedule(params)
        jumped = GrowthSchedule(params, (PerturbationEvent(165, "g_r", 0.019),))
        self.assertEqual(jumped.ref_target(165), plain.ref_target(165))
        self.assertGreaterEqual(jumped.ref_target(200), plain.ref_target(200))

    def test_beta_value_switches_at_t_star(self):
        schedule = GrowthSchedule(GrowthParams(), (PerturbationEvent(100, "beta", 0.4),))
        self.assertEqual(schedule.value_at(Target.BETA, 99, 0.2), 0.2)
        self.assertEqual(schedule.value_at(Target.BETA, 100, 0.2), 0.4)
        self.assertEqual(schedule.value_at(Target.BETA, 150, 0.2), 0.4)

    def test_events_are_sorted(self):
        schedule = GrowthSchedule(
            GrowthParams(),
            (PerturbationEvent(120, "g_n", 0.0), PerturbationEvent(50, "beta", 0.3)),
        )
        self.assertEqual([e.t_star for e in schedule.events], [50, 120])

    def test_duplicate_events_rejected(self):
        with self.assertRaises(ConfigError):
            GrowthSchedule(
                GrowthParams(),
                (PerturbationEvent(100, "g_n", 0.0), PerturbationEvent(100, "g_n", 0.01)),
            )

    def test_event_outside_horizon_rejected(self):
        with self.assertRaises(ConfigError):
            GrowthSchedule(GrowthParams(T=50), (PerturbationEvent(60, "g_n", 0.0),))

    def test_invalid_beta_event(self):
        with self.assertRaises(ConfigError):
            PerturbationEvent(10, "beta", 1.0)

    def test_round_half_up(self):
        self.assertEqual(round_half_up(2.5), 3)
        self.assertEqual(round_half_up(3.5), 4)
        self.assertEqual(round_half_up(1.49), 1)


class FitGrowthRateTests(SimpleTestCase):
    def test_noiseless_exponential(self):
        fit = fit_growth_rate((t, 5 * math.exp(0.05 * t)) for t in range(21))
        self.assertAlmostEqual(fit.rate, 0.05, places=12)
        self.assertAlmostEqual(fit.prefactor, 5.0, places=9)
        self.assertAlmostEqual(fit.doubling_time, math.log(2) / 0.05, places=6)
        self.assertEqual(fit.n_points, 21)

    def test_constant_series(self):
        fit = fit_growth_rate((t, 3.0) for t in range(10))
        self.assertAlmostEqual(fit.rate, 0.0, places=12)
        self.assertEqual(fit.doubling_time, math.inf)

    def test_noisy_series_within_sampling_error(self):
        rng = np.random.default_rng(11)
        t = np.arange(41)
        values = np.exp(0.056 * t) * (1 + rng.normal(0, 0.01, t.size))
        fit = fit_growth_rate(zip(t.tolist(), values.tolist()))
        self.assertLess(abs(fit.rate - 0.056), 4 * fit.stderr)

    def test_non_positive_points_excluded(self):
        series = [(0, 1.0), (1, 0.0), (2, math.e**2), (3, -1.0), (4, math.e**4), (5, math.e**5)]
        fit = fit_growth_rate(series)
        self.assertEqual(fit.n_excluded, 2)
        self.assertAlmostEqual(fit.rate, 1.0, places=10)

    def test_too_few_points(self):
        with self.assertRaises(InsufficientDataError):
            fit_growth_rate([(0, 1.0), (1, 0.0), (2, 2.0)])

    def test_identical_times(self):
        with self.assertRaises(InsufficientDataError):
            fit_growth_rate([(1, 1.0), (1, 2.0), (1, 3.0)])
