"""
baselines 模块测试：几何中位数、MoM 估计与逐时刻联合界
"""
import math

import numpy as np
import pytest

from baselines import (
    MoMBaseline, MoMConfig, block_count, geometric_median, mom_estimate, mom_union_radius, per_time_budget,
)
from core import ConfigError, NoEstimateError, ObservationError
from estimators import EstimatorConfig, Method


def total_distance(points, y):
    return float(np.linalg.norm(points - y[None, :], axis=1).sum())


class TestGeometricMedian:
    """Weiszfeld 迭代"""

    def test_identical_points(self):
        points = np.tile([1.5, -2.0], (6, 1))
        np.testing.assert_allclose(geometric_median(points), [1.5, -2.0])

    def test_two_points_give_midpoint(self):
        points = np.array([[0.0, 0.0], [2.0, 2.0]])
        np.testing.assert_allclose(geometric_median(points), [1.0, 1.0])

    def test_majority_at_data_point(self):
        points = np.array([[0.0, 0.0]] * 4 + [[50.0, 50.0]])
        np.testing.assert_allclose(geometric_median(points), [0.0, 0.0], atol=1e-6)

    def test_minimizes_total_distance(self, rng):
        points = rng.normal(size=(15, 3))
        y = geometric_median(points)
        best = total_distance(points, y)
        for _ in range(50):
            probe = y + rng.normal(scale=1e-3, size=3)
            assert best <= total_distance(points, probe) + 1e-9


class TestMoMEstimate:
    """分块均值的几何中位数"""

    def test_single_block_is_mean(self, rng):
        X = rng.normal(size=(40, 3))
        np.testing.assert_allclose(mom_estimate(X, 1), X.mean(axis=0))

    def test_identical_samples(self):
        X = np.tile([0.25, 4.0], (12, 1))
        np.testing.assert_allclose(mom_estimate(X, 4), [0.25, 4.0])

    def test_resists_one_outlier(self):
        X = np.array([[0.0, 0.0]] * 9 + [[100.0, 100.0]])
        estimate = mom_estimate(X, 5)
        assert np.linalg.norm(estimate) < 1.0
        assert np.linalg.norm(X.mean(axis=0)) > 10.0

    def test_translation_equivariance(self, rng):
        X = rng.standard_t(3, size=(60, 2))
        shift = np.array([7.0, -3.0])
        np.testing.assert_allclose(mom_estimate(X + shift, 6), mom_estimate(X, 6) + shift, atol=1e-5)

    def test_invalid_arguments(self):
        with pytest.raises(ObservationError):
            mom_estimate(np.empty((0, 2)), 1)
        with pytest.raises(ConfigError):
            mom_estimate(np.zeros((3, 2)), 0)
        with pytest.raises(ConfigError):
            mom_estimate(np.zeros((3, 2)), 4)


class TestUnionBound:
    """α_t = α/(t + t²) 与半径"""

    def test_budget_example(self):
        assert per_time_budget(1, 0.05) == pytest.approx(0.025)

    def test_budget_telescopes(self):
        T = 10_000
        total = float(np.sum(per_time_budget(np.arange(1, T + 1), 0.1)))
        assert total == pytest.approx(0.1 * (1.0 - 1.0 / (T + 1)), rel=1e-12)

    def test_block_count(self):
        cfg = MoMConfig(alpha=0.05, trace_sigma=1.0)
        assert block_count(1, cfg) == 1
        assert block_count(5, cfg) == 5
        expected = math.ceil(8.0 * math.log(1001000 / 0.05))
        assert block_count(1000, cfg) == expected

    def test_radius_formula(self):
        cfg = MoMConfig(alpha=0.05, trace_sigma=2.0)
        expected = 2.0 * math.sqrt(2.0) * math.sqrt(2.0 * (1.0 + 2.0 * math.log(40.0)))
        assert mom_union_radius(1, cfg) == pytest.approx(expected)
        radii = mom_union_radius(np.array([10, 100, 1000]), cfg)
        assert np.all(np.diff(radii) < 0)

    def test_radius_needs_time(self):
        with pytest.raises(NoEstimateError):
            mom_union_radius(0, MoMConfig(alpha=0.05, trace_sigma=1.0))

    def test_config_collects_problems(self):
        with pytest.raises(ConfigError) as exc:
            MoMConfig(alpha=0.0, trace_sigma=-1.0)
        assert set(exc.value.fields) == {"alpha", "trace_sigma"}


class TestMoMBaseline:
    """流式 MoM 基线"""

    def make(self, **kwargs):
        cfg = EstimatorConfig(method=Method.MOM, d=2, alpha=0.1, trace_sigma=2.0, **kwargs)
        return MoMBaseline.from_estimator_config(cfg)

    def test_update_many_radii(self, rng):
        baseline = self.make()
        baseline.update_many(rng.normal(size=(10, 2)))
        trajectory = baseline.update_many(rng.normal(size=(30, 2)))
        np.testing.assert_array_equal(trajectory.t, np.arange(11, 41))
        np.testing.assert_allclose(trajectory.radii, mom_union_radius(np.arange(11, 41), baseline.cfg))
        assert trajectory.centers is None

    def test_region_matches_batch_estimate(self, rng):
        baseline = self.make()
        X = rng.normal(size=(50, 2))
        baseline.update_many(X)
        region = baseline.region()
        np.testing.assert_allclose(region.center, mom_estimate(X, block_count(50, baseline.cfg)))
        assert region.radius == pytest.approx(mom_union_radius(50, baseline.cfg))

    def test_single_update(self):
        region = self.make().update([0.4, -0.2])
        np.testing.assert_allclose(region.center, [0.4, -0.2])

    def test_without_samples(self, rng):
        cfg = EstimatorConfig(method=Method.MOM, d=2, alpha=0.1, trace_sigma=2.0)
        baseline = MoMBaseline.from_estimator_config(cfg, retain_samples=False)
        baseline.update_many(rng.normal(size=(5, 2)))
        assert baseline.radius() > 0
        with pytest.raises(NoEstimateError):
            baseline.center()

    def test_empty_and_reset(self, rng):
        baseline = self.make(name="mom-2")
        assert baseline.label == "mom-2"
        with pytest.raises(NoEstimateError):
            baseline.radius()
        baseline.update_many(rng.normal(size=(5, 2)))
        baseline.reset()
        assert baseline.t == 0

    def test_requires_trace(self):
        cfg = EstimatorConfig(method=Method.MOM, d=2, alpha=0.1)
        with pytest.raises(ConfigError, match="trace_sigma"):
            MoMBaseline.from_estimator_config(cfg)
