"""
core 模块测试：流式累加状态、加权均值、白化与置信区域
"""
import math

import numpy as np
import pytest

from core import (
    AccumulatorMode, ConfidenceRegion, ConfigError, NoEstimateError, ObservationError, StreamState,
    WeightError, inverse_sqrt, project_to_ball, unwhiten, update, weighted_mean, whiten,
)
from core.state import CompensatedSum


PSI_E_HALF = -0.5 - math.log(0.5)


class TestStreamUpdate:
    """逐个观测的累加规则"""

    def test_first_update_uses_zero_mean(self):
        state = StreamState(2)
        update(state, [1.0, 0.0], 0.5)

        assert state.t == 1
        assert state.sum_lambda == pytest.approx(0.5)
        np.testing.assert_allclose(state.weighted_sum, [0.5, 0.0])
        assert state.quad_sum == pytest.approx(PSI_E_HALF, rel=1e-12)

    def test_repeated_observation_adds_no_quadratic_term(self):
        state = StreamState(2)
        update(state, [1.0, 0.0], 0.5)
        update(state, [1.0, 0.0], 0.5)

        assert state.quad_sum == pytest.approx(PSI_E_HALF, rel=1e-12)
        assert state.sum_lambda_sq == pytest.approx(0.5)

    def test_var_sum_follows_previous_mean(self):
        state = StreamState(2)
        for x in ([1.0, 0.0], [0.0, 1.0], [1.0, 1.0]):
            update(state, x, 0.2)

        assert state.var_sum == pytest.approx(3.5, rel=1e-12)
        assert state.sigma2_hat == pytest.approx(3.5 / 3)

    def test_sigma2_hat_convention_at_zero(self):
        assert StreamState(3).sigma2_hat == 1.0
        np.testing.assert_array_equal(StreamState(3).running_mean, np.zeros(3))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ObservationError, match="dimension"):
            update(StreamState(2), [1.0, 2.0, 3.0], 0.5)

    def test_rejects_non_finite(self):
        with pytest.raises(ObservationError):
            update(StreamState(2), [np.nan, 0.0], 0.5)

    def test_rejects_lambda_outside_cap(self):
        state = StreamState(2, cap=0.5)
        with pytest.raises(WeightError):
            update(state, [0.0, 0.0], 0.0)
        with pytest.raises(WeightError):
            update(state, [0.0, 0.0], 0.6)
        assert state.t == 0

    def test_rejects_observation_outside_bound(self):
        state = StreamState(2, bound=1.0)
        with pytest.raises(ObservationError, match="B=1.0"):
            update(state, [1.0, 1.0], 0.5)

    def test_mode_mismatch(self):
        with pytest.raises(ConfigError):
            update(StreamState(2), [0.0, 0.0], 0.5, mode=AccumulatorMode.CATONI)

    def test_catoni_mode_accumulates_thresholded_points(self):
        state = StreamState(2, mode=AccumulatorMode.CATONI)
        update(state, [3.0, 4.0], 1.0)
        np.testing.assert_allclose(state.weighted_sum, [0.6, 0.8])
        np.testing.assert_allclose(state.running_sum, [3.0, 4.0])

    def test_semi_empirical_mode(self):
        state = StreamState(2, mode=AccumulatorMode.SEMI_EMPIRICAL, moment_scale=2.0)
        update(state, [1.0, 1.0], 0.1)
        assert state.quad_sum == pytest.approx(0.01 * (2.0 + 2.0))


class TestWeightedMean:
    """加权均值"""

    def test_single_point(self):
        state = update(StreamState(2), [2.0, 4.0], 0.3)
        np.testing.assert_allclose(weighted_mean(state), [2.0, 4.0])

    def test_equal_weights(self):
        state = StreamState(2)
        update(state, [1.0, 0.0], 0.5)
        update(state, [0.0, 1.0], 0.5)
        np.testing.assert_allclose(weighted_mean(state), [0.5, 0.5])

    def test_unequal_weights(self):
        state = StreamState(2)
        update(state, [1.0, 0.0], 0.2)
        update(state, [0.0, 1.0], 0.8)
        np.testing.assert_allclose(weighted_mean(state), [0.2, 0.8])

    def test_copies_of_one_point(self, rng):
        state = StreamState(3)
        x = np.array([0.3, -1.2, 2.0])
        for lam in rng.uniform(0.01, 0.9, size=50):
            update(state, x, lam)
        np.testing.assert_allclose(weighted_mean(state), x, rtol=1e-12)

    def test_no_estimate_before_first_observation(self):
        with pytest.raises(NoEstimateError):
            weighted_mean(StreamState(2))


class TestBatchAdvance:
    """向量化批量更新与逐个更新一致"""

    @pytest.mark.parametrize("mode", [AccumulatorMode.EB, AccumulatorMode.CATONI,
                                      AccumulatorMode.SEMI_EMPIRICAL])
    def test_advance_matches_updates(self, rng, mode):
        X = rng.normal(size=(400, 3))
        lam = rng.uniform(0.05, 0.6, size=400)
        one = StreamState(3, mode=mode, moment_scale=1.5)
        for x, l in zip(X, lam):
            one.update(x, l)

        many = StreamState(3, mode=mode, moment_scale=1.5)
        many.advance(X[:150], lam[:150])
        trace = many.advance(X[150:], lam[150:])

        assert many.t == one.t == trace.t[-1]
        for name in ("sum_lambda", "sum_lambda_sq", "quad_sum", "var_sum"):
            assert getattr(many, name) == pytest.approx(getattr(one, name), rel=1e-10)
        np.testing.assert_allclose(many.weighted_sum, one.weighted_sum, rtol=1e-10)
        np.testing.assert_allclose(trace.weighted_mean()[-1], weighted_mean(one), rtol=1e-10)

    def test_deviations_do_not_mutate(self, rng):
        state = StreamState(2)
        state.advance(rng.normal(size=(10, 2)), np.full(10, 0.3))
        before = state.snapshot()
        z2, sigma2_prev = state.deviations(rng.normal(size=(5, 2)))

        assert state.t == before.t
        assert state.var_sum == before.var_sum
        assert sigma2_prev[0] == pytest.approx(before.sigma2_hat)
        assert z2.shape == (5,)

    def test_var_sum_matches_two_pass(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 30))
            X = rng.normal(size=(n, 2)) * rng.uniform(0.1, 10.0)
            state = StreamState(2)
            state.advance(X, np.full(n, 0.1))

            means = np.vstack([np.zeros(2), np.cumsum(X, axis=0)[:-1] / np.arange(1, n)[:, None]])
            oracle = np.sum((X - means) ** 2) / n
            assert state.var_sum / n == pytest.approx(oracle, rel=1e-10)

    def test_replay_determinism(self, rng):
        X = rng.normal(size=(200, 4))
        lam = rng.uniform(0.01, 0.5, size=200)
        a, b = StreamState(4), StreamState(4)
        for x, l in zip(X, lam):
            a.update(x, l)
            b.update(x, l)
        assert a.quad_sum == b.quad_sum
        assert a.var_sum == b.var_sum
        np.testing.assert_array_equal(a.weighted_sum, b.weighted_sum)

    def test_snapshot_is_independent(self):
        state = update(StreamState(2), [1.0, 0.0], 0.5)
        snap = state.snapshot()
        update(state, [0.0, 1.0], 0.5)
        assert snap.t == 1
        assert state.t == 2


class TestCompensatedSum:
    def test_long_stream_does_not_drift(self):
        total = CompensatedSum()
        for _ in range(20_000):
            total.add(0.1)
        assert total.value == pytest.approx(2_000.0, rel=1e-15)


class TestWhitening:
    """白化矩阵与变换"""

    def test_identity(self):
        W = inverse_sqrt(np.eye(3))
        x = np.array([1.0, -2.0, 0.5])
        np.testing.assert_allclose(whiten(x, W), x)

    def test_diagonal(self):
        W = inverse_sqrt(np.diag([4.0, 1.0]))
        np.testing.assert_allclose(whiten([2.0, 3.0], W), [1.0, 3.0])
        np.testing.assert_allclose(whiten([0.0, 0.0], W), [0.0, 0.0])

    def test_diagonal_norm(self, rng):
        diag = rng.uniform(0.5, 4.0, size=5)
        W = inverse_sqrt(np.diag(diag))
        x = rng.normal(size=5)
        assert np.sum(whiten(x, W) ** 2) == pytest.approx(np.sum(x ** 2 / diag), rel=1e-12)

    def test_unwhiten_inverts_batch(self, rng):
        A = rng.normal(size=(3, 3))
        W = inverse_sqrt(A @ A.T + np.eye(3))
        X = rng.normal(size=(7, 3))
        np.testing.assert_allclose(unwhiten(whiten(X, W), W), X, atol=1e-12)

    def test_rejects_non_positive_definite(self):
        with pytest.raises(ConfigError, match="positive definite"):
            inverse_sqrt(np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestProjection:
    def test_zero_stays_zero(self):
        np.testing.assert_array_equal(project_to_ball(np.zeros(3), 0.5), np.zeros(3))

    def test_rows_are_clipped_independently(self):
        X = np.array([[3.0, 4.0], [0.3, 0.4]])
        out = project_to_ball(X, np.array([1.0, 1.0]))
        np.testing.assert_allclose(out, [[0.6, 0.8], [0.3, 0.4]])


class TestConfidenceRegion:
    def test_sphere_contains(self):
        region = ConfidenceRegion(center=np.zeros(2), radius=1.0, t=5, alpha=0.1)
        assert region.shape == "sphere"
        assert region.contains([0.6, 0.8])
        assert not region.contains([1.0, 0.1])

    def test_ellipsoid_distance(self):
        W = inverse_sqrt(np.diag([4.0, 1.0]))
        region = ConfidenceRegion(center=np.zeros(2), radius=1.0, t=1, alpha=0.1, whitening=W)
        assert region.shape == "ellipsoid"
        assert region.distance([2.0, 0.0]) == pytest.approx(1.0)

    def test_rejects_negative_radius(self):
        with pytest.raises(ConfigError):
            ConfidenceRegion(center=np.zeros(2), radius=-1.0, t=1, alpha=0.1)

    def test_infinite_radius_allowed(self):
        region = ConfidenceRegion(center=np.zeros(2), radius=math.inf, t=1, alpha=0.1)
        assert region.contains([1e9, 1e9])