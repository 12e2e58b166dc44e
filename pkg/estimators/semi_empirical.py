"""
半经验重尾置信球序列（iid 数据，已知 Tr(Σ)）

半径 = quad_sum/(6Σλ) + Tr(Σ)·Σλ²/(3Σλ) + (√d/2 + log(1/α))/Σλ，
quad_sum = Σλ_i²(‖X_i‖² + v^{2/p})
"""
import math

from core.errors import NoEstimateError
from core.state import AccumulatorMode, StreamState

from .base import ConfidenceSphereSequence, EstimatorConfig


def _semi_radius(sum_lambda, sum_lambda_sq, quad_sum, trace_sigma, d, alpha):
    return (
        quad_sum / (6.0 * sum_lambda)
        + trace_sigma * sum_lambda_sq / (3.0 * sum_lambda)
        + (math.sqrt(d) / 2.0 + math.log(1.0 / alpha)) / sum_lambda
    )


def semi_empirical_radius(state: StreamState, cfg: EstimatorConfig) -> float:
    if state.t == 0:
        raise NoEstimateError()
    return _semi_radius(state.sum_lambda, state.sum_lambda_sq, state.quad_sum,
                        cfg.trace_sigma, cfg.d, cfg.alpha)


class SemiEmpiricalCSS(ConfidenceSphereSequence):
    mode = AccumulatorMode.SEMI_EMPIRICAL

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        return _semi_radius(sum_lambda, sum_lambda_sq, quad_sum, self.cfg.trace_sigma, self.d, self.alpha)
