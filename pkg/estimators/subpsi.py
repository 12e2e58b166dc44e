"""
次ψ 置信球序列：半径 = [√d·Σψ(λ_i) + 2√d + √d·log(1/α)] / ((2/3)·Σλ_i)

要求 λ 序列与数据无关。
"""
import math

from core.errors import NoEstimateError
from core.state import AccumulatorMode, StreamState

from .base import ConfidenceSphereSequence, EstimatorConfig


def _subpsi_radius(sum_lambda, quad_sum, d, alpha):
    root_d = math.sqrt(d)
    return (root_d * quad_sum + 2.0 * root_d + root_d * math.log(1.0 / alpha)) / (2.0 / 3.0 * sum_lambda)


def subpsi_radius(state: StreamState, cfg: EstimatorConfig) -> float:
    if state.t == 0:
        raise NoEstimateError()
    return _subpsi_radius(state.sum_lambda, state.quad_sum, cfg.d, cfg.alpha)


class SubPsiCSS(ConfidenceSphereSequence):
    mode = AccumulatorMode.SUB_PSI

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        return _subpsi_radius(sum_lambda, quad_sum, self.d, self.alpha)
