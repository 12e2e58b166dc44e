"""
Catoni-Giulini 截断估计：只需要 p 阶矩 E‖X‖^p ≤ v（p ≥ 2）

中心 = Σλ_i·th_i(X_i) / Σλ_i，其中 th_i 把 X_i 投影到半径 1/λ_i 的球上，
半径 = [v^{2/p}·(2e^{2/β+2} + 1)·Σλ_i² + β/2 + log(1/α)] / Σλ_i
"""
import math

import numpy as np

from core.errors import NoEstimateError, WeightError
from core.state import AccumulatorMode, StreamState
from core.vec import as_vec, project_to_ball

from .base import ConfidenceSphereSequence, EstimatorConfig


def cg_threshold(x, lam: float) -> np.ndarray:
    """th(x) = ((λ‖x‖ ∧ 1)/(λ‖x‖))·x，th(0) = 0"""
    if not lam > 0:
        raise WeightError(f"lambda must be positive, got {lam}")
    return project_to_ball(as_vec(x), 1.0 / lam)


def _cg_radius(sum_lambda, sum_lambda_sq, moment_scale, beta, alpha):
    quad_coef = moment_scale * (2.0 * math.exp(2.0 / beta + 2.0) + 1.0)
    return (quad_coef * sum_lambda_sq + beta / 2.0 + math.log(1.0 / alpha)) / sum_lambda


def cg_radius(state: StreamState, cfg: EstimatorConfig) -> float:
    if state.t == 0:
        raise NoEstimateError()
    return _cg_radius(state.sum_lambda, state.sum_lambda_sq, cfg.moment_scale, cfg.beta, cfg.alpha)


class CatoniGiuliniCSS(ConfidenceSphereSequence):
    """重尾数据的 Catoni-Giulini 置信球序列"""
    mode = AccumulatorMode.CATONI

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        return _cg_radius(sum_lambda, sum_lambda_sq, self.cfg.moment_scale, self.cfg.beta, self.alpha)
