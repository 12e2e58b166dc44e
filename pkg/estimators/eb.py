"""
经验Bernstein 置信球序列（有界观测 ‖X‖ ≤ B）

半径 = [(1/(2B))·Σψ_E(λ_i)‖X_i − μ̄_{i−1}‖² + 2B·(2κA_d(κ) + log(1/α))] / (A_d(κ)·Σλ_i)
conservative=True 时用下界 A_d(√d) ≥ 2/(3√d) 得到的保守版本。
"""
import math

from core.errors import NoEstimateError
from core.state import AccumulatorMode, StreamState
from special.bessel import bessel_ratio, vmf_kl_bound

from .base import ConfidenceSphereSequence, EstimatorConfig


def _exact_radius(sum_lambda, quad_sum, B, kl, A, alpha):
    log_term = math.log(1.0 / alpha)
    return (quad_sum / (2.0 * B) + 2.0 * B * (kl + log_term)) / (A * sum_lambda)


def _conservative_radius(sum_lambda, quad_sum, B, d, alpha):
    root_d = math.sqrt(d)
    log_term = math.log(1.0 / alpha)
    numer = root_d / (2.0 * B) * quad_sum + 4.0 * B * root_d + 2.0 * B * root_d * log_term
    return numer / (2.0 / 3.0 * sum_lambda)


def eb_radius(state: StreamState, cfg: EstimatorConfig) -> float:
    """由流状态计算经验Bernstein 半径"""
    if state.t == 0:
        raise NoEstimateError()
    if cfg.conservative:
        return _conservative_radius(state.sum_lambda, state.quad_sum, cfg.B, cfg.d, cfg.alpha)
    return _exact_radius(state.sum_lambda, state.quad_sum, cfg.B,
                         vmf_kl_bound(cfg.d, cfg.kappa), bessel_ratio(cfg.d, cfg.kappa), cfg.alpha)


def asymptotic_eb_width(sigma: float, d: int, alpha: float, c: float, kappa: float = None) -> float:
    """
    固定时间调度下 √n·W_n 的极限 G(d, α, c)

    G = σ·(√(c·log(1/α))/(2A) + 2κ/√(c·log(1/α)) + √(log(1/α))/(A·√c))
    """
    kappa = math.sqrt(d) if kappa is None else kappa
    A = bessel_ratio(d, kappa)
    L = math.log(1.0 / alpha)
    return sigma * (math.sqrt(c * L) / (2.0 * A) + 2.0 * kappa / math.sqrt(c * L) + math.sqrt(L) / (A * math.sqrt(c)))


class EmpiricalBernsteinCSS(ConfidenceSphereSequence):
    """经验Bernstein 置信球序列"""
    mode = AccumulatorMode.EB

    def __init__(self, cfg: EstimatorConfig):
        super().__init__(cfg)
        self._A = bessel_ratio(cfg.d, cfg.kappa)
        self._kl = 2.0 * cfg.kappa * self._A

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        if self.cfg.conservative:
            return _conservative_radius(sum_lambda, quad_sum, self.cfg.B, self.d, self.alpha)
        return _exact_radius(sum_lambda, quad_sum, self.cfg.B, self._kl, self._A, self.alpha)
