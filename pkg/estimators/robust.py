"""
鲁棒经验Bernstein 置信球序列：数据来自 TV ε-球内的任意分布

半径 = [(√d/(2B))·quad_sum + 6B√d·log(1/α) + 2B√d·t·log(1 + e²ε)] / ((2/3)·Σλ_i)
ε > 0 时半径有正的下限，不会收敛到 0。
"""
import math

from core.errors import NoEstimateError
from core.state import AccumulatorMode, StreamState
from special.psi import PSI_EXPONENTIAL

from .base import ConfidenceSphereSequence, EstimatorConfig


def _robust_radius(t, sum_lambda, quad_sum, B, d, alpha, eps):
    root_d = math.sqrt(d)
    numer = (
        root_d / (2.0 * B) * quad_sum
        + 6.0 * B * root_d * math.log(1.0 / alpha)
        + 2.0 * B * root_d * t * math.log1p(math.e ** 2 * eps)
    )
    return numer / (2.0 / 3.0 * sum_lambda)


def robust_eb_radius(state: StreamState, cfg: EstimatorConfig) -> float:
    if state.t == 0:
        raise NoEstimateError()
    return _robust_radius(state.t, state.sum_lambda, state.quad_sum, cfg.B, cfg.d, cfg.alpha, cfg.eps)


def robust_constant_lambda_limit(lam: float, sigma2: float, d: int, B: float, eps: float) -> float:
    """
    常数 λ 时半径的极限（t → ∞）

    σ² = E‖X − μ‖²（实际数据流的方差），
    极限 = [(√d/(2B))·ψ_E(λ)·σ² + 2B√d·log(1 + e²ε)] / ((2/3)·λ)
    """
    root_d = math.sqrt(d)
    numer = root_d / (2.0 * B) * PSI_EXPONENTIAL(lam) * sigma2 + 2.0 * B * root_d * math.log1p(math.e ** 2 * eps)
    return numer / (2.0 / 3.0 * lam)


def robust_var_limit(sigma: float, d: int, B: float, b: float, eps: float) -> float:
    """RobustVar(b) 调度下渐近宽度的上界 3σ√d·B/b + (3/2)·b·σ²·e²·ε"""
    return 3.0 * sigma * math.sqrt(d) * B / b + 1.5 * b * sigma ** 2 * math.e ** 2 * eps


class RobustEBCSS(ConfidenceSphereSequence):
    """Huber 污染下的鲁棒经验Bernstein 置信球序列"""
    mode = AccumulatorMode.EB

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        return _robust_radius(t, sum_lambda, quad_sum, self.cfg.B, self.d, self.alpha, self.cfg.eps)
