"""
拼接（stitching）置信球序列：在几何间隔的 epoch 上拼接边界，得到 LIL 速率

epoch m = floor(log₂ t) 使用预算 α/ℓ(m)，ℓ(m) = (m+1)²·ζ(2)，Σ_m 1/ℓ(m) = 1。
中心是未加权的样本均值 (1/t)ΣX_i。
"""
import math

import numpy as np
from scipy.special import zeta

from config.config import default_schedule_defaults
from core.errors import NoEstimateError
from core.state import AccumulatorMode, StepTrace
from special.bessel import bessel_ratio
from special.psi import PSI_EXPONENTIAL, psi_gamma_inverse

from .base import ConfidenceSphereSequence, EstimatorConfig

ZETA2 = float(zeta(2.0))


def ell(m):
    """ℓ(m) = (m+1)²·ζ(2)"""
    return (np.asarray(m, dtype=np.float64) + 1.0) ** 2 * ZETA2


def epoch_of(t):
    """epoch 编号 m = floor(log₂ t)"""
    return np.floor(np.log2(np.asarray(t, dtype=np.float64)))


def epoch_level(t, alpha: float):
    """返回 (m, r_m)，r_m = log(ℓ(m)/α)"""
    m = epoch_of(t)
    return m, np.log(ell(m) / alpha)


def _scalar(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _stitched_eb(t, V_t, B, kl, A, alpha, limit):
    t = np.asarray(t, dtype=np.float64)
    m, r = epoch_level(t, alpha)
    lam = np.sqrt(r / 2.0 ** m)
    valid = lam <= limit
    safe_lam = np.where(valid, lam, limit)
    g = (PSI_EXPONENTIAL(safe_lam) * V_t + 2.0 * B * (kl + r)) / (safe_lam * A * t)
    return np.where(valid, g, np.inf)


def stitched_eb_radius(t: int, V_t: float, cfg: EstimatorConfig) -> float:
    """
    拼接经验Bernstein 边界

    Args:
        t: 时刻（≥ 1）
        V_t: 方差过程 Σ‖X_i − μ̄_{i−1}‖²/(2B)
        cfg: 估计器配置（使用 B、α、κ）

    Returns:
        λ_m = √(r_m/2^m) ≤ 0.68 时的半径，否则 +inf
    """
    if t < 1:
        raise NoEstimateError()
    A = bessel_ratio(cfg.d, cfg.kappa)
    out = _stitched_eb(t, V_t, cfg.B, 2.0 * cfg.kappa * A, A, cfg.alpha,
                       default_schedule_defaults.stitch_lambda_limit)
    return float(out)


def _stitched_subgamma(t, c, kl, A, alpha):
    t = np.asarray(t, dtype=np.float64)
    m, r = epoch_level(t, alpha)
    psi_value = r / 2.0 ** m
    lam = psi_gamma_inverse(c, psi_value)
    return (psi_value * t + kl + r) / (lam * A * t)


def stitched_subgamma_radius(t: int, cfg: EstimatorConfig) -> float:
    """拼接次Gamma 边界（方差过程 V_t = t），λ_m = ψ_G⁻¹(r_m/2^m)"""
    if t < 1:
        raise NoEstimateError()
    A = bessel_ratio(cfg.d, cfg.kappa)
    return float(_stitched_subgamma(t, cfg.psi.c, 2.0 * cfg.kappa * A, A, cfg.alpha))


class _StitchedBase(ConfidenceSphereSequence):
    """拼接估计器只维护计数、和与方差代理，λ ≡ 1"""
    mode = AccumulatorMode.PLAIN

    def __init__(self, cfg: EstimatorConfig):
        super().__init__(cfg)
        self._A = bessel_ratio(cfg.d, cfg.kappa)
        self._kl = 2.0 * cfg.kappa * self._A

    def _weights(self, t, sigma2_prev):
        return np.ones_like(np.asarray(t, dtype=np.float64))

    def center_curve(self, trace: StepTrace) -> np.ndarray:
        return trace.running_mean()

    def _state_center(self) -> np.ndarray:
        return self.state.running_mean


class StitchedEBCSS(_StitchedBase):
    """拼接经验Bernstein 置信球序列"""

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        V_t = np.asarray(var_sum, dtype=np.float64) / (2.0 * self.cfg.B)
        out = _stitched_eb(t, V_t, self.cfg.B, self._kl, self._A, self.alpha,
                           default_schedule_defaults.stitch_lambda_limit)
        return _scalar(out, t)


class StitchedSubGammaCSS(_StitchedBase):
    """拼接次Gamma 置信球序列"""

    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        out = _stitched_subgamma(t, self.cfg.psi.c, self._kl, self._A, self.alpha)
        return _scalar(out, t)
