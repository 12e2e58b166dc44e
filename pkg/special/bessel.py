"""
修正 Bessel 函数比值 A_d(κ) = I_{d/2}(κ) / I_{d/2-1}(κ) 与 vMF 的 KL 上界

A_d(κ) 通过连分式
    A = κ / (2ν + κ² / (2(ν+1) + κ² / (2(ν+2) + ...))),  ν = d/2
用修正 Lentz 方法求值，从不直接计算 I_ν，因此 d 到 10⁶ 也不会溢出。
"""
import logging
import math

from config.config import default_numerics_config
from core.errors import CSSError

logger = logging.getLogger(__name__)

_TINY = 1e-30


def _lentz_ratio(nu: float, kappa: float, tol: float, max_terms: int) -> float:
    kappa2 = kappa * kappa
    f = _TINY
    C = f
    D = 0.0
    for j in range(1, max_terms + 1):
        a = kappa if j == 1 else kappa2
        b = 2.0 * (nu + j - 1)
        D = b + a * D
        if D == 0.0:
            D = _TINY
        C = b + a / C
        if C == 0.0:
            C = _TINY
        D = 1.0 / D
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    logger.warning(
        "Bessel 比值连分式未收敛: nu=%s, kappa=%s, terms=%d", nu, kappa, max_terms
    )
    return f


def bessel_ratio(d: int, kappa: float) -> float:
    """
    计算 A_d(κ) = I_{d/2}(κ) / I_{d/2-1}(κ)

    Args:
        d: 维度（d ≥ 2）
        kappa: 集中度参数 κ ≥ 0

    Returns:
        [0, 1) 内的比值，A_d(0) = 0
    """
    if int(d) != d or d < 2:
        raise CSSError(f"d must be an integer >= 2, got {d}")
    if not math.isfinite(kappa):
        raise CSSError(f"kappa must be finite, got {kappa}")
    if kappa < 0:
        raise CSSError(f"kappa must be non-negative, got {kappa}")
    if kappa == 0.0:
        return 0.0
    cfg = default_numerics_config
    return _lentz_ratio(d / 2.0, float(kappa), cfg.bessel_tol, cfg.bessel_max_terms)


def vmf_kl_bound(d: int, kappa: float) -> float:
    """vMF(κ) 相对均匀先验的 KL 散度上界 2κ·A_d(κ)"""
    return 2.0 * kappa * bessel_ratio(d, kappa)
