"""
ψ 函数族：指数型 ψ_E、高斯型、Gamma 型与指数尾型

每个变体都带有定义域上界 λ_max，且 ψ(0) = 0。
"""
import math
from dataclasses import dataclass

import numpy as np

from config.config import default_numerics_config
from core.errors import CSSError, WeightError


def _as_lambda(lam) -> np.ndarray:
    arr = np.asarray(lam, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise WeightError("lambda must be finite")
    if np.any(arr < 0.0):
        raise WeightError(f"lambda must be non-negative, got {float(np.min(arr))}")
    return arr


def _scalar_or_array(value: np.ndarray, like):
    return float(value) if np.ndim(like) == 0 else value


class PsiKind:
    """ψ 函数的基类，子类实现 _eval"""
    name = "psi"

    @property
    def lam_max(self) -> float:
        return math.inf

    def _eval(self, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, lam):
        arr = _as_lambda(lam)
        if np.any(arr >= self.lam_max):
            raise WeightError(
                f"lambda={float(np.max(arr))} outside the domain of {self.name} (lambda_max={self.lam_max})"
            )
        return _scalar_or_array(self._eval(arr), lam)


@dataclass(frozen=True)
class ExponentialPsi(PsiKind):
    """ψ_E(λ) = −λ − log(1 − λ)，定义域 [0, 1)"""
    name = "exponential"

    @property
    def lam_max(self) -> float:
        return 1.0

    def __call__(self, lam):
        arr = _as_lambda(lam)
        guard = 1.0 - default_numerics_config.psi_singularity_guard
        if np.any(arr >= guard):
            raise WeightError(f"lambda={float(np.max(arr))} too close to the psi_E singularity at 1")
        return _scalar_or_array(self._eval(arr), lam)

    def _eval(self, lam):
        return -lam - np.log1p(-lam)


@dataclass(frozen=True)
class GaussianPsi(PsiKind):
    """次高斯：ψ(λ) = λ²σ²/2"""
    sigma: float = 1.0
    name = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise CSSError(f"sigma must be positive, got {self.sigma}")

    def _eval(self, lam):
        return 0.5 * lam * lam * self.sigma ** 2


@dataclass(frozen=True)
class GammaPsi(PsiKind):
    """次 Gamma：ψ_G(λ) = λ²/(2(1 − cλ))，λ_max = 1/c"""
    c: float = 0.0
    name = "gamma"

    def __post_init__(self):
        if not (self.c >= 0 and math.isfinite(self.c)):
            raise CSSError(f"c must be a finite non-negative number, got {self.c}")

    @property
    def lam_max(self) -> float:
        return math.inf if self.c == 0 else 1.0 / self.c

    def _eval(self, lam):
        return lam * lam / (2.0 * (1.0 - self.c * lam))


@dataclass(frozen=True)
class ExponentialTailPsi(PsiKind):
    """次指数：在 [0, λ_max) 上 ψ(λ) = λ²σ²/2"""
    sigma: float = 1.0
    lam_limit: float = 1.0
    name = "exponential_tail"

    def __post_init__(self):
        if not self.sigma > 0:
            raise CSSError(f"sigma must be positive, got {self.sigma}")
        if not self.lam_limit > 0:
            raise CSSError(f"lambda_max must be positive, got {self.lam_limit}")

    @property
    def lam_max(self) -> float:
        return self.lam_limit

    def _eval(self, lam):
        return 0.5 * lam * lam * self.sigma ** 2


PSI_EXPONENTIAL = ExponentialPsi()


def psi_eval(kind: PsiKind, lam):
    """计算 ψ(λ)；λ 超出 [0, λ_max) 时抛出 WeightError"""
    return kind(lam)


def psi_gamma_inverse(c: float, u):
    """
    ψ_G 的反函数：λ = 2 / (c + √(c² + 2/u))

    Args:
        c: Gamma 参数（c ≥ 0，c = 0 时退化为 √(2u)）
        u: 目标值（必须 > 0）

    Returns:
        满足 ψ_G(λ) = u 的 λ，c > 0 时 λ < 1/c
    """
    if c < 0:
        raise CSSError(f"c must be non-negative, got {c}")
    arr = np.asarray(u, dtype=np.float64)
    if np.any(~(arr > 0)):
        raise CSSError("u must be positive")
    out = 2.0 / (c + np.sqrt(c * c + 2.0 / arr))
    return _scalar_or_array(out, u)


def build_psi(name: str, **params) -> PsiKind:
    """按名称构造 ψ（配置文件使用）"""
    name = name.lower()
    if name in ("exponential", "psi_e"):
        return PSI_EXPONENTIAL
    if name in ("gaussian", "sub_gaussian"):
        return GaussianPsi(sigma=float(params.get("sigma", 1.0)))
    if name in ("gamma", "sub_gamma"):
        return GammaPsi(c=float(params.get("c", 0.0)))
    if name in ("exponential_tail", "sub_exponential"):
        return ExponentialTailPsi(
            sigma=float(params.get("sigma", 1.0)),
            lam_limit=float(params.get("lam_max", 1.0)),
        )
    raise CSSError(f"unknown psi kind: {name}")
