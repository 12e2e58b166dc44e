"""
数据生成器：Beta 乘积、高斯、重尾、点质量与 Huber 污染混合

所有随机性来自根种子：第 r 个重复实验使用
Generator(SFC64(SeedSequence(seed, spawn_key=(r,))))，
因此任意一个重复实验都可以单独复现，结果与线程数无关。
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Type

import numpy as np
from numpy.random import SFC64, Generator, SeedSequence

from core.errors import ConfigError
from core.vec import check_positive_definite


def substream(seed: int, index: int) -> Generator:
    """根种子 seed 的第 index 条独立子流"""
    return Generator(SFC64(SeedSequence(seed, spawn_key=(index,))))


def _positive_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


class DistributionSpec:
    """数据分布描述的基类"""
    kind = "distribution"
    d: int

    @property
    def mean(self) -> np.ndarray:
        """流的真实均值"""
        raise NotImplementedError

    @property
    def target_mean(self) -> np.ndarray:
        """置信区域需要覆盖的均值（污染模型中为干净分布的均值）"""
        return self.mean

    @property
    def variance(self) -> float:
        """E‖X − μ‖²（无穷表示不存在）"""
        raise NotImplementedError

    @property
    def norm_bound(self) -> float:
        """ess sup ‖X‖，无界时为 inf"""
        return math.inf

    def sample(self, rng: Generator, n: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class BetaProduct(DistributionSpec):
    """
    各坐标独立 Beta(a, b)

    center=True 时每个坐标减去 1/2，scale 在中心化之后相乘；
    ‖X‖ ≤ scale·√d（中心化后为 scale·√d/2）。
    """
    d: int
    a: float
    b: float
    center: bool = False
    scale: float = 1.0
    kind = "beta_product"

    def __post_init__(self):
        problems = []
        if not _positive_int(self.d):
            problems.append(("d", f"d must be a positive integer, got {self.d}"))
        if not self.a > 0:
            problems.append(("a", f"a must be positive, got {self.a}"))
        if not self.b > 0:
            problems.append(("b", f"b must be positive, got {self.b}"))
        if not self.scale > 0:
            problems.append(("scale", f"scale must be positive, got {self.scale}"))
        ConfigError.collect(problems)

    @property
    def _shift(self) -> float:
        return 0.5 if self.center else 0.0

    @property
    def mean(self) -> np.ndarray:
        return np.full(self.d, self.scale * (self.a / (self.a + self.b) - self._shift))

    @property
    def variance(self) -> float:
        s = self.a + self.b
        return self.scale ** 2 * self.d * self.a * self.b / (s * s * (s + 1.0))

    @property
    def norm_bound(self) -> float:
        coord = max(self._shift, 1.0 - self._shift)
        return self.scale * coord * math.sqrt(self.d)

    def sample(self, rng, n):
        return self.scale * (rng.beta(self.a, self.b, size=(n, self.d)) - self._shift)


@dataclass(frozen=True)
class GaussianIso(DistributionSpec):
    """N(μ, σ²I)"""
    d: int
    sigma: float = 1.0
    mu: Optional[Tuple[float, ...]] = None
    kind = "gaussian_iso"

    def __post_init__(self):
        problems = []
        if not _positive_int(self.d):
            problems.append(("d", f"d must be a positive integer, got {self.d}"))
        if not self.sigma > 0:
            problems.append(("sigma", f"sigma must be positive, got {self.sigma}"))
        if self.mu is not None and len(self.mu) != self.d:
            problems.append(("mu", f"mu must have {self.d} components"))
        ConfigError.collect(problems)

    @property
    def mean(self):
        return np.zeros(self.d) if self.mu is None else np.asarray(self.mu, dtype=np.float64)

    @property
    def variance(self):
        return self.d * self.sigma ** 2

    def sample(self, rng, n):
        return self.mean + self.sigma * rng.standard_normal((n, self.d))


@dataclass(frozen=True, eq=False)
class GaussianCov(DistributionSpec):
    """N(μ, Σ)，Σ 对称正定"""
    d: int
    Sigma: np.ndarray = field(repr=False)
    mu: Optional[Tuple[float, ...]] = None
    kind = "gaussian_cov"

    def __post_init__(self):
        problems = []
        if not _positive_int(self.d):
            problems.append(("d", f"d must be a positive integer, got {self.d}"))
        else:
            try:
                mat = check_positive_definite(self.Sigma, name="Sigma")
                if mat.shape[0] != self.d:
                    problems.append(("Sigma", f"Sigma must be {self.d}x{self.d}"))
            except ConfigError as exc:
                problems.extend(exc.problems)
            if self.mu is not None and len(self.mu) != self.d:
                problems.append(("mu", f"mu must have {self.d} components"))
        ConfigError.collect(problems)
        object.__setattr__(self, "_chol", np.linalg.cholesky(np.asarray(self.Sigma, dtype=np.float64)))

    @property
    def mean(self):
        return np.zeros(self.d) if self.mu is None else np.asarray(self.mu, dtype=np.float64)

    @property
    def variance(self):
        return float(np.trace(self.Sigma))

    def sample(self, rng, n):
        return self.mean + rng.standard_normal((n, self.d)) @ self._chol.T


@dataclass(frozen=True)
class HeavyTail(DistributionSpec):
    """
    各向同性重尾分布：均匀方向 × Pareto 半径

    半径服从形状 a = p+1、尺度 x_m = (v/(p+1))^{1/p} 的 Pareto 分布，
    因此 E‖X‖^p = v 恰好成立，p+1 阶及以上的矩无穷。均值为 0。
    """
    d: int
    p_moment: float = 2.0
    v: float = 1.0
    kind = "heavy_tail"

    def __post_init__(self):
        problems = []
        if not _positive_int(self.d):
            problems.append(("d", f"d must be a positive integer, got {self.d}"))
        if not self.p_moment >= 2:
            problems.append(("p_moment", f"p_moment must be >= 2, got {self.p_moment}"))
        if not self.v > 0:
            problems.append(("v", f"v must be positive, got {self.v}"))
        ConfigError.collect(problems)

    @property
    def shape(self) -> float:
        return self.p_moment + 1.0

    @property
    def x_min(self) -> float:
        return (self.v / self.shape) ** (1.0 / self.p_moment)

    @property
    def mean(self):
        return np.zeros(self.d)

    @property
    def variance(self):
        a = self.shape
        return a * self.x_min ** 2 / (a - 2.0)

    def moment(self, q: float) -> float:
        """E‖X‖^q（q ≥ a 时为 inf）"""
        a = self.shape
        if q >= a:
            return math.inf
        return a * self.x_min ** q / (a - q)

    def sample(self, rng, n):
        radius = self.x_min * (1.0 + rng.pareto(self.shape, size=n))
        direction = rng.standard_normal((n, self.d))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        return radius[:, None] * direction


@dataclass(frozen=True)
class PointMass(DistributionSpec):
    """退化分布 δ_x"""
    x: Tuple[float, ...]
    kind = "point_mass"

    def __post_init__(self):
        arr = np.asarray(self.x, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
            raise ConfigError("x must be a finite non-empty vector", field="x")
        object.__setattr__(self, "x", tuple(float(v) for v in arr))

    @property
    def d(self) -> int:
        return len(self.x)

    @property
    def mean(self):
        return np.asarray(self.x, dtype=np.float64)

    @property
    def variance(self):
        return 0.0

    @property
    def norm_bound(self):
        return float(np.linalg.norm(self.mean))

    def sample(self, rng, n):
        return np.tile(self.mean, (n, 1))


@dataclass(frozen=True)
class HuberMix(DistributionSpec):
    """
    Huber 污染 (1−ε)P + εQ，属于 P 的 TV ε-球

    target_mean 是干净分布 P 的均值。
    """
    base: DistributionSpec
    eps: float
    contaminant: DistributionSpec
    kind = "huber_mix"

    def __post_init__(self):
        problems = []
        if not 0.0 <= self.eps <= 1.0:
            problems.append(("eps", f"eps must lie in [0,1], got {self.eps}"))
        if self.base.d != self.contaminant.d:
            problems.append(("contaminant", "contaminant dimension must match the base distribution"))
        ConfigError.collect(problems)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def mean(self):
        return (1.0 - self.eps) * self.base.mean + self.eps * self.contaminant.mean

    @property
    def target_mean(self):
        return self.base.target_mean

    @property
    def variance(self):
        m = self.mean
        shift_p = float(np.sum((self.base.mean - m) ** 2))
        shift_q = float(np.sum((self.contaminant.mean - m) ** 2))
        return (1.0 - self.eps) * (self.base.variance + shift_p) + self.eps * (self.contaminant.variance + shift_q)

    @property
    def norm_bound(self):
        return max(self.base.norm_bound, self.contaminant.norm_bound)

    def sample_labeled(self, rng, n) -> Tuple[np.ndarray, np.ndarray]:
        """返回 (样本, 是否来自污染分布)"""
        X = self.base.sample(rng, n)
        mask = rng.random(n) < self.eps
        k = int(mask.sum())
        if k:
            X[mask] = self.contaminant.sample(rng, k)
        return X, mask

    def sample(self, rng, n):
        return self.sample_labeled(rng, n)[0]


DISTRIBUTIONS: Dict[str, Type[DistributionSpec]] = {
    cls.kind: cls for cls in (BetaProduct, GaussianIso, GaussianCov, HeavyTail, PointMass, HuberMix)
}


def build_distribution(kind: str, **params) -> DistributionSpec:
    """
    按名称构造分布；HuberMix 的 base / contaminant 可以是嵌套的参数字典

    Args:
        kind: 分布名称（见 DISTRIBUTIONS）
        **params: 分布参数

    Returns:
        DistributionSpec 实例
    """
    cls = DISTRIBUTIONS.get(kind)
    if cls is None:
        raise ConfigError(f"unknown distribution: {kind}", field="distribution.kind")
    if cls is HuberMix:
        for key in ("base", "contaminant"):
            nested = params.get(key)
            if isinstance(nested, dict):
                nested = dict(nested)
                if "kind" not in nested:
                    raise ConfigError(f"{key} needs a kind", field=f"distribution.{key}.kind")
                params[key] = build_distribution(nested.pop("kind"), **nested)
            elif not isinstance(nested, DistributionSpec):
                raise ConfigError(f"huber_mix requires {key}", field=f"distribution.{key}")
    for key in ("mu", "x"):
        if key in params and params[key] is not None:
            params[key] = tuple(float(v) for v in params[key])
    if "Sigma" in params:
        params["Sigma"] = np.asarray(params["Sigma"], dtype=np.float64)
    try:
        return cls(**params)
    except TypeError as exc:
        raise ConfigError(f"{kind}: {exc}", field="distribution") from None


def generate(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """生成 n 个样本（与第 0 个重复实验的数据流相同）"""
    if not _positive_int(n):
        raise ConfigError(f"n must be a positive integer, got {n}", field="n")
    return spec.sample(substream(seed, 0), n)
