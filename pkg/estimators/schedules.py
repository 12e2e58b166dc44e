"""
权重序列 (λ_t)：可预测的调度器

每个调度器给出 λ_t = f(t, σ̂²_{t−1})，只依赖 t 之前的数据；
σ̂²_{t−1} = 0 时方差自适应的调度器取上限 cap。
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import Dict, Type

import numpy as np

from config.config import default_schedule_defaults
from core.errors import ConfigError


def optimal_c(alpha: float) -> float:
    """固定时间 EB 宽度最小化的常数 c* = 2 + 8/(3·log(1/α))"""
    return 2.0 + 8.0 / (3.0 * math.log(1.0 / alpha))


def zeta_alpha(alpha: float) -> float:
    """取 c = c* 时渐近宽度的乘子 √(9/2 + 6/log(1/α))"""
    return math.sqrt(4.5 + 6.0 / math.log(1.0 / alpha))


def _check_alpha(alpha, problems):
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        problems.append(("alpha", "alpha must lie in (0,1)"))


def _check_positive(name, value, problems):
    if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
        problems.append((name, f"{name} must be positive, got {value}"))


class LambdaSchedule(ABC):
    """权重调度器基类"""
    name = "schedule"
    deterministic = True  # 是否与数据无关

    @property
    def cap(self) -> float:
        return math.inf

    @abstractmethod
    def batch(self, t: np.ndarray, sigma2_prev: np.ndarray) -> np.ndarray:
        """
        向量化求值

        Args:
            t: 时刻数组（从 1 开始）
            sigma2_prev: 对应的 σ̂²_{t−1}

        Returns:
            与 t 同形状的 λ 数组
        """

    def __call__(self, t: int, sigma2_prev: float = 1.0) -> float:
        out = self.batch(np.array([t], dtype=np.float64), np.array([sigma2_prev], dtype=np.float64))
        return float(out[0])


def _capped(raw: np.ndarray, cap: float) -> np.ndarray:
    raw = np.where(np.isnan(raw), np.inf, raw)
    return np.minimum(cap, raw)


@dataclass(frozen=True)
class Constant(LambdaSchedule):
    value: float
    name = "constant"

    def __post_init__(self):
        problems = []
        _check_positive("value", self.value, problems)
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return self.value

    def batch(self, t, sigma2_prev):
        return np.full(np.shape(t), float(self.value))


@dataclass(frozen=True)
class FixedTimeEB(LambdaSchedule):
    """λ_t = min(cap, √(c·log(1/α)/(σ̂²_{t−1}·n)))"""
    n: int
    alpha: float
    c: float = None
    cap_value: float = default_schedule_defaults.eb_cap
    name = "fixed_time_eb"
    deterministic = False

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        _check_positive("n", self.n, problems)
        if not 0 < self.cap_value < 1:
            problems.append(("cap", "cap must lie in (0,1) for empirical-Bernstein weights"))
        ConfigError.collect(problems)
        if self.c is None:
            object.__setattr__(self, "c", optimal_c(self.alpha))

    @property
    def cap(self) -> float:
        return self.cap_value

    def batch(self, t, sigma2_prev):
        with np.errstate(divide="ignore"):
            raw = np.sqrt(self.c * math.log(1.0 / self.alpha) / (sigma2_prev * self.n))
        return _capped(raw, self.cap_value)


@dataclass(frozen=True)
class AnytimeEB(LambdaSchedule):
    """λ_t = min(cap, √(log(1/α)/(σ̂²_{t−1}·t·log(t+1))))"""
    alpha: float
    cap_value: float = default_schedule_defaults.eb_cap
    name = "anytime_eb"
    deterministic = False

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        if not 0 < self.cap_value < 1:
            problems.append(("cap", "cap must lie in (0,1) for empirical-Bernstein weights"))
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return self.cap_value

    def batch(self, t, sigma2_prev):
        t = np.asarray(t, dtype=np.float64)
        with np.errstate(divide="ignore"):
            raw = np.sqrt(math.log(1.0 / self.alpha) / (sigma2_prev * t * np.log(t + 1.0)))
        return _capped(raw, self.cap_value)


@dataclass(frozen=True)
class AnytimeCG(LambdaSchedule):
    """λ_t = √(log(1/α)/(v^{2/p}·t·log(t+1)))"""
    alpha: float
    v: float
    p: float = 2.0
    name = "anytime_cg"

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        _check_positive("v", self.v, problems)
        _check_positive("p", self.p, problems)
        ConfigError.collect(problems)

    def batch(self, t, sigma2_prev):
        t = np.asarray(t, dtype=np.float64)
        scale = self.v ** (2.0 / self.p)
        return np.sqrt(math.log(1.0 / self.alpha) / (scale * t * np.log(t + 1.0)))


@dataclass(frozen=True)
class FixedTimeCG(LambdaSchedule):
    """λ_t = √(log(1/α)/(v^{2/p}·n))"""
    n: int
    alpha: float
    v: float
    p: float = 2.0
    name = "fixed_time_cg"

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        _check_positive("n", self.n, problems)
        _check_positive("v", self.v, problems)
        _check_positive("p", self.p, problems)
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return math.sqrt(math.log(1.0 / self.alpha) / (self.v ** (2.0 / self.p) * self.n))

    def batch(self, t, sigma2_prev):
        return np.full(np.shape(t), self.cap)


@dataclass(frozen=True)
class AnytimeSubPsi(LambdaSchedule):
    """次高斯数据的确定性序列 λ_t = min(cap, √(log(1/α)/(σ²·t·log(t+1))))"""
    alpha: float
    sigma: float = 1.0
    cap_value: float = math.inf
    name = "anytime_sub_psi"

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        _check_positive("sigma", self.sigma, problems)
        if not self.cap_value > 0:
            problems.append(("cap", "cap must be positive"))
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return self.cap_value

    def batch(self, t, sigma2_prev):
        t = np.asarray(t, dtype=np.float64)
        raw = np.sqrt(math.log(1.0 / self.alpha) / (self.sigma ** 2 * t * np.log(t + 1.0)))
        return np.minimum(self.cap_value, raw)


@dataclass(frozen=True)
class RobustVar(LambdaSchedule):
    """λ_t = min(cap, 1/(b·σ̂_{t−1}))，cap = 0.68 保证 ψ_E(λ) ≤ λ²"""
    b: float
    cap_value: float = default_schedule_defaults.robust_var_cap
    name = "robust_var"
    deterministic = False

    def __post_init__(self):
        problems = []
        _check_positive("b", self.b, problems)
        if not 0 < self.cap_value <= default_schedule_defaults.robust_hard_cap:
            problems.append(("cap", f"cap must lie in (0,{default_schedule_defaults.robust_hard_cap}]"))
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return self.cap_value

    def batch(self, t, sigma2_prev):
        with np.errstate(divide="ignore"):
            raw = 1.0 / (self.b * np.sqrt(sigma2_prev))
        return _capped(raw, self.cap_value)


@dataclass(frozen=True)
class RobustFixedTime(LambdaSchedule):
    """λ_t = min(cap, (B/σ̂_{t−1})·√(log(1/α)/n + ε))"""
    n: int
    alpha: float
    eps: float
    B: float
    cap_value: float = default_schedule_defaults.robust_hard_cap
    name = "robust_fixed_time"
    deterministic = False

    def __post_init__(self):
        problems = []
        _check_alpha(self.alpha, problems)
        _check_positive("n", self.n, problems)
        _check_positive("B", self.B, problems)
        if not (isinstance(self.eps, (int, float)) and self.eps >= 0):
            problems.append(("eps", "eps must be non-negative"))
        if not 0 < self.cap_value <= default_schedule_defaults.robust_hard_cap:
            problems.append(("cap", f"cap must lie in (0,{default_schedule_defaults.robust_hard_cap}]"))
        ConfigError.collect(problems)

    @property
    def cap(self) -> float:
        return self.cap_value

    def batch(self, t, sigma2_prev):
        level = math.sqrt(math.log(1.0 / self.alpha) / self.n + self.eps)
        with np.errstate(divide="ignore"):
            raw = self.B * level / np.sqrt(sigma2_prev)
        return _capped(raw, self.cap_value)


SCHEDULES: Dict[str, Type[LambdaSchedule]] = {
    cls.name: cls
    for cls in (Constant, FixedTimeEB, AnytimeEB, AnytimeCG, FixedTimeCG,
                AnytimeSubPsi, RobustVar, RobustFixedTime)
}


def schedule_fields(name: str):
    """调度器接受的参数名（配置文件中 cap 对应 cap_value）"""
    cls = SCHEDULES.get(name)
    if cls is None:
        raise ConfigError(f"unknown schedule: {name}", field="schedule")
    return [("cap" if f.name == "cap_value" else f.name) for f in fields(cls)]


def build_schedule(name: str, **params) -> LambdaSchedule:
    """
    按名称构造调度器

    Args:
        name: 调度器名称（见 SCHEDULES）
        **params: 调度器参数，cap 会映射为 cap_value

    Returns:
        LambdaSchedule 实例
    """
    cls = SCHEDULES.get(name)
    if cls is None:
        raise ConfigError(f"unknown schedule: {name}", field="schedule")
    if "cap" in params:
        params["cap_value"] = params.pop("cap")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ConfigError([(key, f"unknown parameter for {name}") for key in unknown])
    try:
        return cls(**params)
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}", field="schedule") from None
