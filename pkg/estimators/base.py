"""
估计器基类：方法配置、置信球序列抽象与轨迹类型
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from core.errors import ConfigError, NoEstimateError
from core.region import ConfidenceRegion
from core.state import AccumulatorMode, StepTrace, StreamState
from core.vec import as_batch, as_vec, check_positive_definite, inverse_sqrt, unwhiten, whiten
from special.psi import GammaPsi, PsiKind

from .schedules import LambdaSchedule

logger = logging.getLogger(__name__)


class Method(str, Enum):
    """置信球序列的方法族"""
    EB = "eb"
    SUB_PSI = "sub_psi"
    CATONI = "cg"
    ROBUST_EB = "robust_eb"
    SEMI_EMPIRICAL = "semi_empirical"
    STITCHED_EB = "stitched_eb"
    STITCHED_SUB_GAMMA = "stitched_sub_gamma"
    MOM = "mom"


# 依赖 vMF 先验（需要 A_d(κ)）的方法
VMF_METHODS = {Method.EB, Method.ROBUST_EB, Method.STITCHED_EB, Method.STITCHED_SUB_GAMMA}
# 需要 ‖X‖ ≤ B 的方法
BOUNDED_METHODS = {Method.EB, Method.ROBUST_EB, Method.STITCHED_EB}
# 由 λ 调度器驱动的方法
SCHEDULED_METHODS = {Method.EB, Method.SUB_PSI, Method.CATONI, Method.ROBUST_EB, Method.SEMI_EMPIRICAL}


def _positive(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(value) and value > 0


@dataclass
class EstimatorConfig:
    """一个置信球序列的完整参数"""
    method: Method
    d: int
    alpha: float
    schedule: Optional[LambdaSchedule] = None
    B: Optional[float] = None            # ‖X‖ ≤ B（EB 家族，白化之后）
    psi: Optional[PsiKind] = None        # 次ψ / 拼接次Gamma
    v: Optional[float] = None            # E‖X‖^p ≤ v
    p: Optional[float] = None
    beta: float = 1.0                    # Catoni-Giulini 先验方差参数
    trace_sigma: Optional[float] = None  # Tr(Σ)（半经验、MoM）
    eps: float = 0.0                     # 污染比例 ε
    kappa: Optional[float] = None        # vMF 集中度，默认 √d
    conservative: bool = False           # 用 2/(3√d) 代替 A_d(√d)
    sigma: Optional[np.ndarray] = field(default=None, repr=False)  # 已知协方差 → 椭球
    name: Optional[str] = None           # 输出中的方法标签

    def __post_init__(self):
        if isinstance(self.method, str) and not isinstance(self.method, Method):
            try:
                self.method = Method(self.method)
            except ValueError:
                raise ConfigError(f"unknown method: {self.method}", field="method") from None
        if self.kappa is None and isinstance(self.d, int) and self.d >= 1:
            self.kappa = math.sqrt(self.d)

    @property
    def label(self) -> str:
        return self.name or self.method.value

    @property
    def moment_scale(self) -> float:
        """v^{2/p}"""
        return self.v ** (2.0 / self.p)

    def problems(self) -> List[Tuple[str, str]]:
        """列出所有配置问题（空列表表示合法）"""
        problems = []
        m = self.method
        if not (isinstance(self.d, int) and not isinstance(self.d, bool) and self.d >= 1):
            problems.append(("d", f"d must be a positive integer, got {self.d}"))
            return problems
        if not (isinstance(self.alpha, (int, float)) and 0.0 < self.alpha < 1.0):
            problems.append(("alpha", "alpha must lie in (0,1)"))
        if m in VMF_METHODS and self.d < 2:
            problems.append(("d", f"{m.value} requires d >= 2"))
        if m in VMF_METHODS and not _positive(self.kappa):
            problems.append(("kappa", "kappa must be positive"))
        if m in BOUNDED_METHODS and not _positive(self.B):
            problems.append(("B", f"{m.value} requires a finite positive norm bound B"))

        if m in SCHEDULED_METHODS:
            if self.schedule is None:
                problems.append(("schedule", f"{m.value} requires a lambda schedule"))
            elif m is Method.EB and not self.schedule.cap < 1.0:
                problems.append(("schedule", "empirical-Bernstein weights must stay below 1"))
            elif m is Method.ROBUST_EB and not self.schedule.cap <= 0.8:
                problems.append(("schedule", "robust weights must lie in (0,0.8]"))

        if m in (Method.SUB_PSI, Method.STITCHED_SUB_GAMMA) and self.psi is None:
            problems.append(("psi", f"{m.value} requires psi"))
        if m is Method.SUB_PSI and self.psi is not None and self.schedule is not None:
            if not self.schedule.deterministic:
                problems.append(("schedule", "sub_psi requires a deterministic schedule"))
            elif math.isfinite(self.psi.lam_max) and not self.schedule.cap < self.psi.lam_max:
                problems.append(("schedule", f"schedule cap must stay below psi lambda_max={self.psi.lam_max}"))
        if m is Method.STITCHED_SUB_GAMMA and self.psi is not None and not isinstance(self.psi, GammaPsi):
            problems.append(("psi", "stitched_sub_gamma requires a gamma psi"))

        if m in (Method.CATONI, Method.SEMI_EMPIRICAL):
            if not _positive(self.v):
                problems.append(("v", f"{m.value} requires v > 0"))
            if not (isinstance(self.p, (int, float)) and self.p >= 2):
                problems.append(("p", f"{m.value} requires p >= 2"))
        if m is Method.CATONI and not _positive(self.beta):
            problems.append(("beta", "beta must be positive"))
        if m is Method.SEMI_EMPIRICAL and not (
            isinstance(self.trace_sigma, (int, float)) and self.trace_sigma >= 0
        ):
            problems.append(("trace_sigma", "semi_empirical requires trace_sigma >= 0"))
        if m is Method.MOM and not _positive(self.trace_sigma):
            problems.append(("trace_sigma", "mom requires trace_sigma > 0"))
        if m is Method.MOM and self.sigma is not None:
            problems.append(("sigma", "mom does not support whitening"))
        if m is Method.ROBUST_EB and not (isinstance(self.eps, (int, float)) and self.eps >= 0):
            problems.append(("eps", "eps must be non-negative"))

        if self.sigma is not None:
            try:
                mat = check_positive_definite(self.sigma, name="sigma")
                if mat.shape[0] != self.d:
                    problems.append(("sigma", f"sigma must be {self.d}x{self.d}"))
            except ConfigError as exc:
                problems.extend(exc.problems)
        return problems

    def validate(self) -> "EstimatorConfig":
        ConfigError.collect(self.problems())
        return self


@dataclass
class Trajectory:
    """一段流上的逐步置信区域（第 i 行对应时刻 t[i]）"""
    t: np.ndarray
    radii: np.ndarray
    alpha: float
    centers: Optional[np.ndarray] = None   # 原坐标下的中心；MoM 不提供
    whitening: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.t)

    def distance_to(self, mu) -> np.ndarray:
        """每一步中心到 μ 的（马氏）距离"""
        if self.centers is None:
            raise NoEstimateError("trajectory carries no centers")
        diff = self.centers - np.asarray(mu, dtype=np.float64)[None, :]
        if self.whitening is not None:
            diff = diff @ self.whitening.T
        return np.linalg.norm(diff, axis=1)

    def covers(self, mu) -> np.ndarray:
        return self.distance_to(mu) <= self.radii

    def first_miss(self, mu) -> int:
        """第一个不覆盖 μ 的时刻，全部覆盖时返回 −1"""
        miss = np.flatnonzero(~self.covers(mu))
        return int(self.t[miss[0]]) if miss.size else -1


class ConfidenceSphereSequence(ABC):
    """
    置信球序列估计器基类

    子类给出累加模式与半径公式 radius_curve；基类负责白化、
    λ 调度、逐个更新与向量化的批量更新。
    """
    mode = AccumulatorMode.EB

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg.validate()
        self.d = cfg.d
        self.alpha = cfg.alpha
        self.schedule = cfg.schedule
        self.whitening = inverse_sqrt(cfg.sigma) if cfg.sigma is not None else None
        self.state = self._make_state()
        logger.debug("创建估计器 %s (d=%d, alpha=%s)", cfg.label, cfg.d, cfg.alpha)

    @property
    def label(self) -> str:
        return self.cfg.label

    @property
    def t(self) -> int:
        return self.state.t

    def _make_state(self) -> StreamState:
        return StreamState(
            self.d,
            mode=self.mode,
            cap=self.schedule.cap if self.schedule is not None else math.inf,
            psi=self.cfg.psi if self.mode is AccumulatorMode.SUB_PSI else None,
            moment_scale=self.cfg.moment_scale if self.mode is AccumulatorMode.SEMI_EMPIRICAL else 0.0,
            bound=self.cfg.B if self.cfg.method in BOUNDED_METHODS else None,
        )

    def reset(self):
        self.state = self._make_state()

    # ---- 子类接口 ----

    def _weights(self, t: np.ndarray, sigma2_prev: np.ndarray) -> np.ndarray:
        return self.schedule.batch(t, sigma2_prev)

    @abstractmethod
    def radius_curve(self, t, sum_lambda, sum_lambda_sq, quad_sum, var_sum):
        """由累加量计算半径（标量或数组均可）"""

    def center_curve(self, trace: StepTrace) -> np.ndarray:
        return trace.weighted_mean()

    def _state_center(self) -> np.ndarray:
        return self.state.weighted_sum / self.state.sum_lambda

    # ---- 更新 ----

    def _to_working(self, X):
        return X if self.whitening is None else whiten(X, self.whitening)

    def _to_original(self, X):
        return X if self.whitening is None else unwhiten(X, self.whitening)

    def update(self, x) -> ConfidenceRegion:
        """吸收一个观测并返回当前置信区域"""
        y = self._to_working(as_vec(x, self.d))
        t_next = np.array([self.state.t + 1], dtype=np.float64)
        lam = self._weights(t_next, np.array([self.state.sigma2_hat]))[0]
        self.state.update(y, lam)
        return self.region()

    def update_many(self, X) -> Trajectory:
        """批量吸收观测并返回逐步轨迹，结果与逐个 update 一致"""
        Y = self._to_working(as_batch(X, self.d))
        z2, sigma2_prev = self.state.deviations(Y)
        t_arr = (self.state.t + np.arange(1, Y.shape[0] + 1)).astype(np.float64)
        lams = self._weights(t_arr, sigma2_prev)
        trace = self.state.advance(Y, lams, z2)
        radii = np.asarray(
            self.radius_curve(trace.t.astype(np.float64), trace.sum_lambda, trace.sum_lambda_sq,
                              trace.quad_sum, trace.var_sum),
            dtype=np.float64,
        )
        return Trajectory(
            t=trace.t,
            radii=radii,
            alpha=self.alpha,
            centers=self._to_original(self.center_curve(trace)),
            whitening=self.whitening,
        )

    # ---- 查询 ----

    def radius(self) -> float:
        s = self.state
        if s.t == 0:
            raise NoEstimateError()
        return float(self.radius_curve(float(s.t), s.sum_lambda, s.sum_lambda_sq, s.quad_sum, s.var_sum))

    def center(self) -> np.ndarray:
        if self.state.t == 0:
            raise NoEstimateError()
        return self._to_original(self._state_center())

    def region(self) -> ConfidenceRegion:
        """当前时刻的置信区域；t = 0 时抛出 NoEstimateError"""
        return ConfidenceRegion(
            center=self.center(),
            radius=self.radius(),
            t=self.state.t,
            alpha=self.alpha,
            whitening=self.whitening,
        )
