"""
中位数均值（median-of-means）基线：几何中位数 + 逐时刻联合界

时刻 t 的预算 α_t = α/(t + t²)，Σ_t α_t = α；
分块数 k_t = min(t, ceil(8·log(1/α_t)))，块按到达顺序连续划分。
半径 2√2·√(Tr(Σ)·(1 + 2·log(1/α_t))/t) 是基线约定的固定时间常数。
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.spatial.distance import cdist

from config.config import default_numerics_config, default_schedule_defaults
from core.errors import ConfigError, NoEstimateError, ObservationError
from core.region import ConfidenceRegion
from core.vec import as_batch, as_vec
from estimators.base import EstimatorConfig, Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoMConfig:
    """中位数均值基线参数"""
    alpha: float
    trace_sigma: float
    block_factor: float = default_schedule_defaults.mom_block_factor
    constant: float = default_schedule_defaults.mom_constant

    def __post_init__(self):
        problems = []
        if not 0.0 < self.alpha < 1.0:
            problems.append(("alpha", "alpha must lie in (0,1)"))
        if not self.trace_sigma > 0:
            problems.append(("trace_sigma", "trace_sigma must be positive"))
        if not self.block_factor > 0:
            problems.append(("block_factor", "block_factor must be positive"))
        ConfigError.collect(problems)


def per_time_budget(t, alpha: float):
    """α_t = α / (t + t²)"""
    t = np.asarray(t, dtype=np.float64)
    out = alpha / (t + t * t)
    return float(out) if out.ndim == 0 else out


def block_count(t: int, cfg: MoMConfig) -> int:
    """k_t = min(t, ceil(block_factor·log(1/α_t)))"""
    k = math.ceil(cfg.block_factor * math.log(1.0 / per_time_budget(t, cfg.alpha)))
    return max(1, min(int(t), k))


def geometric_median(points: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    Weiszfeld 迭代求几何中位数（从算术平均出发）

    迭代点落在某个数据点上时先检查最优性条件，
    不满足则沿下降方向扰动 1e-8 后继续。
    """
    numerics = default_numerics_config
    tol = numerics.weiszfeld_tol if tol is None else tol
    y = points.mean(axis=0)
    if points.shape[0] <= 2:
        return y

    for _ in range(numerics.weiszfeld_max_iter):
        dist = cdist(points, y[None, :])[:, 0]
        nonzero = dist > 0
        inv = 1.0 / dist[nonzero]
        target = (inv[:, None] * points[nonzero]).sum(axis=0) / inv.sum()
        n_zero = points.shape[0] - int(nonzero.sum())
        if n_zero == 0:
            y_next = target
        elif n_zero == points.shape[0]:
            return y
        else:
            # 点 y 与 n_zero 个数据点重合：梯度范数不超过 n_zero 即为最优
            pull = (target - y) * inv.sum()
            norm = float(np.linalg.norm(pull))
            if norm <= n_zero:
                return y
            y_next = y + numerics.weiszfeld_jitter * pull / norm
        if float(np.linalg.norm(y_next - y)) < tol:
            return y_next
        y = y_next

    logger.warning("Weiszfeld 迭代未在 %d 步内收敛", numerics.weiszfeld_max_iter)
    return y


def mom_estimate(samples, k: int) -> np.ndarray:
    """
    几何中位数均值估计

    Args:
        samples: (n, d) 样本
        k: 分块数（1 ≤ k ≤ n）

    Returns:
        k 个连续块均值的几何中位数
    """
    X = np.asarray(samples, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] == 0:
        raise ObservationError("median-of-means needs at least one sample")
    if not 1 <= k <= X.shape[0]:
        raise ConfigError(f"block count must lie in [1, {X.shape[0]}], got {k}", field="k")
    block_means = np.stack([block.mean(axis=0) for block in np.array_split(X, k)])
    if k == 1:
        return block_means[0]
    return geometric_median(block_means)


def mom_union_radius(t, cfg: MoMConfig):
    """时刻 t 的联合界半径 C·√(Tr(Σ)·(1 + 2·log(1/α_t))/t)"""
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 1):
        raise NoEstimateError()
    log_term = np.log(1.0 / per_time_budget(t_arr, cfg.alpha))
    out = cfg.constant * np.sqrt(cfg.trace_sigma * (1.0 + 2.0 * log_term) / t_arr)
    return float(out) if out.ndim == 0 else out


class MoMBaseline:
    """
    逐时刻联合界的中位数均值置信球

    半径与数据无关；中心需要全部历史样本，因此只在查询时计算。
    retain_samples=False 时只跟踪时间（宽度曲线不需要中心）。
    """

    def __init__(self, cfg: MoMConfig, d: int, label: str = "mom", retain_samples: bool = True):
        self.cfg = cfg
        self.d = d
        self.label = label
        self.alpha = cfg.alpha
        self.retain_samples = retain_samples
        self.t = 0
        self._chunks: List[np.ndarray] = []

    @classmethod
    def from_estimator_config(cls, cfg: EstimatorConfig, retain_samples: bool = True) -> "MoMBaseline":
        cfg.validate()
        return cls(MoMConfig(alpha=cfg.alpha, trace_sigma=cfg.trace_sigma), cfg.d,
                   label=cfg.label, retain_samples=retain_samples)

    def reset(self):
        self.t = 0
        self._chunks = []

    def _samples(self) -> np.ndarray:
        if not self.retain_samples:
            raise NoEstimateError("samples were not retained")
        return np.concatenate(self._chunks, axis=0)

    def update(self, x) -> ConfidenceRegion:
        x = as_vec(x, self.d)
        if self.retain_samples:
            self._chunks.append(x[None, :])
        self.t += 1
        return self.region()

    def update_many(self, X) -> Trajectory:
        """批量吸收观测；返回的轨迹只含半径"""
        X = as_batch(X, self.d)
        if self.retain_samples:
            self._chunks.append(X.copy())
        t = self.t + np.arange(1, X.shape[0] + 1)
        self.t += X.shape[0]
        return Trajectory(t=t, radii=mom_union_radius(t, self.cfg), alpha=self.alpha)

    def radius(self) -> float:
        if self.t == 0:
            raise NoEstimateError()
        return mom_union_radius(self.t, self.cfg)

    def center(self) -> np.ndarray:
        if self.t == 0:
            raise NoEstimateError()
        return mom_estimate(self._samples(), block_count(self.t, self.cfg))

    def region(self) -> ConfidenceRegion:
        return ConfidenceRegion(center=self.center(), radius=self.radius(), t=self.t, alpha=self.alpha)
