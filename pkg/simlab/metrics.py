"""
结果记录：覆盖率报告、宽度曲线记录与速率拟合结果
"""
import math
from dataclasses import dataclass, field
from typing import List, Tuple

from config.config import default_harness_config


@dataclass(frozen=True)
class CoverageRow:
    """单个重复实验的结果（first_miscoverage_t = −1 表示全程覆盖）"""
    method: str
    replication: int
    first_miscoverage_t: int

    COLUMNS = ("method", "replication", "first_miscoverage_t")

    def as_row(self) -> Tuple:
        return (self.method, self.replication, self.first_miscoverage_t)


@dataclass
class CoverageReport:
    """同时覆盖率的蒙特卡洛估计"""
    method: str
    alpha: float
    horizon: int
    seed: int
    first_miscoverage: List[int] = field(default_factory=list)  # 按重复实验编号排列
    se_multiplier: float = default_harness_config.se_multiplier

    @property
    def replications(self) -> int:
        return len(self.first_miscoverage)

    @property
    def miscovered(self) -> int:
        return sum(1 for t in self.first_miscoverage if t >= 0)

    @property
    def coverage_hat(self) -> float:
        return 1.0 - self.miscovered / self.replications

    @property
    def binomial_se(self) -> float:
        p = self.coverage_hat
        return math.sqrt(p * (1.0 - p) / self.replications)

    @property
    def threshold(self) -> float:
        """验收阈值 1 − α − k·SE"""
        return 1.0 - self.alpha - self.se_multiplier * self.binomial_se

    def passes(self) -> bool:
        return self.coverage_hat >= self.threshold

    def rows(self) -> List[CoverageRow]:
        return [CoverageRow(self.method, r, t) for r, t in enumerate(self.first_miscoverage)]

    def print_summary(self):
        """打印汇总"""
        print("\n" + "=" * 50)
        print(f"覆盖率汇总 - {self.method}")
        print("=" * 50)
        print(f"重复次数: {self.replications}")
        print(f"时间范围: {self.horizon}")
        print(f"随机种子: {self.seed}")
        print(f"未覆盖次数: {self.miscovered}")
        print(f"同时覆盖率: {self.coverage_hat:.4f} (SE {self.binomial_se:.4f})")
        print(f"验收阈值: {self.threshold:.4f} -> {'通过' if self.passes() else '未通过'}")
        print("=" * 50)


@dataclass(frozen=True)
class WidthRecord:
    """某个检查点上各重复实验的平均半径"""
    t: int
    method: str
    mean_radius: float
    radius_se: float

    COLUMNS = ("t", "method", "mean_radius", "radius_se")

    def as_row(self) -> Tuple:
        return (self.t, self.method, self.mean_radius, self.radius_se)


@dataclass(frozen=True)
class RateFit:
    """log 半径对 log 预测量的最小二乘拟合"""
    method: str
    model: str
    slope: float
    intercept: float
    stderr: float
    spread: float       # max/min(半径 / 预测量)
    n_points: int
    t_min: int
    t_max: int

    COLUMNS = ("method", "model", "slope", "intercept", "stderr", "spread", "n_points", "t_min", "t_max")

    def as_row(self) -> Tuple:
        return tuple(getattr(self, name) for name in self.COLUMNS)

    def within(self, slope_range: Tuple[float, float]) -> bool:
        lo, hi = slope_range
        return lo <= self.slope <= hi
