"""
配置文件：定义数值参数、权重调度默认值、实验引擎参数和运行配置
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple


@dataclass
class NumericsConfig:
    """数值计算配置"""
    bessel_tol: float = 1e-14           # 连分式截断容差
    bessel_max_terms: int = 1_000_000    # 连分式最大项数
    psi_singularity_guard: float = 1e-12  # ψ_E 在 λ→1 处的奇点保护
    bound_rtol: float = 1e-12           # ‖x‖ ≤ B 检查的相对容差
    weiszfeld_tol: float = 1e-9         # 几何中位数迭代位移容差
    weiszfeld_jitter: float = 1e-8      # 迭代点落在数据点上时的扰动幅度
    weiszfeld_max_iter: int = 10_000    # 几何中位数最大迭代次数
    kahan: bool = True                  # 累加器是否使用补偿求和


@dataclass
class ScheduleDefaults:
    """权重序列 (λ_t) 默认参数"""
    eb_cap: float = 0.5                 # 经验Bernstein λ 上限（必须 < 1）
    robust_hard_cap: float = 0.8        # 鲁棒EB 的硬上限
    robust_var_cap: float = 0.68        # RobustVar 上限，保证 ψ_E(λ) ≤ λ²
    stitch_lambda_limit: float = 0.68   # 拼接EB 每个epoch的 λ_m 上限
    mom_block_factor: float = 8.0       # MoM 分块数 k_t = ceil(8·log(1/α_t))
    mom_constant: float = 2.0 * math.sqrt(2.0)  # MoM 固定时间半径常数


@dataclass
class HarnessConfig:
    """蒙特卡洛实验引擎配置"""
    chunk_size: int = 65_536            # 每次向估计器送入的样本块大小
    checkpoints_per_decade: int = 50    # 对数间隔检查点（每个数量级上限）
    se_multiplier: float = 2.0          # 覆盖率验收阈值 1-α-2·SE
    threads: int = 1                    # 并行重复实验的线程数


@dataclass
class RunConfig:
    """一次命令行运行的完整配置（由 config.loader.parse_config 生成）"""
    command: str                        # coverage | width | compare | rate
    estimators: List = field(default_factory=list)   # EstimatorConfig 列表
    distribution: Optional[object] = None            # DistributionSpec
    horizon: int = 10_000
    replications: int = 100
    seed: int = 42
    output_path: str = "results/run.csv"
    threads: int = 1
    rate_model: str = "sqrt_log_t_over_t"           # 或 "lil"
    slope_range: Tuple[float, float] = (0.9, 1.1)    # rate --assert 的斜率区间
    max_spread: float = 5.0                          # rate --assert 的 max/min 上限
    rate_window: Optional[Tuple[int, int]] = None    # 拟合使用的时间窗口


# 默认配置实例
default_numerics_config = NumericsConfig()
default_schedule_defaults = ScheduleDefaults()
default_harness_config = HarnessConfig()
