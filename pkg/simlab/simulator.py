"""
蒙特卡洛实验引擎：覆盖率研究与宽度曲线

每个重复实验拥有自己的估计器与随机子流，按块把样本流送入 update_many；
重复实验之间可以多线程并行，汇总按重复实验编号顺序进行。
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, Optional, Sequence

import numpy as np

from config.config import HarnessConfig, default_harness_config
from core.errors import ConfigError
from estimators import EstimatorConfig, Method, build_estimator
from estimators.base import BOUNDED_METHODS

from .generator import DistributionSpec, substream
from .metrics import CoverageReport, WidthRecord

logger = logging.getLogger(__name__)


def log_checkpoints(horizon: int, per_decade: int = None) -> np.ndarray:
    """[1, horizon] 上对数间隔的整数检查点（每个数量级至多 per_decade 个，包含 horizon）"""
    if per_decade is None:
        per_decade = default_harness_config.checkpoints_per_decade
    if horizon < 1:
        raise ConfigError(f"horizon must be positive, got {horizon}", field="horizon")
    decades = math.log10(horizon)
    count = max(1, int(math.ceil(decades * per_decade)))
    grid = np.unique(np.round(np.logspace(0.0, decades, count + 1)).astype(np.int64))
    grid = grid[(grid >= 1) & (grid <= horizon)]
    if grid[-1] != horizon:
        grid = np.append(grid, horizon)
    return grid


def check_compatible(cfg: EstimatorConfig, spec: DistributionSpec):
    """估计器与数据分布的兼容性检查"""
    problems = []
    if cfg.d != spec.d:
        problems.append(("d", f"estimator dimension {cfg.d} does not match distribution dimension {spec.d}"))
    if cfg.method in BOUNDED_METHODS and cfg.sigma is None:
        if not math.isfinite(spec.norm_bound):
            problems.append(("distribution", f"{cfg.method.value} requires a bounded distribution"))
        elif spec.norm_bound > cfg.B * (1.0 + 1e-6):
            logger.warning("分布的范数上界 %.6g 大于 B=%.6g，越界观测会被拒绝", spec.norm_bound, cfg.B)
    ConfigError.collect(problems)


class MonteCarloSimulator:
    """蒙特卡洛实验引擎"""

    def __init__(self, config: HarnessConfig = None):
        """
        初始化实验引擎

        Args:
            config: 引擎配置（块大小、检查点密度、线程数）
        """
        if config is None:
            config = default_harness_config
        self.config = config

    def _chunks(self, horizon: int) -> Iterator[int]:
        done = 0
        while done < horizon:
            size = min(self.config.chunk_size, horizon - done)
            yield size
            done += size

    def _map(self, fn, replications: int, threads: Optional[int]):
        threads = self.config.threads if threads is None else threads
        if threads <= 1:
            return [fn(r) for r in range(replications)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(replications)))

    # ---- 覆盖率 ----

    def _first_miss(self, cfg: EstimatorConfig, spec: DistributionSpec, horizon: int,
                    seed: int, replication: int) -> int:
        rng = substream(seed, replication)
        estimator = build_estimator(cfg)
        mu = spec.target_mean
        for size in self._chunks(horizon):
            trajectory = estimator.update_many(spec.sample(rng, size))
            first = trajectory.first_miss(mu)
            if first >= 0:
                return first
        return -1

    def run_coverage(self, cfg: EstimatorConfig, spec: DistributionSpec, horizon: int,
                     replications: int, seed: int, threads: Optional[int] = None) -> CoverageReport:
        """
        覆盖率研究：每一步都检查 ‖center_t − μ‖ ≤ radius_t

        Args:
            cfg: 估计器配置
            spec: 数据分布（覆盖目标为 spec.target_mean）
            horizon: 每个重复实验的样本数
            replications: 重复次数
            seed: 根种子
            threads: 线程数（None 使用引擎配置）

        Returns:
            CoverageReport
        """
        cfg.validate()
        if cfg.method is Method.MOM:
            raise ConfigError("coverage runs do not support the mom baseline", field="method")
        check_compatible(cfg, spec)
        if replications < 1:
            raise ConfigError("replications must be positive", field="replications")

        logger.info("覆盖率实验: %s, horizon=%d, replications=%d", cfg.label, horizon, replications)
        firsts = self._map(lambda r: self._first_miss(cfg, spec, horizon, seed, r), replications, threads)
        report = CoverageReport(method=cfg.label, alpha=cfg.alpha, horizon=horizon, seed=seed,
                                first_miscoverage=list(firsts), se_multiplier=self.config.se_multiplier)
        logger.info("%s: coverage=%.4f", cfg.label, report.coverage_hat)
        return report

    # ---- 宽度曲线 ----

    def _radii_at(self, cfgs: Sequence[EstimatorConfig], spec: DistributionSpec, horizon: int,
                  checkpoints: np.ndarray, seed: int, replication: int) -> np.ndarray:
        rng = substream(seed, replication)
        estimators = [build_estimator(cfg, retain_samples=False) for cfg in cfgs]
        out = np.empty((len(cfgs), len(checkpoints)))
        start = 0
        for size in self._chunks(horizon):
            X = spec.sample(rng, size)
            lo = np.searchsorted(checkpoints, start + 1)
            hi = np.searchsorted(checkpoints, start + size, side="right")
            offsets = checkpoints[lo:hi] - start - 1
            for j, estimator in enumerate(estimators):
                trajectory = estimator.update_many(X)
                out[j, lo:hi] = trajectory.radii[offsets]
            start += size
        if replication % 50 == 0:
            logger.debug("宽度曲线: 重复实验 %d 完成", replication)
        return out

    def run_width_curve(self, cfgs: Sequence[EstimatorConfig], spec: DistributionSpec, horizon: int,
                        replications: int, seed: int, threads: Optional[int] = None) -> List[WidthRecord]:
        """
        宽度曲线：每个方法在对数检查点上的平均半径

        所有方法在同一重复实验中看到同一条数据流；
        记录按检查点排列，同一检查点内保持方法顺序。
        """
        if not cfgs:
            raise ConfigError("at least one estimator is required", field="estimators")
        for cfg in cfgs:
            cfg.validate()
            check_compatible(cfg, spec)
        if replications < 1:
            raise ConfigError("replications must be positive", field="replications")

        checkpoints = log_checkpoints(horizon, self.config.checkpoints_per_decade)
        logger.info("宽度曲线: %d 个方法, %d 个检查点, replications=%d",
                    len(cfgs), len(checkpoints), replications)
        per_rep = self._map(
            lambda r: self._radii_at(cfgs, spec, horizon, checkpoints, seed, r), replications, threads
        )
        stacked = np.stack(per_rep)  # (replications, methods, checkpoints)

        records = []
        for k, t in enumerate(checkpoints):
            for j, cfg in enumerate(cfgs):
                column = stacked[:, j, k]
                if not np.all(np.isfinite(column)):
                    mean, se = math.inf, math.inf
                else:
                    mean = float(column.mean())
                    se = float(column.std(ddof=1) / math.sqrt(len(column))) if len(column) > 1 else 0.0
                records.append(WidthRecord(t=int(t), method=cfg.label, mean_radius=mean, radius_se=se))
        return records


def run_coverage(cfg: EstimatorConfig, spec: DistributionSpec, horizon: int, replications: int,
                 seed: int, threads: Optional[int] = None) -> CoverageReport:
    return MonteCarloSimulator().run_coverage(cfg, spec, horizon, replications, seed, threads)


def run_width_curve(cfgs: Sequence[EstimatorConfig], spec: DistributionSpec, horizon: int,
                    replications: int, seed: int, threads: Optional[int] = None) -> List[WidthRecord]:
    return MonteCarloSimulator().run_width_curve(cfgs, spec, horizon, replications, seed, threads)
