"""
示例脚本：展示如何在代码中使用置信球序列
"""
import math
import os
import sys
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np

from estimators import (
    AnytimeCG, AnytimeEB, EstimatorConfig, Method, build_estimator,
)
from simlab import BetaProduct, HeavyTail, MonteCarloSimulator, substream


def example_streaming():
    """逐个观测更新经验Bernstein 置信球"""
    print("=" * 60)
    print("示例1: 逐个观测更新")
    print("=" * 60)

    d = 10
    spec = BetaProduct(d=d, a=1, b=1, center=True)
    cfg = EstimatorConfig(method=Method.EB, d=d, alpha=0.1, B=spec.norm_bound,
                          schedule=AnytimeEB(alpha=0.1))
    estimator = build_estimator(cfg)

    rng = substream(7, 0)
    for x in spec.sample(rng, 1000):
        region = estimator.update(x)
        if region.t in (10, 100, 1000):
            print(f"t={region.t:<6} radius={region.radius:.4f} contains mu: {region.contains(spec.mean)}")
    return estimator


def example_batch_trajectory():
    """批量更新重尾数据并查看半径轨迹"""
    print("\n" + "=" * 60)
    print("示例2: Catoni-Giulini 批量更新")
    print("=" * 60)

    spec = HeavyTail(d=20, p_moment=2, v=20)
    cfg = EstimatorConfig(method=Method.CATONI, d=20, alpha=0.05, v=20, p=2,
                          schedule=AnytimeCG(alpha=0.05, v=20, p=2))
    estimator = build_estimator(cfg)
    trajectory = estimator.update_many(spec.sample(substream(11, 0), 100_000))

    for t in (100, 1_000, 10_000, 100_000):
        print(f"t={t:<8} radius={trajectory.radii[t - 1]:.4f}")
    print(f"首次未覆盖时刻: {trajectory.first_miss(spec.mean)}")
    return trajectory


def example_coverage():
    """小规模覆盖率实验"""
    print("\n" + "=" * 60)
    print("示例3: 覆盖率实验")
    print("=" * 60)

    d = 10
    spec = BetaProduct(d=d, a=1, b=1, center=True)
    cfg = EstimatorConfig(method=Method.EB, d=d, alpha=0.1, B=math.sqrt(d) / 2,
                          schedule=AnytimeEB(alpha=0.1))
    report = MonteCarloSimulator().run_coverage(cfg, spec, horizon=2000, replications=50, seed=3)
    report.print_summary()
    return report


if __name__ == '__main__':
    np.set_printoptions(precision=4)
    example_streaming()
    example_batch_trajectory()
    example_coverage()
