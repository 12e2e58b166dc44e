"""
宽度验收：固定时间宽度常数、速率拟合、鲁棒下限与宽度曲线的定性形状
"""
import math

import numpy as np
import pytest

from estimators import AnytimeCG, CatoniGiuliniCSS, Constant, EstimatorConfig, Method, RobustEBCSS
from estimators import robust_constant_lambda_limit
from simlab import BetaProduct, fit_rate, fit_width_records, generate

pytestmark = pytest.mark.slow


def by_method(records):
    out = {}
    for rec in records:
        out.setdefault(rec.method, []).append(rec)
    return out


class TestFixedTimeWidth:
    """√n·W_n ≤ 1.1 × 3.25·σ·√(d·log(1/α))"""

    def test_width_constant(self, experiment, simulator):
        run = experiment("fixed_time_width")
        (cfg,) = run.estimators
        assert cfg.schedule.n == run.horizon
        records = simulator.run_width_curve(run.estimators, run.distribution, run.horizon,
                                            run.replications, run.seed)
        last = records[-1]
        assert last.t == 100_000
        sigma = math.sqrt(run.distribution.variance)
        assert sigma == pytest.approx(math.sqrt(1.0 / 12.0))
        scaled = math.sqrt(last.t) * last.mean_radius
        assert scaled <= 1.10 * 3.25 * sigma * math.sqrt(10 * math.log(20.0))


class TestRates:
    """速率拟合"""

    def test_eb_slope(self, experiment, simulator):
        run = experiment("rate_eb")
        records = simulator.run_width_curve(run.estimators, run.distribution, run.horizon,
                                            run.replications, run.seed)
        (fit,) = fit_width_records(records, run.rate_model, window=run.rate_window)
        assert fit.within(run.slope_range), fit.slope

    def test_cg_slope(self):
        # CG 半径只依赖确定性的 λ 序列，零数据流即可得到完整轨迹
        cfg = EstimatorConfig(method=Method.CATONI, d=1, alpha=0.1, v=1.0, p=2.0,
                              schedule=AnytimeCG(alpha=0.1, v=1.0))
        trajectory = CatoniGiuliniCSS(cfg).update_many(np.zeros((1_000_000, 1)))
        grid = np.unique(np.round(np.logspace(2, 6, 200)).astype(np.int64))
        fit = fit_rate(grid, trajectory.radii[grid - 1])
        assert 0.9 <= fit.slope <= 1.1, fit.slope

    def test_stitched_lil_spread(self, experiment, simulator):
        run = experiment("rate_stitched")
        records = simulator.run_width_curve(run.estimators, run.distribution, run.horizon,
                                            run.replications, run.seed)
        (fit,) = fit_width_records(records, "lil", window=run.rate_window)
        assert fit.spread <= run.max_spread, fit.spread


class TestRobustFloor:
    """ε > 0 时半径收敛到正的下限"""

    def test_constant_lambda_limit(self):
        spec = BetaProduct(4, 2.0, 2.0, center=True)
        cfg = EstimatorConfig(method=Method.ROBUST_EB, d=4, alpha=0.05, B=1.0, eps=0.01,
                              schedule=Constant(0.5))
        trajectory = RobustEBCSS(cfg).update_many(generate(spec, 100_000, seed=31))
        limit = robust_constant_lambda_limit(0.5, spec.variance, 4, 1.0, 0.01)
        floor = 2.0 * 2.0 * math.log1p(math.e ** 2 * 0.01) / (2.0 / 3.0 * 0.5)
        assert trajectory.radii[-1] == pytest.approx(limit, rel=0.05)
        assert trajectory.radii[-1] > floor


class TestWidthCurveShapes:
    """宽度曲线的定性形状"""

    def test_low_variance_curve_is_lower(self, experiment, simulator):
        wide = experiment("width_beta11", horizon=10_000, replications=5)
        narrow = experiment("width_beta5010", horizon=10_000, replications=5)
        a = simulator.run_width_curve(wide.estimators, wide.distribution, wide.horizon,
                                      wide.replications, wide.seed)
        b = simulator.run_width_curve(narrow.estimators, narrow.distribution, narrow.horizon,
                                      narrow.replications, narrow.seed)
        pairs = [(x, y) for x, y in zip(a, b) if x.t >= 100]
        assert pairs
        assert all(y.mean_radius < x.mean_radius for x, y in pairs)

    def test_cg_and_mom_curves(self, experiment, simulator):
        run = experiment("compare_cg_mom", horizon=10_000, replications=3)
        curves = by_method(simulator.run_width_curve(run.estimators, run.distribution, run.horizon,
                                                     run.replications, run.seed))
        assert set(curves) == {"cg", "mom"}
        for rows in curves.values():
            late = [rec.mean_radius for rec in rows if rec.t >= 100]
            assert all(np.isfinite(late))
            assert late[-1] < late[0]
