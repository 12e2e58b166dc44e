"""
simulator 模块测试：覆盖率研究、宽度曲线与检查点
"""
import dataclasses

import numpy as np
import pytest

from config.config import default_harness_config
from core import ConfigError
from estimators import AnytimeEB, AnytimeSubPsi, Constant, EstimatorConfig, Method
from simlab import (
    BetaProduct, CoverageReport, GaussianIso, MonteCarloSimulator, PointMass, log_checkpoints, run_coverage,
    run_width_curve,
)
from special import GaussianPsi


def eb_config(d=2, name=None, schedule=None):
    return EstimatorConfig(method=Method.EB, d=d, alpha=0.1, B=1.0,
                           schedule=schedule or AnytimeEB(alpha=0.1), name=name)


class TestCheckpoints:
    """对数间隔检查点"""

    def test_endpoints_and_order(self):
        grid = log_checkpoints(1000, 10)
        assert grid[0] == 1
        assert grid[-1] == 1000
        assert np.all(np.diff(grid) > 0)
        assert len(grid) <= 31

    def test_single_step(self):
        np.testing.assert_array_equal(log_checkpoints(1), [1])

    def test_awkward_horizon(self):
        grid = log_checkpoints(12345, 5)
        assert grid[-1] == 12345
        assert np.all(np.diff(grid) > 0)

    def test_rejects_zero(self):
        with pytest.raises(ConfigError):
            log_checkpoints(0)


class TestCoverage:
    """同时覆盖率"""

    def test_point_mass_is_always_covered(self):
        report = run_coverage(eb_config(schedule=Constant(0.5)), PointMass((0.6, 0.0)),
                              horizon=500, replications=5, seed=11)
        assert report.coverage_hat == 1.0
        assert report.first_miscoverage == [-1] * 5
        assert report.passes()

    def test_thread_count_does_not_change_results(self):
        cfg = eb_config()
        spec = BetaProduct(2, 1.0, 1.0, center=True)
        one = run_coverage(cfg, spec, horizon=300, replications=8, seed=5, threads=1)
        four = run_coverage(cfg, spec, horizon=300, replications=8, seed=5, threads=4)
        assert one.first_miscoverage == four.first_miscoverage

    def test_miscoverage_is_monotone_in_horizon(self):
        # σ 被低估 4 倍，未覆盖事件较多
        cfg = EstimatorConfig(method=Method.SUB_PSI, d=2, alpha=0.1, psi=GaussianPsi(1.0),
                              schedule=AnytimeSubPsi(alpha=0.1, sigma=1.0))
        spec = GaussianIso(2, sigma=4.0)
        reports = [run_coverage(cfg, spec, horizon=h, replications=20, seed=17) for h in (50, 500, 5000)]
        counts = [report.miscovered for report in reports]
        assert counts == sorted(counts)
        assert counts[-1] > 0
        for short, long in zip(reports, reports[1:]):
            for a, b in zip(short.first_miscoverage, long.first_miscoverage):
                if a >= 0:
                    assert b == a
                elif b >= 0:
                    assert b > short.horizon

    def test_rows_follow_replication_order(self):
        report = run_coverage(eb_config(), BetaProduct(2, 1.0, 1.0, center=True),
                              horizon=50, replications=3, seed=2)
        rows = report.rows()
        assert [row.replication for row in rows] == [0, 1, 2]
        assert all(row.method == "eb" for row in rows)

    def test_rejects_mom(self):
        cfg = EstimatorConfig(method=Method.MOM, d=2, alpha=0.1, trace_sigma=2.0)
        with pytest.raises(ConfigError, match="mom"):
            run_coverage(cfg, GaussianIso(2), horizon=10, replications=1, seed=0)

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigError) as exc:
            run_coverage(eb_config(d=3), BetaProduct(2, 1.0, 1.0, center=True),
                         horizon=10, replications=1, seed=0)
        assert "d" in exc.value.fields

    def test_bounded_method_needs_bounded_data(self):
        with pytest.raises(ConfigError) as exc:
            run_coverage(eb_config(), GaussianIso(2), horizon=10, replications=1, seed=0)
        assert "distribution" in exc.value.fields

    def test_rejects_zero_replications(self):
        with pytest.raises(ConfigError):
            run_coverage(eb_config(), BetaProduct(2, 1.0, 1.0, center=True), horizon=10, replications=0, seed=0)


class TestCoverageReport:
    def test_statistics(self):
        report = CoverageReport(method="eb", alpha=0.1, horizon=100, seed=0,
                                first_miscoverage=[-1] * 18 + [5, 40])
        assert report.replications == 20
        assert report.miscovered == 2
        assert report.coverage_hat == pytest.approx(0.9)
        assert report.binomial_se == pytest.approx(np.sqrt(0.9 * 0.1 / 20))
        assert report.threshold == pytest.approx(0.9 - 2.0 * report.binomial_se)
        assert report.passes()


class TestWidthCurve:
    """宽度曲线"""

    def test_records_interleave_methods(self):
        cfgs = [eb_config(name="a"), eb_config(name="b", schedule=Constant(0.3))]
        records = run_width_curve(cfgs, BetaProduct(2, 1.0, 1.0, center=True),
                                  horizon=1000, replications=3, seed=4)
        grid = log_checkpoints(1000)
        assert len(records) == 2 * len(grid)
        assert [rec.method for rec in records[:4]] == ["a", "b", "a", "b"]
        assert [rec.t for rec in records[::2]] == list(grid)
        assert all(rec.mean_radius > 0 and rec.radius_se >= 0 for rec in records)

    def test_threads_and_chunking_are_invisible(self):
        cfgs = [eb_config()]
        spec = BetaProduct(2, 1.0, 1.0, center=True)
        base = run_width_curve(cfgs, spec, horizon=1000, replications=4, seed=9, threads=1)
        threaded = run_width_curve(cfgs, spec, horizon=1000, replications=4, seed=9, threads=3)
        assert base == threaded

        small = MonteCarloSimulator(dataclasses.replace(default_harness_config, chunk_size=100))
        chunked = small.run_width_curve(cfgs, spec, horizon=1000, replications=4, seed=9)
        for a, b in zip(base, chunked):
            assert a.t == b.t
            assert a.mean_radius == pytest.approx(b.mean_radius, rel=1e-9)

    def test_infinite_radii_propagate(self):
        cfg = EstimatorConfig(method=Method.STITCHED_EB, d=2, alpha=0.05, B=1.0)
        records = run_width_curve([cfg], BetaProduct(2, 1.0, 1.0, center=True),
                                  horizon=100, replications=2, seed=1)
        assert records[0].t == 1
        assert records[0].mean_radius == float("inf")
        assert np.isfinite(records[-1].mean_radius)

    def test_single_replication_has_zero_se(self):
        records = run_width_curve([eb_config()], BetaProduct(2, 1.0, 1.0, center=True),
                                  horizon=10, replications=1, seed=1)
        assert all(rec.radius_se == 0.0 for rec in records)

    def test_mom_width(self):
        cfg = EstimatorConfig(method=Method.MOM, d=2, alpha=0.1, trace_sigma=2.0)
        records = run_width_curve([cfg], GaussianIso(2), horizon=100, replications=2, seed=1)
        assert records[-1].radius_se == 0.0

    def test_requires_estimators(self):
        with pytest.raises(ConfigError):
            run_width_curve([], GaussianIso(2), horizon=10, replications=1, seed=0)
