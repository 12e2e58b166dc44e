"""
覆盖率验收：四类置信球序列的同时覆盖率 ≥ 1 − α − 2·SE
"""
import pytest

pytestmark = pytest.mark.slow


def run_all(run, simulator):
    return [
        simulator.run_coverage(cfg, run.distribution, run.horizon, run.replications, run.seed)
        for cfg in run.estimators
    ]


class TestSimultaneousCoverage:
    """有界、次高斯与重尾数据上的覆盖率"""

    @pytest.mark.parametrize("name", ["eb_coverage", "subpsi_coverage", "cg_coverage"])
    def test_meets_threshold(self, experiment, simulator, name):
        run = experiment(name)
        (report,) = run_all(run, simulator)
        assert report.replications == 500
        assert report.passes(), (report.coverage_hat, report.threshold)


class TestContamination:
    """Huber 污染：鲁棒EB 覆盖干净均值，普通EB 失效"""

    def test_robust_gap(self, experiment, simulator):
        run = experiment("robust_coverage")
        robust, plain = run_all(run, simulator)
        assert robust.method == "robust_eb"
        assert plain.method == "eb_non_robust"
        assert robust.passes(), (robust.coverage_hat, robust.threshold)
        assert plain.coverage_hat < robust.coverage_hat
        assert not plain.passes()
