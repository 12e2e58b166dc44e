"""
实验模块：数据生成、蒙特卡洛引擎、结果记录与速率拟合
"""
from .fitting import FitError, fit_rate, fit_width_records, predictor
from .generator import (
    DISTRIBUTIONS, BetaProduct, DistributionSpec, GaussianCov, GaussianIso, HeavyTail, HuberMix, PointMass,
    build_distribution, generate, substream,
)
from .metrics import CoverageReport, CoverageRow, RateFit, WidthRecord
from .simulator import MonteCarloSimulator, check_compatible, log_checkpoints, run_coverage, run_width_curve

__all__ = [
    'DistributionSpec', 'BetaProduct', 'GaussianIso', 'GaussianCov', 'HeavyTail', 'PointMass', 'HuberMix',
    'DISTRIBUTIONS', 'build_distribution', 'generate', 'substream',
    'CoverageReport', 'CoverageRow', 'WidthRecord', 'RateFit',
    'MonteCarloSimulator', 'run_coverage', 'run_width_curve', 'log_checkpoints', 'check_compatible',
    'fit_rate', 'fit_width_records', 'predictor', 'FitError',
]
