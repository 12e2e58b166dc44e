"""
估计器模块：六类置信球序列、λ 调度器与按方法名构造的注册表
"""
from .base import ConfidenceSphereSequence, EstimatorConfig, Method, Trajectory
from .catoni import CatoniGiuliniCSS, cg_radius, cg_threshold
from .eb import EmpiricalBernsteinCSS, asymptotic_eb_width, eb_radius
from .robust import RobustEBCSS, robust_constant_lambda_limit, robust_eb_radius, robust_var_limit
from .schedules import (
    SCHEDULES, AnytimeCG, AnytimeEB, AnytimeSubPsi, Constant, FixedTimeCG, FixedTimeEB,
    LambdaSchedule, RobustFixedTime, RobustVar, build_schedule, optimal_c, schedule_fields, zeta_alpha,
)
from .semi_empirical import SemiEmpiricalCSS, semi_empirical_radius
from .stitched import (
    StitchedEBCSS, StitchedSubGammaCSS, ell, epoch_of, stitched_eb_radius, stitched_subgamma_radius,
)
from .subpsi import SubPsiCSS, subpsi_radius

ESTIMATORS = {
    Method.EB: EmpiricalBernsteinCSS,
    Method.SUB_PSI: SubPsiCSS,
    Method.CATONI: CatoniGiuliniCSS,
    Method.ROBUST_EB: RobustEBCSS,
    Method.SEMI_EMPIRICAL: SemiEmpiricalCSS,
    Method.STITCHED_EB: StitchedEBCSS,
    Method.STITCHED_SUB_GAMMA: StitchedSubGammaCSS,
}


def build_estimator(cfg: EstimatorConfig, **kwargs):
    """
    根据方法名创建估计器

    Args:
        cfg: 估计器配置
        **kwargs: 传给基线估计器的额外参数

    Returns:
        ConfidenceSphereSequence 或 MoMBaseline 实例
    """
    if cfg.method is Method.MOM:
        from baselines.mom import MoMBaseline
        return MoMBaseline.from_estimator_config(cfg, **kwargs)
    return ESTIMATORS[cfg.method](cfg)


__all__ = [
    'ConfidenceSphereSequence', 'EstimatorConfig', 'Method', 'Trajectory', 'ESTIMATORS', 'build_estimator',
    'EmpiricalBernsteinCSS', 'SubPsiCSS', 'CatoniGiuliniCSS', 'RobustEBCSS', 'SemiEmpiricalCSS',
    'StitchedEBCSS', 'StitchedSubGammaCSS',
    'eb_radius', 'subpsi_radius', 'cg_threshold', 'cg_radius', 'robust_eb_radius',
    'semi_empirical_radius', 'stitched_eb_radius', 'stitched_subgamma_radius',
    'asymptotic_eb_width', 'robust_constant_lambda_limit', 'robust_var_limit', 'ell', 'epoch_of',
    'LambdaSchedule', 'Constant', 'FixedTimeEB', 'AnytimeEB', 'AnytimeCG', 'FixedTimeCG',
    'AnytimeSubPsi', 'RobustVar', 'RobustFixedTime', 'SCHEDULES', 'build_schedule',
    'schedule_fields', 'optimal_c', 'zeta_alpha',
]
