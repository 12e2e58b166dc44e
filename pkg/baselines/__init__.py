"""
基线方法：中位数均值联合界
"""
from .mom import (
    MoMBaseline, MoMConfig, block_count, geometric_median, mom_estimate, mom_union_radius, per_time_budget,
)

__all__ = [
    'MoMConfig', 'MoMBaseline', 'mom_estimate', 'mom_union_radius',
    'geometric_median', 'per_time_budget', 'block_count',
]
