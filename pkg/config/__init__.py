"""
配置模块：默认参数与运行配置解析
"""
from .config import (
    NumericsConfig, ScheduleDefaults, HarnessConfig, RunConfig,
    default_numerics_config, default_schedule_defaults, default_harness_config,
)

__all__ = [
    'NumericsConfig', 'ScheduleDefaults', 'HarnessConfig', 'RunConfig',
    'default_numerics_config', 'default_schedule_defaults', 'default_harness_config',
]
