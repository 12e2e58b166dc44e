"""
核心模块：异常、向量工具、流式累加状态与置信区域
"""
from .errors import CSSError, ConfigError, NoEstimateError, ObservationError, WeightError
from .vec import as_batch, as_vec, inverse_sqrt, project_to_ball, unwhiten, whiten
from .state import AccumulatorMode, CompensatedSum, StepTrace, StreamState, update, weighted_mean
from .region import ConfidenceRegion

__all__ = [
    'CSSError', 'ConfigError', 'NoEstimateError', 'ObservationError', 'WeightError',
    'as_vec', 'as_batch', 'inverse_sqrt', 'whiten', 'unwhiten', 'project_to_ball',
    'AccumulatorMode', 'CompensatedSum', 'StepTrace', 'StreamState', 'update', 'weighted_mean',
    'ConfidenceRegion',
]
