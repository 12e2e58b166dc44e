"""
速率拟合：log 半径对 log 预测量的最小二乘回归
"""
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from core.errors import CSSError

from .metrics import RateFit, WidthRecord

MIN_POINTS = 20
MIN_DECADES = 3.0
# 各速率模型有定义的最小时刻（不含）
MODEL_DOMAIN = {"sqrt_log_t_over_t": 1.0, "lil": math.e}


class FitError(CSSError):
    """轨迹点数或时间跨度不足以拟合"""


def predictor(t, model: str) -> np.ndarray:
    """
    速率模型的预测量

    sqrt_log_t_over_t: √(log t / t)，要求 t > 1
    lil:               √(log log t / t)，要求 t > e
    """
    t = np.asarray(t, dtype=np.float64)
    if model == "sqrt_log_t_over_t":
        if np.any(t <= 1.0):
            raise FitError("the sqrt_log_t_over_t model needs t > 1")
        return np.sqrt(np.log(t) / t)
    if model == "lil":
        if np.any(t <= math.e):
            raise FitError("the lil model needs t > e")
        return np.sqrt(np.log(np.log(t)) / t)
    raise FitError(f"unknown rate model: {model}")


def fit_rate(t, radii, model: str = "sqrt_log_t_over_t", method: str = "",
             window: Optional[Tuple[float, float]] = None) -> RateFit:
    """
    拟合 log r(t) = slope·log f(t) + intercept

    Args:
        t: 检查点时刻
        radii: 对应半径（非有限值会被丢弃）
        model: sqrt_log_t_over_t 或 lil
        method: 方法标签
        window: 只使用 window[0] ≤ t ≤ window[1] 的点

    Returns:
        RateFit（包含斜率标准误与 max/min(r/f) 离散度）
    """
    t = np.asarray(t, dtype=np.float64)
    r = np.asarray(radii, dtype=np.float64)
    if model not in MODEL_DOMAIN:
        raise FitError(f"unknown rate model: {model}")
    keep = np.isfinite(r) & (r > 0) & (t > MODEL_DOMAIN[model])
    if window is not None:
        keep &= (t >= window[0]) & (t <= window[1])
    t, r = t[keep], r[keep]
    if len(t) < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} checkpoints, got {len(t)}")
    span = math.log10(t.max() / t.min())
    if span < MIN_DECADES - 1e-9:
        raise FitError(f"checkpoints must span at least {MIN_DECADES:g} decades, got {span:.3f}")

    f = predictor(t, model)
    result = linregress(np.log(f), np.log(r))
    ratio = r / f
    return RateFit(
        method=method,
        model=model,
        slope=float(result.slope),
        intercept=float(result.intercept),
        stderr=float(result.stderr),
        spread=float(ratio.max() / ratio.min()),
        n_points=int(len(t)),
        t_min=int(t.min()),
        t_max=int(t.max()),
    )


def fit_width_records(records: Sequence[WidthRecord], model: str,
                      window: Optional[Tuple[float, float]] = None):
    """对宽度曲线中每个方法分别拟合，保持方法出现顺序"""
    methods = list(dict.fromkeys(rec.method for rec in records))
    fits = []
    for name in methods:
        rows = [rec for rec in records if rec.method == name]
        fits.append(fit_rate([rec.t for rec in rows], [rec.mean_radius for rec in rows],
                             model=model, method=name, window=window))
    return fits
