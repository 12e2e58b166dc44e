"""
置信区域：某一时刻 t 的球（或白化后的椭球）
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError
from .vec import as_vec, check_positive_definite


@dataclass(frozen=True)
class ConfidenceRegion:
    """
    C_t = {μ : ‖W(μ − center)‖ ≤ radius}

    whitening 为 None 时 W = I（球），否则为椭球 ‖μ − center‖_Σ ≤ radius。
    """
    center: np.ndarray
    radius: float
    t: int
    alpha: float
    whitening: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if math.isnan(self.radius) or self.radius < 0:
            raise ConfigError(f"radius must be non-negative, got {self.radius}", field="radius")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0,1)", field="alpha")
        if self.whitening is not None:
            check_positive_definite(self.whitening, name="whitening")

    @property
    def shape(self) -> str:
        return "sphere" if self.whitening is None else "ellipsoid"

    @property
    def dim(self) -> int:
        return int(np.asarray(self.center).shape[0])

    def distance(self, mu) -> float:
        """μ 到中心的（马氏）距离"""
        diff = as_vec(mu, self.dim) - self.center
        if self.whitening is not None:
            diff = self.whitening @ diff
        return float(np.linalg.norm(diff))

    def contains(self, mu) -> bool:
        return self.distance(mu) <= self.radius
