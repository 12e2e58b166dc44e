"""
流式累加器：所有估计器共享的在线状态

StreamState 记录一条观测流的
    t, Σλ_i, Σλ_i², Σλ_i·g_i(X_i), ΣX_i, quad_sum, var_sum
其中 quad_sum 的含义由累加模式决定，var_sum = Σ‖X_i − μ̄_{i−1}‖²，μ̄_0 = 0。
所有累加都使用 Neumaier 补偿求和，10⁶ 步的流不会产生漂移。
"""
import copy
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from config.config import default_numerics_config
from special.psi import PSI_EXPONENTIAL, PsiKind

from .errors import ConfigError, NoEstimateError, ObservationError, WeightError
from .vec import as_batch, as_vec, project_to_ball


class AccumulatorMode(Enum):
    """quad_sum 与 weighted_sum 的累加方式"""
    EB = "eb"                          # quad += ψ_E(λ)·‖X − μ̄_{t−1}‖²
    SUB_PSI = "sub_psi"                # quad += ψ(λ)
    CATONI = "catoni"                  # weighted += λ·th(X)，quad 不使用
    SEMI_EMPIRICAL = "semi_empirical"  # quad += λ²(‖X‖² + v^{2/p})
    PLAIN = "plain"                    # 只维护计数、均值与方差代理


class CompensatedSum:
    """Neumaier 补偿求和，支持标量和向量"""
    __slots__ = ("_sum", "_comp", "_enabled")

    def __init__(self, shape=(), enabled: bool = True):
        self._sum = np.zeros(shape)
        self._comp = np.zeros(shape)
        self._enabled = enabled

    def add(self, value):
        value = np.asarray(value, dtype=np.float64)
        total = self._sum + value
        if self._enabled:
            self._comp = self._comp + np.where(
                np.abs(self._sum) >= np.abs(value),
                (self._sum - total) + value,
                (value - total) + self._sum,
            )
        self._sum = total

    @property
    def value(self):
        out = self._sum + self._comp
        return float(out) if out.ndim == 0 else out


@dataclass
class StepTrace:
    """update_many 产生的逐步轨迹（第 i 行对应时刻 t[i] 的状态）"""
    t: np.ndarray              # (n,)
    lambdas: np.ndarray        # (n,)
    sum_lambda: np.ndarray     # (n,)
    sum_lambda_sq: np.ndarray  # (n,)
    quad_sum: np.ndarray       # (n,)
    var_sum: np.ndarray        # (n,)
    weighted_sum: np.ndarray   # (n, d)
    running_sum: np.ndarray    # (n, d)

    def __len__(self) -> int:
        return len(self.t)

    def weighted_mean(self) -> np.ndarray:
        return self.weighted_sum / self.sum_lambda[:, None]

    def running_mean(self) -> np.ndarray:
        return self.running_sum / self.t[:, None]


class StreamState:
    """
    单条观测流的在线累加状态（单写者）

    Args:
        d: 观测维度
        mode: 累加模式
        cap: λ 上限（更新时 λ 必须落在 (0, cap]）
        psi: SUB_PSI 模式使用的 ψ
        moment_scale: SEMI_EMPIRICAL 模式的 v^{2/p}
        bound: 观测范数上界 B（None 表示不检查）
    """

    def __init__(
        self,
        d: int,
        mode: AccumulatorMode = AccumulatorMode.EB,
        cap: float = math.inf,
        psi: Optional[PsiKind] = None,
        moment_scale: float = 0.0,
        bound: Optional[float] = None,
    ):
        if int(d) != d or d < 1:
            raise ConfigError(f"d must be a positive integer, got {d}", field="d")
        if mode is AccumulatorMode.SUB_PSI and psi is None:
            raise ConfigError("sub_psi accumulation requires a psi", field="psi")
        self.d = int(d)
        self.mode = AccumulatorMode(mode)
        self.cap = float(cap)
        self.psi = psi
        self.moment_scale = float(moment_scale)
        self.bound = bound
        self.t = 0

        kahan = default_numerics_config.kahan
        self._sum_lambda = CompensatedSum(enabled=kahan)
        self._sum_lambda_sq = CompensatedSum(enabled=kahan)
        self._quad = CompensatedSum(enabled=kahan)
        self._var = CompensatedSum(enabled=kahan)
        self._weighted = CompensatedSum((self.d,), enabled=kahan)
        self._running = CompensatedSum((self.d,), enabled=kahan)

    # ---- 读取 ----

    @property
    def sum_lambda(self) -> float:
        return self._sum_lambda.value

    @property
    def sum_lambda_sq(self) -> float:
        return self._sum_lambda_sq.value

    @property
    def quad_sum(self) -> float:
        return self._quad.value

    @property
    def var_sum(self) -> float:
        return self._var.value

    @property
    def weighted_sum(self) -> np.ndarray:
        return self._weighted.value

    @property
    def running_sum(self) -> np.ndarray:
        return self._running.value

    @property
    def running_mean(self) -> np.ndarray:
        """μ̄_t，t = 0 时为零向量"""
        if self.t == 0:
            return np.zeros(self.d)
        return self._running.value / self.t

    @property
    def sigma2_hat(self) -> float:
        """σ̂_t² = var_sum / t，约定 σ̂_0² = 1"""
        if self.t == 0:
            return 1.0
        return self._var.value / self.t

    def snapshot(self) -> "StreamState":
        """返回独立副本，可在其他线程中读取"""
        return copy.deepcopy(self)

    # ---- 检查 ----

    def _check_lambdas(self, lam: np.ndarray):
        if not np.all(np.isfinite(lam)):
            raise WeightError("lambda must be finite")
        if np.any(lam <= 0.0):
            raise WeightError(f"lambda must be positive, got {float(np.min(lam))}")
        if np.any(lam > self.cap):
            raise WeightError(f"lambda={float(np.max(lam))} exceeds the cap {self.cap}")

    def _check_bound(self, X: np.ndarray):
        if self.bound is None:
            return
        norms = np.linalg.norm(X, axis=-1)
        limit = self.bound * (1.0 + default_numerics_config.bound_rtol)
        if np.any(norms > limit):
            raise ObservationError(
                f"observation norm {float(np.max(norms)):.6g} exceeds the bound B={self.bound}"
            )

    def _quad_increment(self, X: np.ndarray, lam: np.ndarray, z2: np.ndarray) -> np.ndarray:
        if self.mode is AccumulatorMode.EB:
            return PSI_EXPONENTIAL(lam) * z2
        if self.mode is AccumulatorMode.SUB_PSI:
            return np.asarray(self.psi(lam), dtype=np.float64)
        if self.mode is AccumulatorMode.SEMI_EMPIRICAL:
            return lam * lam * (np.einsum("ij,ij->i", X, X) + self.moment_scale)
        return np.zeros_like(lam)

    def _transform(self, X: np.ndarray, lam: np.ndarray) -> np.ndarray:
        if self.mode is AccumulatorMode.CATONI:
            return project_to_ball(X, 1.0 / lam)
        return X

    # ---- 更新 ----

    def update(self, x, lam: float) -> "StreamState":
        """
        吸收一个观测

        Args:
            x: 观测向量
            lam: 本步权重 λ_t（由调度器在看到 x 之前给出）

        Returns:
            self（原地更新）
        """
        x = as_vec(x, self.d)
        lam_arr = np.array([float(lam)])
        self._check_lambdas(lam_arr)
        self._check_bound(x)

        diff = x - self.running_mean
        z2 = np.array([float(diff @ diff)])
        row = x[None, :]
        g = self._transform(row, lam_arr)[0]
        lam_f = lam_arr[0]

        self._sum_lambda.add(lam_f)
        self._sum_lambda_sq.add(lam_f * lam_f)
        self._weighted.add(lam_f * g)
        self._running.add(x)
        self._quad.add(self._quad_increment(row, lam_arr, z2)[0])
        self._var.add(z2[0])
        self.t += 1
        return self

    def deviations(self, X) -> Tuple[np.ndarray, np.ndarray]:
        """
        预先计算一批观测的偏差，不修改状态

        Returns:
            (z2, sigma2_prev)：z2[i] = ‖X_i − μ̄_{i−1}‖²，
            sigma2_prev[i] = σ̂²_{i−1}（σ̂_0² = 1）
        """
        X = as_batch(X, self.d)
        n = X.shape[0]
        counts = self.t + np.arange(n)
        prefix = np.zeros_like(X)
        if n > 1:
            prefix[1:] = np.cumsum(X[:-1], axis=0)
        prev_sums = self._running.value + prefix
        safe = np.maximum(counts, 1)[:, None]
        means = np.where(counts[:, None] > 0, prev_sums / safe, 0.0)
        diff = X - means
        z2 = np.einsum("ij,ij->i", diff, diff)

        var_prefix = np.zeros(n)
        if n > 1:
            var_prefix[1:] = np.cumsum(z2[:-1])
        var_prev = self._var.value + var_prefix
        sigma2_prev = np.where(counts > 0, var_prev / np.maximum(counts, 1), 1.0)
        return z2, sigma2_prev

    def advance(self, X, lambdas, z2: Optional[np.ndarray] = None) -> StepTrace:
        """
        批量吸收观测并返回逐步轨迹，与逐个 update 等价（补偿求和在块级别进行）

        Args:
            X: (n, d) 观测
            lambdas: (n,) 权重，第 i 个只能依赖 X_0..X_{i-1}
            z2: deviations 的结果（可省略）
        """
        X = as_batch(X, self.d)
        n = X.shape[0]
        lam = np.asarray(lambdas, dtype=np.float64).reshape(-1)
        if lam.shape[0] != n:
            raise WeightError(f"expected {n} lambdas, got {lam.shape[0]}")
        self._check_lambdas(lam)
        self._check_bound(X)
        if z2 is None:
            z2, _ = self.deviations(X)

        g = self._transform(X, lam)
        wx = lam[:, None] * g
        lam_sq = lam * lam
        quad_inc = self._quad_increment(X, lam, z2)

        trace = StepTrace(
            t=self.t + np.arange(1, n + 1),
            lambdas=lam,
            sum_lambda=self._sum_lambda.value + np.cumsum(lam),
            sum_lambda_sq=self._sum_lambda_sq.value + np.cumsum(lam_sq),
            quad_sum=self._quad.value + np.cumsum(quad_inc),
            var_sum=self._var.value + np.cumsum(z2),
            weighted_sum=self._weighted.value + np.cumsum(wx, axis=0),
            running_sum=self._running.value + np.cumsum(X, axis=0),
        )

        self._sum_lambda.add(np.sum(lam))
        self._sum_lambda_sq.add(np.sum(lam_sq))
        self._weighted.add(np.sum(wx, axis=0))
        self._running.add(np.sum(X, axis=0))
        self._quad.add(np.sum(quad_inc))
        self._var.add(np.sum(z2))
        self.t += n
        return trace


def update(state: StreamState, x, lam: float, mode: Optional[AccumulatorMode] = None) -> StreamState:
    """更新流状态；指定 mode 时必须与状态的累加模式一致"""
    if mode is not None and AccumulatorMode(mode) is not state.mode:
        raise ConfigError(
            f"state accumulates in {state.mode.value} mode, not {AccumulatorMode(mode).value}",
            field="mode",
        )
    return state.update(x, lam)


def weighted_mean(state: StreamState) -> np.ndarray:
    """加权均值 Σλ_i·g_i(X_i) / Σλ_i"""
    if state.t == 0:
        raise NoEstimateError()
    return state.weighted_sum / state.sum_lambda
