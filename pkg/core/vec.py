"""
向量工具：观测值检查、白化矩阵 W = Σ^{-1/2} 与白化变换
"""
from typing import Optional

import numpy as np

from .errors import ConfigError, ObservationError


def as_vec(x, d: Optional[int] = None) -> np.ndarray:
    """
    将输入转换为一维有限浮点向量

    Args:
        x: 类数组输入
        d: 期望维度（None 表示不检查）

    Returns:
        形状为 (d,) 的 float64 数组
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ObservationError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if d is not None and arr.shape[0] != d:
        raise ObservationError(f"dimension mismatch: expected {d}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ObservationError("observation contains NaN or Inf")
    return arr


def as_batch(X, d: Optional[int] = None) -> np.ndarray:
    """将一批观测转换为 (n, d) 数组，检查规则与 as_vec 相同"""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1 and d is not None and d == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ObservationError(f"expected a 2-D batch of observations, got shape {arr.shape}")
    if d is not None and arr.shape[1] != d:
        raise ObservationError(f"dimension mismatch: expected {d}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ObservationError("observation batch contains NaN or Inf")
    return arr


def check_positive_definite(sigma, name: str = "Sigma") -> np.ndarray:
    """检查矩阵对称正定（以 Cholesky 分解成功为准）"""
    mat = np.asarray(sigma, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"{name} must be a square matrix, got shape {mat.shape}", field=name)
    if not np.allclose(mat, mat.T, rtol=1e-10, atol=1e-12):
        raise ConfigError(f"{name} must be symmetric", field=name)
    try:
        np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        raise ConfigError(f"{name} is not positive definite", field=name) from None
    return mat


def inverse_sqrt(sigma) -> np.ndarray:
    """
    计算对称正定矩阵的对称逆平方根 W = Σ^{-1/2}

    Args:
        sigma: 已知协方差矩阵 Σ

    Returns:
        对称矩阵 W，使得 ‖x‖_Σ = ‖W x‖
    """
    mat = check_positive_definite(sigma)
    eigvals, eigvecs = np.linalg.eigh(mat)
    w = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T
    return 0.5 * (w + w.T)


def whiten(x, W: np.ndarray) -> np.ndarray:
    """白化变换 W·x；x 可以是单个向量或 (n, d) 批量"""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return W @ arr
    return arr @ W.T


def unwhiten(x, W: np.ndarray) -> np.ndarray:
    """白化的逆变换 W^{-1}·x（用于把椭球中心映回原坐标）"""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return np.linalg.solve(W, arr)
    return np.linalg.solve(W, arr.T).T


def project_to_ball(X, radius) -> np.ndarray:
    """
    将向量（或批量向量的每一行）投影到半径为 radius 的球上

    radius 可以是标量或长度为 n 的数组；零向量保持为零。
    """
    arr = np.asarray(X, dtype=np.float64)
    single = arr.ndim == 1
    rows = arr.reshape(1, -1) if single else arr
    radius = np.broadcast_to(np.asarray(radius, dtype=np.float64), (rows.shape[0],))
    norms = np.linalg.norm(rows, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(norms > radius, radius / norms, 1.0)
    out = rows * factor[:, None]
    return out[0] if single else out
