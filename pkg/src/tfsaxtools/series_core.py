"""
Numeric foundation: z-normalization, near-equal integer segmentation,
piecewise aggregate approximation (PAA) and Euclidean distance.

Every function is pure; batch variants work on (m, n) matrices so the
evaluation harness never loops over series in Python.
"""

import logging
from functools import lru_cache
from typing import Union

import numpy as np

from .exceptions import ConstantSeries, InvalidW, LengthMismatch
from .models import PaaVector, Segmentation, TimeSeries

logger = logging.getLogger(__name__)

CONSTANT_STD_THRESHOLD = 1e-12

SeriesLike = Union[TimeSeries, np.ndarray, list, tuple]


def as_values(series: SeriesLike) -> np.ndarray:
    """
    TimeSeries 或数组统一转成 float64 一维数组

    原始数组经过与 TimeSeries 相同的校验（一维、长度 >= 2、有限值）。

    Raises:
        InvalidSeries: 形状、长度或数值不合法
    """
    if isinstance(series, TimeSeries):
        return series.values
    return TimeSeries(values=series).values


def znormalize(series: TimeSeries, zeros_on_constant: bool = False) -> TimeSeries:
    """
    z-normalize 整条序列（总体标准差，除以 n）

    Args:
        series: 输入序列
        zeros_on_constant: 常数序列返回全零而不是抛出 ConstantSeries

    Returns:
        均值 0、标准差 1 的新序列
    """
    values = series.values
    std = float(np.std(values))
    if std < CONSTANT_STD_THRESHOLD:
        if zeros_on_constant:
            return series.with_values(np.zeros_like(values))
        name = f" {series.id}" if series.id else ""
        raise ConstantSeries(f"series{name} has standard deviation {std:.3g}")
    return series.with_values((values - values.mean()) / std)


def znormalize_matrix(matrix: np.ndarray, zeros_on_constant: bool = False) -> np.ndarray:
    """按行 z-normalize；常数行按 zeros_on_constant 处理"""
    matrix = np.asarray(matrix, dtype=np.float64)
    means = matrix.mean(axis=1, keepdims=True)
    stds = matrix.std(axis=1, keepdims=True)
    constant = stds[:, 0] < CONSTANT_STD_THRESHOLD
    if constant.any() and not zeros_on_constant:
        rows = np.flatnonzero(constant).tolist()
        raise ConstantSeries(f"constant rows {rows[:10]} cannot be z-normalized")
    safe_stds = np.where(constant[:, None], 1.0, stds)
    normalized = (matrix - means) / safe_stds
    normalized[constant] = 0.0
    return normalized


@lru_cache(maxsize=512)
def segment(n: int, w: int) -> Segmentation:
    """
    把 [0, n) 切成 w 段，第 i 段为 [floor((i-1)n/w), floor(in/w))

    段长最多相差 1，n 不能被 w 整除时也能得到具体的整数边界。
    """
    if n < 1:
        raise InvalidW(f"series length must be positive, got n={n}")
    if w < 1 or w > n:
        raise InvalidW(f"w={w} outside [1, n={n}]")
    bounds = tuple(((i * n) // w, ((i + 1) * n) // w) for i in range(w))
    return Segmentation(n=n, w=w, bounds=bounds)


def paa(series: SeriesLike, w: int) -> PaaVector:
    """PAA: 每段的算术平均"""
    values = as_values(series)
    segmentation = segment(values.size, w)
    means = paa_matrix(values[None, :], segmentation)[0]
    return PaaVector(means=means, segmentation=segmentation)


def paa_matrix(matrix: np.ndarray, segmentation: Segmentation) -> np.ndarray:
    """对 (m, n) 矩阵逐行做 PAA，返回 (m, w)"""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[1] != segmentation.n:
        raise LengthMismatch(
            f"matrix has {matrix.shape[1]} columns, segmentation expects n={segmentation.n}")
    sums = np.add.reduceat(matrix, segmentation.starts, axis=1)
    return sums / segmentation.lengths


def euclidean(a: SeriesLike, b: SeriesLike) -> float:
    """两条等长序列的欧氏距离"""
    a_values = as_values(a)
    b_values = as_values(b)
    if a_values.shape != b_values.shape:
        raise LengthMismatch(f"lengths differ: {a_values.size} vs {b_values.size}")
    diff = a_values - b_values
    return float(np.sqrt(np.dot(diff, diff)))
