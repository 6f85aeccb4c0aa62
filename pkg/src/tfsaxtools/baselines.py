"""
对比方法: ESAX 与 SAX-TD
两者复用 sax_codec 的断点表与符号距离矩阵
"""

import logging
from typing import Tuple

import numpy as np

from .exceptions import ParamMismatch
from .models import EsaxWord, SaxTdWord, SaxWord, Segmentation
from .sax_codec import check_same_params, gaussian_breakpoints, squared_symbol_sums, symbolize_matrix
from .series_core import SeriesLike, as_values, paa_matrix, segment

logger = logging.getLogger(__name__)

# 同一时刻出现时的先后顺序: max, min, mean
_MAX_RANK, _MIN_RANK, _MEAN_RANK = 0, 1, 2


def esax_matrix(matrix: np.ndarray, segmentation: Segmentation,
                breakpoints: np.ndarray) -> np.ndarray:
    """
    批量 ESAX 编码

    每段输出 max、min、mean 三个符号，按各自出现的时间排序；
    mean 放在段的中间位置 (len-1)//2。

    Returns:
        (m, 3w) 的 1-based 符号矩阵
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    m = matrix.shape[0]
    out = np.empty((m, 3 * segmentation.w), dtype=np.int64)
    starts = segmentation.starts
    lengths = segmentation.lengths

    for length in np.unique(lengths):
        cols = np.flatnonzero(lengths == length)
        index = starts[cols][:, None] + np.arange(length)
        segments = matrix[:, index]  # (m, s, L)

        values = np.stack([segments.max(axis=-1), segments.min(axis=-1),
                           segments.mean(axis=-1)], axis=-1)
        times = np.stack([segments.argmax(axis=-1), segments.argmin(axis=-1),
                          np.full(segments.shape[:2], (length - 1) // 2)], axis=-1)
        ranks = np.array([_MAX_RANK, _MIN_RANK, _MEAN_RANK])
        order = np.argsort(times * 3 + ranks, axis=-1, kind="stable")
        ordered = np.take_along_axis(values, order, axis=-1)

        positions = (3 * cols)[:, None] + np.arange(3)
        out[:, positions] = symbolize_matrix(ordered, breakpoints)
    return out


def esax_encode(series: SeriesLike, w: int, alpha: int) -> EsaxWord:
    """ESAX 编码，单词长度为 3w"""
    values = as_values(series)
    segmentation = segment(values.size, w)
    symbols = esax_matrix(values[None, :], segmentation, gaussian_breakpoints(alpha).array)[0]
    return EsaxWord(symbols=tuple(symbols.tolist()), alpha=alpha, w=w, n=values.size)


def esax_dist(a: EsaxWord, b: EsaxWord) -> float:
    """把 MINDIST 套用在 3w 长的单词上: sqrt(n/(3w)) * sqrt(sum dist^2)"""
    check_same_params(a, b)
    total = squared_symbol_sums(np.asarray(a.symbols), np.asarray(b.symbols),
                                gaussian_breakpoints(a.alpha).matrix)
    return float(np.sqrt((a.n / (3 * a.w)) * total))


def saxtd_matrix(matrix: np.ndarray, segmentation: Segmentation,
                 breakpoints: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    批量 SAX-TD 编码

    Returns:
        symbols: (m, w) 1-based 符号
        deltas: (m, w, 2)，每段 (起点 - 均值, 终点 - 均值)
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    means = paa_matrix(matrix, segmentation)
    starts = segmentation.starts
    ends = starts + segmentation.lengths - 1
    deltas = np.stack([matrix[:, starts] - means, matrix[:, ends] - means], axis=-1)
    return symbolize_matrix(means, breakpoints), deltas


def saxtd_encode(series: SeriesLike, w: int, alpha: int) -> SaxTdWord:
    """SAX-TD 编码"""
    values = as_values(series)
    segmentation = segment(values.size, w)
    symbols, deltas = saxtd_matrix(values[None, :], segmentation, gaussian_breakpoints(alpha).array)
    sax = SaxWord(symbols=tuple(symbols[0].tolist()), alpha=alpha, w=w, n=values.size)
    return SaxTdWord(sax=sax, deltas=tuple(map(tuple, deltas[0].tolist())))


def saxtd_squared_terms(q_symbols: np.ndarray, c_symbols: np.ndarray, q_deltas: np.ndarray,
                        c_deltas: np.ndarray, n: int, w: int, alpha: int):
    """返回 (n/w * sum dist^2, sum td^2)，结构与 TDIST 一致"""
    sax_term = (n / w) * squared_symbol_sums(q_symbols, c_symbols, gaussian_breakpoints(alpha).matrix)
    diff = q_deltas - c_deltas
    trend_term = np.sum(np.sum(diff * diff, axis=-1), axis=-1)
    return sax_term, trend_term


def saxtd_dist(a: SaxTdWord, b: SaxTdWord) -> float:
    """sqrt( n/w * sum [dist^2 + w/n * ((dqs-dcs)^2 + (dqe-dce)^2)] )"""
    check_same_params(a.sax, b.sax)
    if len(a.deltas) != len(b.deltas):
        raise ParamMismatch("SAX-TD delta lengths differ")
    sax_term, trend_term = saxtd_squared_terms(
        np.asarray(a.sax.symbols), np.asarray(b.sax.symbols),
        np.asarray(a.deltas), np.asarray(b.deltas), a.n, a.w, a.sax.alpha)
    return float(np.sqrt(sax_term + trend_term))
