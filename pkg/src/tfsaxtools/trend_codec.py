"""
趋势特征提取与符号化

每段的趋势特征三角形以趋势距离因子 td (终点 - 起点) 为竖直边、
趋势形状因子 K (趋势点个数，至少为 1) 为水平边，角度 theta = atan(td / K)。
角度按固定的角度断点表映射为大写符号，符号之间的距离为 tan(角度差)。
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exceptions import SymbolOutOfRange, UnsupportedTrendAlpha, ParseError
from .models import TREND_LETTER_OFFSET, Segmentation, TrendFeature, TrendWord
from .sax_codec import lookup_matrix, symbolize_matrix

logger = logging.getLogger(__name__)

# 各 alpha_t 的角度断点 (度)
ANGLE_BREAKPOINTS: Dict[int, Tuple[float, ...]] = {
    2: (0.0,),
    3: (-5.0, 5.0),
    4: (-30.0, 0.0, 30.0),
    5: (-30.0, -5.0, 5.0, 30.0),
    6: (-30.0, -5.0, 0.0, 5.0, 30.0),
}


@dataclass(frozen=True)
class AngleBreakpointTable:
    """角度断点表及其 tfdist 查找矩阵"""

    alpha_t: int
    thetas: Tuple[float, ...]
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=np.float64)
        if thetas.size != self.alpha_t - 1 or np.any(np.diff(thetas) <= 0):
            raise UnsupportedTrendAlpha(f"angle breakpoints for alpha_t={self.alpha_t} must be increasing")
        if np.any(np.abs(thetas) >= 90.0):
            raise UnsupportedTrendAlpha("angle breakpoints must lie in (-90, 90) degrees")
        matrix = np.tan(np.radians(lookup_matrix(thetas)))
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.thetas, dtype=np.float64)


def _trend_point_mask(values: np.ndarray) -> np.ndarray:
    """
    沿最后一维标记内部趋势点

    条件 1: (x_i - x_{i-1})(x_{i+1} - x_i) < 0
    条件 2: 乘积为 0 且两侧差分不相等
    """
    diffs = np.diff(values, axis=-1)
    left = diffs[..., :-1]
    right = diffs[..., 1:]
    product = left * right
    return (product < 0) | ((product == 0) & (left != right))


def trend_points(segment: Sequence[float]) -> List[int]:
    """
    返回趋势点的 1-based 下标 (2 <= i <= len-1)，升序
    """
    values = np.asarray(segment, dtype=np.float64)
    if values.size < 3:
        return []
    return [int(i) + 2 for i in np.flatnonzero(_trend_point_mask(values))]


def trend_shape_factor(segment: Sequence[float]) -> int:
    """K = max(1, 趋势点个数)"""
    return max(1, len(trend_points(segment)))


def trend_distance_factor(segment: Sequence[float]) -> float:
    """td = (终点 - 均值) - (起点 - 均值) = 终点 - 起点"""
    values = np.asarray(segment, dtype=np.float64)
    return float(values[-1] - values[0])


def trend_angle(segment: Sequence[float]) -> TrendFeature:
    """构造趋势特征三角形，theta 以度表示，上升趋势为正"""
    td = trend_distance_factor(segment)
    k = trend_shape_factor(segment)
    theta = float(np.degrees(np.arctan(td / k)))
    return TrendFeature(td=td, k=k, theta=theta)


def trend_features_matrix(matrix: np.ndarray,
                          segmentation: Segmentation) -> Tuple[np.ndarray, np.ndarray]:
    """
    批量计算每行每段的 (td, K)

    Args:
        matrix: (m, n) 已归一化序列
        segmentation: 整数分段

    Returns:
        td: (m, w) 浮点, k: (m, w) 整数
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    m = matrix.shape[0]
    td = np.zeros((m, segmentation.w), dtype=np.float64)
    k = np.ones((m, segmentation.w), dtype=np.int64)
    starts = segmentation.starts
    lengths = segmentation.lengths

    # 近似等长分段最多两种段长，按段长分组整体向量化
    for length in np.unique(lengths):
        cols = np.flatnonzero(lengths == length)
        if length < 2:
            continue
        index = starts[cols][:, None] + np.arange(length)
        segments = matrix[:, index]  # (m, len(cols), length)
        td[:, cols] = segments[..., -1] - segments[..., 0]
        if length >= 3:
            counts = _trend_point_mask(segments).sum(axis=-1)
            k[:, cols] = np.maximum(1, counts)
    return td, k


def trend_angles_matrix(matrix: np.ndarray, segmentation: Segmentation) -> np.ndarray:
    """批量计算角度 (度)，形状 (m, w)"""
    td, k = trend_features_matrix(matrix, segmentation)
    return np.degrees(np.arctan(td / k))


@lru_cache(maxsize=None)
def angle_breakpoints(alpha_t: int) -> AngleBreakpointTable:
    """返回 alpha_t 对应的角度断点"""
    if alpha_t not in ANGLE_BREAKPOINTS:
        raise UnsupportedTrendAlpha(f"alpha_t={alpha_t} outside 2..6")
    return AngleBreakpointTable(alpha_t=alpha_t, thetas=ANGLE_BREAKPOINTS[alpha_t])


def trend_symbolize(features: Sequence[TrendFeature], table: AngleBreakpointTable) -> TrendWord:
    """角度映射为趋势符号，恰好在断点上的角度取上方符号"""
    thetas = np.array([feature.theta for feature in features], dtype=np.float64)
    symbols = symbolize_matrix(thetas, table.array)
    return TrendWord(symbols=tuple(symbols.tolist()), alpha_t=table.alpha_t, w=len(features))


def tfdist(i: int, j: int, table: AngleBreakpointTable) -> float:
    """趋势符号距离: 相邻符号为 0，否则 tan(theta_{max-1} - theta_min)"""
    for symbol in (i, j):
        if not 1 <= symbol <= table.alpha_t:
            raise SymbolOutOfRange(f"trend symbol {symbol} outside [1, {table.alpha_t}]")
    return float(table.matrix[i - 1, j - 1])


def parse_trend_word(text: str, alpha_t: int) -> TrendWord:
    """解析趋势单词，大小写不敏感"""
    letters = "".join(text.split()).upper()
    if not letters or not (letters.isascii() and letters.isalpha()):
        raise ParseError(f"not a trend word: {text!r}")
    symbols = tuple(ord(ch) - TREND_LETTER_OFFSET + 1 for ch in letters)
    return TrendWord(symbols=symbols, alpha_t=alpha_t, w=len(symbols))
