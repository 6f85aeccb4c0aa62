"""
经典 SAX 编码
Gaussian breakpoints, symbolization, symbol distance and MINDIST.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.stats import norm

from .exceptions import InvalidAlpha, ParamMismatch, ParseError, SymbolOutOfRange
from .models import SAX_LETTER_OFFSET, PaaVector, SaxWord

logger = logging.getLogger(__name__)

MIN_ALPHA = 2
MAX_ALPHA = 26


def lookup_matrix(breakpoints: np.ndarray) -> np.ndarray:
    """
    构建符号距离查找表

    相邻或相同符号距离为 0，否则为 bp[max-1] - bp[min]（1-based 符号）。
    SAX 的数值断点和趋势通道的角度断点共用这一结构。
    """
    size = breakpoints.size + 1
    idx = np.arange(size)
    hi = np.maximum.outer(idx, idx)
    lo = np.minimum.outer(idx, idx)
    matrix = np.zeros((size, size), dtype=np.float64)
    far = (hi - lo) > 1
    # 0-based 行列下标
    matrix[far] = breakpoints[hi[far] - 1] - breakpoints[lo[far]]
    return matrix


@dataclass(frozen=True)
class BreakpointTable:
    """N(0,1) 等概率分位点断点表"""

    alpha: int
    betas: Tuple[float, ...]
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        if betas.size != self.alpha - 1 or np.any(np.diff(betas) <= 0):
            raise InvalidAlpha(f"breakpoints for alpha={self.alpha} must be {self.alpha - 1} increasing values")
        matrix = lookup_matrix(betas)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.betas, dtype=np.float64)


@lru_cache(maxsize=None)
def gaussian_breakpoints(alpha: int) -> BreakpointTable:
    """
    计算 alpha 个等概率区间的断点

    Args:
        alpha: 字母表大小, 2..26

    Returns:
        BreakpointTable，断点关于 0 严格对称
    """
    if not MIN_ALPHA <= alpha <= MAX_ALPHA:
        raise InvalidAlpha(f"alpha={alpha} outside [{MIN_ALPHA}, {MAX_ALPHA}]")
    quantiles = norm.ppf(np.arange(1, alpha) / alpha)
    # 强制对称 beta_k = -beta_{alpha-k}
    betas = (quantiles - quantiles[::-1]) / 2.0
    return BreakpointTable(alpha=alpha, betas=tuple(float(b) for b in betas))


def symbolize_matrix(values: np.ndarray, breakpoints: np.ndarray) -> np.ndarray:
    """
    数值映射为 1-based 符号，恰好落在断点上的值取上方符号
    """
    return np.searchsorted(breakpoints, values, side="right") + 1


def sax_symbolize(paa: PaaVector, table: BreakpointTable) -> SaxWord:
    """把 PAA 均值映射为 SAX 单词"""
    symbols = symbolize_matrix(paa.means, table.array)
    return SaxWord(symbols=tuple(symbols.tolist()), alpha=table.alpha,
                   w=paa.segmentation.w, n=paa.segmentation.n)


def symbol_dist(i: int, j: int, table: BreakpointTable) -> float:
    """两个 SAX 符号之间的距离"""
    for symbol in (i, j):
        if not 1 <= symbol <= table.alpha:
            raise SymbolOutOfRange(f"symbol {symbol} outside [1, {table.alpha}]")
    return float(table.matrix[i - 1, j - 1])


def squared_symbol_sums(a_symbols: np.ndarray, b_symbols: np.ndarray,
                        matrix: np.ndarray) -> np.ndarray:
    """
    最后一维上的 sum(dist^2)

    形状可广播；MINDIST、TDIST 和 SAX-TD 共享这一步，保证 TDIST >= MINDIST 逐位精确成立。
    """
    dists = matrix[a_symbols - 1, b_symbols - 1]
    return np.sum(dists * dists, axis=-1)


def check_same_params(a, b, fields=("n", "w", "alpha")):
    mismatched = [name for name in fields if getattr(a, name) != getattr(b, name)]
    if mismatched:
        detail = ", ".join(f"{name}: {getattr(a, name)} vs {getattr(b, name)}" for name in mismatched)
        raise ParamMismatch(f"word parameters differ ({detail})")


def mindist(qw: SaxWord, cw: SaxWord) -> float:
    """MINDIST = sqrt(n/w) * sqrt(sum dist^2)"""
    check_same_params(qw, cw)
    table = gaussian_breakpoints(qw.alpha)
    total = squared_symbol_sums(np.asarray(qw.symbols), np.asarray(cw.symbols), table.matrix)
    return float(np.sqrt((qw.n / qw.w) * total))


def parse_sax_word(text: str, alpha: int, n: int) -> SaxWord:
    """解析 SAX 单词，大小写不敏感"""
    letters = "".join(text.split()).lower()
    if not letters or not (letters.isascii() and letters.isalpha()):
        raise ParseError(f"not a SAX word: {text!r}")
    symbols = tuple(ord(ch) - SAX_LETTER_OFFSET + 1 for ch in letters)
    return SaxWord(symbols=symbols, alpha=alpha, w=len(symbols), n=n)
