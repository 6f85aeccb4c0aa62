"""
距离方法注册表
把 euclid / sax / esax / saxtd / tfsax 统一成 "批量编码 + 向量化距离" 的接口，
供 1-NN 分类、下界审计和运行时间测试使用。
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .baselines import esax_matrix, saxtd_matrix, saxtd_squared_terms
from .exceptions import LengthMismatch, ParamMismatch, UnknownMethod
from .sax_codec import gaussian_breakpoints, squared_symbol_sums, symbolize_matrix
from .series_core import paa_matrix, segment
from .tfsax import tdist_squared_terms
from .trend_codec import angle_breakpoints, trend_angles_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Encoded:
    """一批序列在某个方法下的表示，所有数组第一维为序列下标"""

    method: str
    arrays: Tuple[np.ndarray, ...]
    n: int
    w: Optional[int] = None
    alpha: Optional[int] = None
    alpha_t: Optional[int] = None

    def __len__(self) -> int:
        return int(self.arrays[0].shape[0])

    @property
    def width(self) -> int:
        """每对序列参与计算的元素数"""
        return int(sum(np.prod(array.shape[1:]) for array in self.arrays))

    def rows(self, rows) -> Tuple[np.ndarray, ...]:
        return tuple(array[rows] for array in self.arrays)


class DistanceMethod:
    """距离方法基类"""

    name: str = ""
    uses_params: bool = True
    uses_trend_alpha: bool = False

    def encode(self, matrix: np.ndarray, w: Optional[int] = None, alpha: Optional[int] = None,
               alpha_t: Optional[int] = None) -> Encoded:
        raise NotImplementedError

    def _distances(self, a: Tuple[np.ndarray, ...], b: Tuple[np.ndarray, ...],
                   enc: Encoded) -> np.ndarray:
        """a、b 可广播；返回去掉表示维度后的距离数组"""
        raise NotImplementedError

    def ratio(self, w: Optional[int], n: int) -> float:
        raise NotImplementedError

    def _check_params(self, w, alpha, alpha_t):
        if not self.uses_params:
            return
        if w is None or alpha is None:
            raise ParamMismatch(f"method {self.name!r} needs w and alpha")
        if self.uses_trend_alpha and alpha_t is None:
            raise ParamMismatch(f"method {self.name!r} needs alpha_t")

    @staticmethod
    def _check_compatible(a: Encoded, b: Encoded):
        if (a.method, a.n, a.w, a.alpha, a.alpha_t) != (b.method, b.n, b.w, b.alpha, b.alpha_t):
            raise ParamMismatch("encoded batches were built with different parameters")

    def paired(self, a: Encoded, b: Encoded) -> np.ndarray:
        """逐对距离: a[i] 与 b[i]"""
        self._check_compatible(a, b)
        if len(a) != len(b):
            raise LengthMismatch(f"paired batches differ in size: {len(a)} vs {len(b)}")
        return self._distances(a.arrays, b.arrays, a)

    def pairwise(self, queries: Encoded, candidates: Encoded,
                 chunk_elements: Optional[int] = None) -> np.ndarray:
        """
        全对距离矩阵 (len(queries), len(candidates))

        按查询行分块，控制每块的广播元素数。
        """
        from .tfsax_config import get_config

        self._check_compatible(queries, candidates)
        budget = chunk_elements or get_config().pairwise_chunk_elements
        per_row = max(1, len(candidates) * queries.width)
        step = max(1, budget // per_row)
        out = np.empty((len(queries), len(candidates)), dtype=np.float64)
        expanded = tuple(array[None, ...] for array in candidates.arrays)
        for start in range(0, len(queries), step):
            rows = slice(start, start + step)
            block = tuple(array[:, None, ...] for array in queries.rows(rows))
            out[rows] = self._distances(block, expanded, queries)
        logger.debug(f"[{self.name}] pairwise {out.shape} in blocks of {step} rows")
        return out

    def distance(self, a: np.ndarray, b: np.ndarray, w: Optional[int] = None,
                 alpha: Optional[int] = None, alpha_t: Optional[int] = None) -> float:
        """两条序列之间的距离"""
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise LengthMismatch(f"lengths differ: {a.size} vs {b.size}")
        enc = self.encode(np.vstack([a, b]), w=w, alpha=alpha, alpha_t=alpha_t)
        first = Encoded(enc.method, enc.rows(slice(0, 1)), enc.n, enc.w, enc.alpha, enc.alpha_t)
        second = Encoded(enc.method, enc.rows(slice(1, 2)), enc.n, enc.w, enc.alpha, enc.alpha_t)
        return float(self.paired(first, second)[0])


class EuclideanMethod(DistanceMethod):
    """原始序列欧氏距离，无参数"""

    name = "euclid"
    uses_params = False

    def encode(self, matrix, w=None, alpha=None, alpha_t=None) -> Encoded:
        matrix = np.asarray(matrix, dtype=np.float64)
        return Encoded(self.name, (matrix,), n=matrix.shape[1])

    def _distances(self, a, b, enc):
        diff = a[0] - b[0]
        return np.sqrt(np.sum(diff * diff, axis=-1))

    def ratio(self, w, n):
        return 1.0


class SaxMethod(DistanceMethod):
    name = "sax"

    def encode(self, matrix, w=None, alpha=None, alpha_t=None) -> Encoded:
        self._check_params(w, alpha, alpha_t)
        matrix = np.asarray(matrix, dtype=np.float64)
        segmentation = segment(matrix.shape[1], w)
        symbols = symbolize_matrix(paa_matrix(matrix, segmentation),
                                   gaussian_breakpoints(alpha).array)
        return Encoded(self.name, (symbols,), n=matrix.shape[1], w=w, alpha=alpha)

    def _distances(self, a, b, enc):
        total = squared_symbol_sums(a[0], b[0], gaussian_breakpoints(enc.alpha).matrix)
        return np.sqrt((enc.n / enc.w) * total)

    def ratio(self, w, n):
        return w / n


class EsaxMethod(DistanceMethod):
    name = "esax"

    def encode(self, matrix, w=None, alpha=None, alpha_t=None) -> Encoded:
        self._check_params(w, alpha, alpha_t)
        matrix = np.asarray(matrix, dtype=np.float64)
        segmentation = segment(matrix.shape[1], w)
        symbols = esax_matrix(matrix, segmentation, gaussian_breakpoints(alpha).array)
        return Encoded(self.name, (symbols,), n=matrix.shape[1], w=w, alpha=alpha)

    def _distances(self, a, b, enc):
        total = squared_symbol_sums(a[0], b[0], gaussian_breakpoints(enc.alpha).matrix)
        return np.sqrt((enc.n / (3 * enc.w)) * total)

    def ratio(self, w, n):
        return 3 * w / n


class SaxTdMethod(DistanceMethod):
    name = "saxtd"

    def encode(self, matrix, w=None, alpha=None, alpha_t=None) -> Encoded:
        self._check_params(w, alpha, alpha_t)
        matrix = np.asarray(matrix, dtype=np.float64)
        segmentation = segment(matrix.shape[1], w)
        symbols, deltas = saxtd_matrix(matrix, segmentation, gaussian_breakpoints(alpha).array)
        return Encoded(self.name, (symbols, deltas), n=matrix.shape[1], w=w, alpha=alpha)

    def squared_terms(self, a, b, enc):
        return saxtd_squared_terms(a[0], b[0], a[1], b[1], enc.n, enc.w, enc.alpha)

    def _distances(self, a, b, enc):
        sax_term, trend_term = self.squared_terms(a, b, enc)
        return np.sqrt(sax_term + trend_term)

    def ratio(self, w, n):
        return (2 * w + 1) / n


class TfsaxMethod(DistanceMethod):
    name = "tfsax"
    uses_trend_alpha = True

    def encode(self, matrix, w=None, alpha=None, alpha_t=None) -> Encoded:
        self._check_params(w, alpha, alpha_t)
        matrix = np.asarray(matrix, dtype=np.float64)
        segmentation = segment(matrix.shape[1], w)
        sax_symbols = symbolize_matrix(paa_matrix(matrix, segmentation),
                                       gaussian_breakpoints(alpha).array)
        trend_symbols = symbolize_matrix(trend_angles_matrix(matrix, segmentation),
                                         angle_breakpoints(alpha_t).array)
        return Encoded(self.name, (sax_symbols, trend_symbols), n=matrix.shape[1],
                       w=w, alpha=alpha, alpha_t=alpha_t)

    def squared_terms(self, a, b, enc):
        return tdist_squared_terms(a[0], b[0], a[1], b[1], enc.n, enc.w, enc.alpha, enc.alpha_t)

    def _distances(self, a, b, enc):
        sax_term, trend_term = self.squared_terms(a, b, enc)
        return np.sqrt(sax_term + trend_term)

    def ratio(self, w, n):
        return 2 * w / n


# 所有可用的方法
_METHODS: Dict[str, DistanceMethod] = {
    method.name: method
    for method in (EuclideanMethod(), SaxMethod(), EsaxMethod(), SaxTdMethod(), TfsaxMethod())
}

# 报告中的比较顺序
COMPARED_METHODS = ("sax", "esax", "saxtd", "tfsax")


def get_method(name: str) -> DistanceMethod:
    """按名称获取距离方法"""
    try:
        return _METHODS[name.lower()]
    except KeyError:
        raise UnknownMethod(f"unknown method {name!r}; choose from {sorted(_METHODS)}") from None


def method_names() -> Iterator[str]:
    return iter(sorted(_METHODS))
