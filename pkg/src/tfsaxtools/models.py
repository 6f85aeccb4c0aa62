"""
数据模型定义
定义时间序列、各类符号单词、审计记录和评测结果的数据结构
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .exceptions import InvalidSeries, LengthMismatch, ParamMismatch, SymbolOutOfRange

SAX_LETTER_OFFSET = ord("a")
TREND_LETTER_OFFSET = ord("A")


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """单条时间序列（可带类别标签）"""

    values: np.ndarray
    label: Optional[int] = None
    id: Optional[str] = None

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1:
            raise InvalidSeries(f"series must be one-dimensional, got shape {values.shape}")
        if values.size < 2:
            raise InvalidSeries(f"series length must be >= 2, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise InvalidSeries("series contains NaN or Inf")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    def with_values(self, values) -> "TimeSeries":
        """返回替换数值、保留标签和 id 的新序列"""
        return TimeSeries(values=values, label=self.label, id=self.id)


@dataclass(frozen=True)
class Segmentation:
    """长度 n 的序列被切成 w 个近似等长的整数段"""

    n: int
    w: int
    bounds: Tuple[Tuple[int, int], ...]

    @property
    def starts(self) -> np.ndarray:
        return np.array([start for start, _ in self.bounds], dtype=np.intp)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([end - start for start, end in self.bounds], dtype=np.intp)


@dataclass(frozen=True, eq=False)
class PaaVector:
    """分段均值 (PAA)"""

    means: np.ndarray
    segmentation: Segmentation

    def __post_init__(self):
        means = _frozen_array(self.means)
        if means.size != self.segmentation.w:
            raise ParamMismatch(
                f"PAA has {means.size} means but segmentation has w={self.segmentation.w}")
        object.__setattr__(self, "means", means)


def _check_symbols(symbols: Tuple[int, ...], size: int, what: str):
    for symbol in symbols:
        if not 1 <= symbol <= size:
            raise SymbolOutOfRange(f"{what} symbol {symbol} outside [1, {size}]")


def render_sax_symbols(symbols) -> str:
    return "".join(chr(SAX_LETTER_OFFSET + int(s) - 1) for s in symbols)


def render_trend_symbols(symbols) -> str:
    return "".join(chr(TREND_LETTER_OFFSET + int(s) - 1) for s in symbols)


@dataclass(frozen=True)
class SaxWord:
    """SAX 单词：w 个 1-based 符号索引"""

    symbols: Tuple[int, ...]
    alpha: int
    w: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.symbols) != self.w:
            raise ParamMismatch(f"SAX word has {len(self.symbols)} symbols, expected w={self.w}")
        _check_symbols(self.symbols, self.alpha, "SAX")

    def __str__(self) -> str:
        return render_sax_symbols(self.symbols)


@dataclass(frozen=True)
class TrendFeature:
    """趋势特征三角形: td 为竖直边, k 为水平边, theta 为角度(度)"""

    td: float
    k: int
    theta: float


@dataclass(frozen=True)
class TrendWord:
    """趋势通道单词，符号渲染为大写字母"""

    symbols: Tuple[int, ...]
    alpha_t: int
    w: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.symbols) != self.w:
            raise ParamMismatch(f"trend word has {len(self.symbols)} symbols, expected w={self.w}")
        _check_symbols(self.symbols, self.alpha_t, "trend")

    def __str__(self) -> str:
        return render_trend_symbols(self.symbols)


@dataclass(frozen=True)
class TfsaxWord:
    """TFSAX 单词：均值通道 + 趋势通道"""

    sax: SaxWord
    trend: TrendWord
    n: int

    def __post_init__(self):
        if self.sax.w != self.trend.w:
            raise ParamMismatch(f"channel widths differ: sax w={self.sax.w}, trend w={self.trend.w}")
        if self.sax.n != self.n:
            raise ParamMismatch(f"sax channel n={self.sax.n} but word n={self.n}")

    @property
    def w(self) -> int:
        return self.sax.w

    def __str__(self) -> str:
        sax = str(self.sax)
        trend = str(self.trend)
        return " ".join(s + t for s, t in zip(sax, trend))


@dataclass(frozen=True)
class EsaxWord:
    """ESAX 单词：每段 (max, min, mean) 三个符号，按出现时间排序"""

    symbols: Tuple[int, ...]
    alpha: int
    w: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(self.symbols) != 3 * self.w:
            raise ParamMismatch(f"ESAX word has {len(self.symbols)} symbols, expected 3w={3 * self.w}")
        _check_symbols(self.symbols, self.alpha, "ESAX")

    def __str__(self) -> str:
        return render_sax_symbols(self.symbols)


@dataclass(frozen=True)
class SaxTdWord:
    """SAX-TD 单词：SAX 符号 + 每段 (起点-均值, 终点-均值)"""

    sax: SaxWord
    deltas: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas",
                           tuple((float(s), float(e)) for s, e in self.deltas))
        if len(self.deltas) != self.sax.w:
            raise ParamMismatch(f"SAX-TD has {len(self.deltas)} deltas, expected w={self.sax.w}")

    @property
    def w(self) -> int:
        return self.sax.w

    @property
    def n(self) -> int:
        return self.sax.n

    def __str__(self) -> str:
        return " ".join(f"{letter}:{start:.6g}:{end:.6g}"
                        for letter, (start, end) in zip(str(self.sax), self.deltas))


@dataclass(frozen=True)
class BoundAuditRecord:
    """单个序列对在单个参数点上的下界审计结果"""

    dataset: str
    pair_id: str
    w: int
    alpha: int
    alpha_t: int
    euclid: float
    mindist_val: float
    tdist_val: float
    saxtd_val: float
    tlb_mindist: float
    tlb_tdist: float
    tlb_saxtd: float

    @property
    def params(self) -> Tuple[int, int, int]:
        return (self.w, self.alpha, self.alpha_t)


@dataclass(frozen=True)
class AuditSummary:
    """某个 (w, alpha, alpha_t) 上的汇总：平均 TLB 与违反下界的计数"""

    dataset: str
    w: int
    alpha: int
    alpha_t: int
    pairs: int
    mean_tlb_mindist: float
    mean_tlb_tdist: float
    mean_tlb_saxtd: float
    mindist_violations: int
    tdist_violations: int
    saxtd_violations: int


@dataclass
class Dataset:
    """带标签的训练/测试划分 (UCR 格式)"""

    name: str
    train: List[TimeSeries] = field(default_factory=list)
    test: List[TimeSeries] = field(default_factory=list)

    def __post_init__(self):
        lengths = {len(series) for series in self.train + self.test}
        if len(lengths) > 1:
            raise LengthMismatch(f"dataset {self.name!r} mixes series lengths {sorted(lengths)}")

    @property
    def n(self) -> int:
        for series in self.train + self.test:
            return len(series)
        return 0

    @property
    def classes(self) -> List[int]:
        return sorted({s.label for s in self.train + self.test if s.label is not None})

    @staticmethod
    def matrix(series: List[TimeSeries]) -> np.ndarray:
        """把序列列表堆叠成 (m, n) 矩阵"""
        if not series:
            return np.empty((0, 0), dtype=np.float64)
        return np.vstack([s.values for s in series])

    @staticmethod
    def labels(series: List[TimeSeries]) -> np.ndarray:
        return np.array([-1 if s.label is None else s.label for s in series], dtype=np.int64)


@dataclass(frozen=True)
class GridSpec:
    """参数网格: w 从 2 开始倍增至 floor(n/2), alpha 为 3..10"""

    w_values: Tuple[int, ...]
    alpha_values: Tuple[int, ...] = tuple(range(3, 11))
    alpha_t_values: Tuple[int, ...] = (5,)

    def __post_init__(self):
        if not self.w_values or not self.alpha_values or not self.alpha_t_values:
            raise ParamMismatch("grid must be nonempty in every dimension")

    @classmethod
    def for_length(cls, n: int, alpha_values: Tuple[int, ...] = tuple(range(3, 11)),
                   alpha_t_values: Tuple[int, ...] = (5,)) -> "GridSpec":
        w_values = []
        w = 2
        while w <= n // 2:
            w_values.append(w)
            w *= 2
        if not w_values:
            raise ParamMismatch(f"series length {n} too short for a doubling w grid")
        return cls(w_values=tuple(w_values), alpha_values=tuple(alpha_values),
                   alpha_t_values=tuple(alpha_t_values))

    def check_length(self, n: int):
        too_large = [w for w in self.w_values if w > n // 2]
        if too_large:
            raise ParamMismatch(f"grid w values {too_large} exceed floor(n/2)={n // 2}")

    def points(self, uses_trend_alpha: bool = True) -> Iterator[Tuple[int, int, Optional[int]]]:
        """按 (w, alpha, alpha_t) 升序枚举网格点"""
        alpha_ts = self.alpha_t_values if uses_trend_alpha else (None,)
        for w in sorted(self.w_values):
            for alpha in sorted(self.alpha_values):
                for alpha_t in sorted(alpha_ts, key=lambda a: -1 if a is None else a):
                    yield (w, alpha, alpha_t)


GridPoint = Tuple[Optional[int], Optional[int], Optional[int]]


def grid_point_key(point: GridPoint, errors: int = 0) -> Tuple[int, int, int, int]:
    """错误数相同时依次偏好较小的 w、alpha、alpha_t"""
    w, alpha, alpha_t = point
    return (errors, -1 if w is None else w, -1 if alpha is None else alpha,
            -1 if alpha_t is None else alpha_t)


@dataclass(frozen=True)
class GridEvaluation:
    """单个网格点的 1-NN 结果"""

    point: GridPoint
    errors: int
    total: int

    @property
    def fpr(self) -> float:
        return self.errors / self.total if self.total else 0.0


@dataclass
class GridSearchResult:
    """网格搜索结果: 选中的参数、其测试集错误率以及全部网格点的评估"""

    method: str
    best: GridPoint
    errors: int
    n_test: int
    selection: str = "test"
    evaluations: List[GridEvaluation] = field(default_factory=list)

    @property
    def fpr(self) -> float:
        return self.errors / self.n_test if self.n_test else 0.0


@dataclass(frozen=True)
class MethodResult:
    """某方法在某数据集上的最优参数与错误率"""

    dataset: str
    method: str
    n: int
    w: Optional[int]
    alpha: Optional[int]
    alpha_t: Optional[int]
    ratio: float
    fpr: float
    errors: int
    n_test: int
    seconds: float
    selection: str = "test"


@dataclass(frozen=True)
class RuntimeRow:
    """运行时间测量：转换 + 分类的墙钟时间"""

    dataset: str
    method: str
    w: int
    alpha: int
    seconds: float


@dataclass(frozen=True)
class AcceptanceCheck:
    """一项验收检查；passed 为 None 表示数据不足无法判断"""

    name: str
    passed: Optional[bool]
    detail: str


@dataclass
class EvalReport:
    """评测报告：分类结果、TLB 汇总与运行时间"""

    results: List[MethodResult] = field(default_factory=list)
    audit_summaries: List[AuditSummary] = field(default_factory=list)
    runtimes: List[RuntimeRow] = field(default_factory=list)
    notes: Dict[str, str] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not (self.results or self.audit_summaries or self.runtimes)
