"""
TFSAX 表示与 TDIST 距离

TFSAX 单词在每段上同时携带 SAX 均值符号和趋势符号；
TDIST 把 MINDIST 与按 w/n 加权的趋势距离合并:

    TDIST = sqrt( n/w * sum_i [ dist(q_i, c_i)^2 + w/n * tfdist(tq_i, tc_i)^2 ] )

文本格式: 版本化的头部行 + 每行一个单词，单词按段写成 "bE bA"。
"""

import logging
import re
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .exceptions import ParamMismatch, ParseError, UnknownMethod, ZeroEuclidean
from .models import SaxWord, TfsaxWord, TrendWord
from .baselines import esax_encode, saxtd_encode
from .sax_codec import (check_same_params, gaussian_breakpoints, sax_symbolize, squared_symbol_sums,
                        symbolize_matrix)
from .series_core import SeriesLike, as_values, euclidean, paa, paa_matrix, segment
from .trend_codec import angle_breakpoints, trend_angles_matrix

logger = logging.getLogger(__name__)

WORD_FORMAT_VERSION = 1
WORD_HEADER_PREFIX = "#tfsaxtools-words"

_UNDERSCORE_STYLE = re.compile(r"(?:[A-Za-z]_[A-Za-z])+")
_UNDERSCORE_PAIR = re.compile(r"([A-Za-z])_([A-Za-z])")


def tfsax_encode(series: SeriesLike, w: int, alpha: int, alpha_t: int = 5) -> TfsaxWord:
    """
    TFSAX 编码

    均值通道为 PAA 均值的 SAX 符号；趋势通道基于每个整数段内的原始（已归一化）点，
    而不是 PAA 均值。

    Args:
        series: 已 z-normalize 的序列
        w: 段数
        alpha: SAX 字母表大小
        alpha_t: 趋势字母表大小 (2..6)
    """
    values = as_values(series)
    segmentation = segment(values.size, w)
    sax_table = gaussian_breakpoints(alpha)
    trend_table = angle_breakpoints(alpha_t)

    row = values[None, :]
    sax_symbols = symbolize_matrix(paa_matrix(row, segmentation)[0], sax_table.array)
    trend_symbols = symbolize_matrix(trend_angles_matrix(row, segmentation)[0], trend_table.array)

    return TfsaxWord(
        sax=SaxWord(symbols=tuple(sax_symbols.tolist()), alpha=alpha, w=w, n=values.size),
        trend=TrendWord(symbols=tuple(trend_symbols.tolist()), alpha_t=alpha_t, w=w),
        n=values.size,
    )


def encode_word(series: SeriesLike, method: str, w: int, alpha: int,
                alpha_t: Optional[int] = None) -> object:
    """按方法名编码单条序列，返回对应的单词对象"""
    method = method.lower()
    if method == "sax":
        return sax_symbolize(paa(series, w), gaussian_breakpoints(alpha))
    if method == "esax":
        return esax_encode(series, w, alpha)
    if method == "saxtd":
        return saxtd_encode(series, w, alpha)
    if method == "tfsax":
        if alpha_t is None:
            raise ParamMismatch("method 'tfsax' needs alpha_t")
        return tfsax_encode(series, w, alpha, alpha_t)
    raise UnknownMethod(f"method {method!r} has no symbolic word form")


def tdist_squared_terms(q_sax: np.ndarray, c_sax: np.ndarray, q_trend: np.ndarray,
                        c_trend: np.ndarray, n: int, w: int, alpha: int,
                        alpha_t: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    返回 (n/w * sum dist^2, sum tfdist^2)

    第一项开方即 MINDIST；两项相加开方即 TDIST。
    """
    sax_term = (n / w) * squared_symbol_sums(q_sax, c_sax, gaussian_breakpoints(alpha).matrix)
    trend_term = squared_symbol_sums(q_trend, c_trend, angle_breakpoints(alpha_t).matrix)
    return sax_term, trend_term


def tdist(qw: TfsaxWord, cw: TfsaxWord) -> float:
    """两个 TFSAX 单词之间的 TDIST"""
    check_same_params(qw, cw, fields=("n", "w"))
    check_same_params(qw.sax, cw.sax)
    if qw.trend.alpha_t != cw.trend.alpha_t:
        raise ParamMismatch(f"alpha_t differs: {qw.trend.alpha_t} vs {cw.trend.alpha_t}")
    sax_term, trend_term = tdist_squared_terms(
        np.asarray(qw.sax.symbols), np.asarray(cw.sax.symbols),
        np.asarray(qw.trend.symbols), np.asarray(cw.trend.symbols),
        qw.n, qw.w, qw.sax.alpha, qw.trend.alpha_t)
    return float(np.sqrt(sax_term + trend_term))


def tlb(pair: Tuple[SeriesLike, SeriesLike], method: str = "tfsax",
        params: Optional[Dict[str, int]] = None) -> float:
    """
    TLB = 下界距离 / 欧氏距离

    Args:
        pair: 两条已归一化序列
        method: sax / esax / saxtd / tfsax / euclid
        params: w, alpha, alpha_t

    Raises:
        ZeroEuclidean: 两条序列相同
    """
    # 在这里导入避免循环导入
    from .distance_methods import get_method

    a, b = pair
    euclid = euclidean(a, b)
    if euclid == 0.0:
        raise ZeroEuclidean("identical series: TLB is undefined")
    distance_method = get_method(method)
    return distance_method.distance(as_values(a), as_values(b), **(params or {})) / euclid


def parse_tfsax_word(text: str, alpha: int, alpha_t: int, n: int) -> TfsaxWord:
    """
    解析 TFSAX 单词

    接受规范格式 "bE bA" 以及 "F_dE_f" 形式（均值符号_趋势符号），大小写不敏感。
    """
    compact = "".join(text.split())
    if "_" in compact:
        if not _UNDERSCORE_STYLE.fullmatch(compact):
            raise ParseError(f"not a TFSAX word: {text!r}")
        pairs = _UNDERSCORE_PAIR.findall(compact)
    else:
        tokens = text.split()
        if not tokens or any(len(token) != 2 or not (token.isascii() and token.isalpha())
                             for token in tokens):
            raise ParseError(f"not a TFSAX word: {text!r}")
        pairs = [(token[0], token[1]) for token in tokens]

    sax_symbols = tuple(ord(s.lower()) - ord("a") + 1 for s, _ in pairs)
    trend_symbols = tuple(ord(t.upper()) - ord("A") + 1 for _, t in pairs)
    w = len(pairs)
    return TfsaxWord(
        sax=SaxWord(symbols=sax_symbols, alpha=alpha, w=w, n=n),
        trend=TrendWord(symbols=trend_symbols, alpha_t=alpha_t, w=w),
        n=n,
    )


def format_word_header(method: str, params: Dict[str, Optional[int]]) -> str:
    """版本化头部行，参数按名称排序"""
    fields = " ".join(f"{key}={value}" for key, value in sorted(params.items()) if value is not None)
    return f"{WORD_HEADER_PREFIX} v{WORD_FORMAT_VERSION} method={method} {fields}".rstrip()


def format_words(words: Iterable[object], method: str, params: Dict[str, Optional[int]]) -> str:
    """头部行 + 每行一个单词"""
    lines = [format_word_header(method, params)]
    lines.extend(str(word) for word in words)
    return "\n".join(lines) + "\n"


def parse_word_file(text: str) -> Tuple[str, Dict[str, int], List[str]]:
    """
    解析单词文件

    Returns:
        (method, params, 原始单词行列表)
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith(WORD_HEADER_PREFIX):
        raise ParseError("missing word file header", line_number=1)
    parts = lines[0].split()
    if len(parts) < 3 or parts[1] != f"v{WORD_FORMAT_VERSION}":
        raise ParseError(f"unsupported word file version: {lines[0]!r}", line_number=1)
    fields = {}
    for part in parts[2:]:
        key, _, value = part.partition("=")
        if not value:
            raise ParseError(f"malformed header field {part!r}", line_number=1)
        fields[key] = value
    method = fields.pop("method", None)
    if method is None:
        raise ParseError("header has no method tag", line_number=1)
    try:
        params = {key: int(value) for key, value in fields.items()}
    except ValueError as exc:
        raise ParseError(f"non-integer header parameter: {exc}", line_number=1) from exc
    words = [line for line in lines[1:] if line.strip()]
    return method, params, words
