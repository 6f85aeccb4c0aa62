#!/usr/bin/env python3
"""
SAX 编码测试

验证：
1. 高斯断点（对称、与标准正态分位点一致）
2. 符号化，包括恰好落在断点上的值
3. 符号距离查找表（性质与三角不等式的反例）
4. MINDIST 以及 MINDIST <= 欧氏距离
"""

import sys
import os

import numpy as np
import pytest
from scipy.stats import norm

# 添加src目录到Python路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# 设置清洁的日志配置
from tfsaxtools.log_config import setup_test_logging
setup_test_logging()

from tfsaxtools.exceptions import InvalidAlpha, ParamMismatch, ParseError, SymbolOutOfRange
from tfsaxtools.models import PaaVector, SaxWord
from tfsaxtools.sax_codec import (gaussian_breakpoints, mindist, parse_sax_word, sax_symbolize,
                                  symbol_dist)
from tfsaxtools.series_core import euclidean, paa, segment

GOLDEN_BREAKPOINTS = {
    3: [-0.43, 0.43],
    4: [-0.67, 0.0, 0.67],
    5: [-0.84, -0.25, 0.25, 0.84],
    6: [-0.97, -0.43, 0.0, 0.43, 0.97],
    7: [-1.07, -0.57, -0.18, 0.18, 0.57, 1.07],
}


@pytest.mark.parametrize("alpha", sorted(GOLDEN_BREAKPOINTS))
def test_breakpoints_golden(alpha):
    """测试常用字母表大小的断点（两位小数）"""
    table = gaussian_breakpoints(alpha)
    np.testing.assert_allclose(table.array, GOLDEN_BREAKPOINTS[alpha], atol=0.005)


def test_breakpoints_alpha_two():
    """测试 alpha=2 的唯一断点为 0"""
    assert gaussian_breakpoints(2).betas == (0.0,)


@pytest.mark.parametrize("alpha", range(2, 27))
def test_breakpoints_symmetric(alpha):
    """测试断点严格递增、关于 0 对称且与分位点一致"""
    betas = gaussian_breakpoints(alpha).array
    assert betas.size == alpha - 1
    assert np.all(np.diff(betas) > 0)
    np.testing.assert_array_equal(betas, -betas[::-1])
    np.testing.assert_allclose(betas, norm.ppf(np.arange(1, alpha) / alpha), atol=1e-12)


@pytest.mark.parametrize("alpha", [0, 1, 27])
def test_breakpoints_invalid(alpha):
    with pytest.raises(InvalidAlpha):
        gaussian_breakpoints(alpha)


def _paa_of(means):
    return PaaVector(means=means, segmentation=segment(len(means), len(means)))


def test_symbolize_examples():
    """测试均值到符号的映射"""
    assert str(sax_symbolize(_paa_of([-1.0, 0.0, 1.0]), gaussian_breakpoints(3))) == "abc"
    assert str(sax_symbolize(_paa_of([0.0, 0.0]), gaussian_breakpoints(4))) == "cc", \
        "恰好落在断点上的值取上方符号"
    for alpha in (3, 7, 10):
        word = sax_symbolize(_paa_of([-10.0, 10.0]), gaussian_breakpoints(alpha))
        assert word.symbols == (1, alpha)


def test_sax_word_of_series():
    """测试整条序列的 SAX 单词参数"""
    values = np.sin(np.linspace(0, 2 * np.pi, 64))
    word = sax_symbolize(paa(values, 8), gaussian_breakpoints(5))
    assert (word.n, word.w, word.alpha) == (64, 8, 5)
    assert len(str(word)) == 8


def test_symbol_dist():
    """测试符号距离"""
    table = gaussian_breakpoints(4)
    assert symbol_dist(1, 1, table) == 0.0
    assert symbol_dist(1, 2, table) == 0.0, "相邻符号距离为 0"
    assert symbol_dist(1, 3, table) == pytest.approx(0.67, abs=0.005)
    assert symbol_dist(1, 4, table) == pytest.approx(1.34, abs=0.01)
    assert symbol_dist(3, 1, table) == symbol_dist(1, 3, table)
    with pytest.raises(SymbolOutOfRange):
        symbol_dist(0, 2, table)
    with pytest.raises(SymbolOutOfRange):
        symbol_dist(1, 5, table)


@pytest.mark.parametrize("alpha", range(2, 11))
def test_symbol_dist_properties(alpha):
    """测试对称、对角为 0、相邻为 0、非负，且随 |i - j| 单调不减"""
    table = gaussian_breakpoints(alpha)
    for i in range(1, alpha + 1):
        assert symbol_dist(i, i, table) == 0.0
        if i < alpha:
            assert symbol_dist(i, i + 1, table) == 0.0
        for j in range(1, alpha + 1):
            assert symbol_dist(i, j, table) >= 0.0
            assert symbol_dist(i, j, table) == symbol_dist(j, i, table)
        # 从 i 向两侧走远，距离不减
        right = [symbol_dist(i, j, table) for j in range(i, alpha + 1)]
        left = [symbol_dist(i, j, table) for j in range(i, 0, -1)]
        assert all(b >= a for a, b in zip(right, right[1:]))
        assert all(b >= a for a, b in zip(left, left[1:]))


@pytest.mark.parametrize("alpha", range(2, 11))
def test_symbol_dist_triangle_inequality(alpha):
    """
    测试三角不等式: j 不在 i、k 之间时成立；j 严格在 i、k 之间时不成立，
    缺口为 j 所在区间的宽度
    """
    table = gaussian_breakpoints(alpha)
    betas = table.array
    symbols = range(1, alpha + 1)
    violations = 0
    for i in symbols:
        for k in symbols:
            for j in symbols:
                lhs = symbol_dist(i, k, table)
                rhs = symbol_dist(i, j, table) + symbol_dist(j, k, table)
                if min(i, k) < j < max(i, k):
                    # 缺口恰好是 j 所在区间的宽度
                    assert lhs - rhs == pytest.approx(betas[j - 1] - betas[j - 2], abs=1e-12)
                    violations += 1
                else:
                    assert lhs <= rhs + 1e-12
    # 每个有序对 (i, k) 中间的每个 j 都违反一次
    assert violations == alpha * (alpha - 1) * (alpha - 2) // 3


def test_symbol_dist_triangle_violation_count():
    """测试 alpha = 2..10 上违反三角不等式的 (i, j, k) 总数"""
    total = 0
    for alpha in range(2, 11):
        table = gaussian_breakpoints(alpha)
        symbols = range(1, alpha + 1)
        total += sum(symbol_dist(i, k, table) > symbol_dist(i, j, table) + symbol_dist(j, k, table)
                     for i in symbols for j in symbols for k in symbols)
    assert total == 660


def test_symbol_out_of_range_word():
    with pytest.raises(SymbolOutOfRange):
        SaxWord(symbols=(1, 5), alpha=4, w=2, n=8)


def test_mindist_example():
    """测试 MINDIST("ac", "ca")，n=8, w=2, alpha=4"""
    qw = parse_sax_word("ac", alpha=4, n=8)
    cw = parse_sax_word("ca", alpha=4, n=8)
    exact = 2.0 * np.sqrt(2.0) * norm.ppf(0.75)
    assert mindist(qw, cw) == pytest.approx(exact, rel=1e-12)
    # 断点取两位小数时为 1.89505
    assert mindist(qw, cw) == pytest.approx(1.89505, abs=0.02)


def test_mindist_adjacent_and_identical():
    """测试相邻或相同符号的 MINDIST 为 0"""
    qw = parse_sax_word("abcd", alpha=4, n=16)
    assert mindist(qw, qw) == 0.0
    assert mindist(qw, parse_sax_word("badc", alpha=4, n=16)) == 0.0


def test_mindist_param_mismatch():
    with pytest.raises(ParamMismatch):
        mindist(parse_sax_word("ab", alpha=4, n=8), parse_sax_word("ab", alpha=5, n=8))
    with pytest.raises(ParamMismatch):
        mindist(parse_sax_word("ab", alpha=4, n=8), parse_sax_word("ab", alpha=4, n=16))


def test_mindist_lower_bounds_euclidean():
    """测试随机序列上 MINDIST <= 欧氏距离"""
    rng = np.random.default_rng(3)
    for _ in range(300):
        n = int(rng.integers(8, 96))
        w = int(rng.integers(1, n + 1))
        alpha = int(rng.integers(2, 12))
        a = rng.standard_normal(n)
        b = rng.standard_normal(n)
        a, b = (a - a.mean()) / a.std(), (b - b.mean()) / b.std()
        table = gaussian_breakpoints(alpha)
        value = mindist(sax_symbolize(paa(a, w), table), sax_symbolize(paa(b, w), table))
        assert value <= euclidean(a, b) + 1e-9


def test_parse_sax_word():
    """测试单词解析（大小写不敏感）"""
    word = parse_sax_word("AbC", alpha=3, n=9)
    assert word.symbols == (1, 2, 3)
    assert str(word) == "abc"
    with pytest.raises(ParseError):
        parse_sax_word("a1", alpha=3, n=9)
    with pytest.raises(ParseError):
        parse_sax_word("", alpha=3, n=9)
    for bad in ("aé", "ßa", "aΩb"):
        with pytest.raises(ParseError):
            parse_sax_word(bad, alpha=3, n=9)
    with pytest.raises(SymbolOutOfRange):
        parse_sax_word("ad", alpha=3, n=9)
