#!/usr/bin/env python3
"""
趋势通道测试

验证：
1. 趋势点、趋势形状因子 K 与趋势距离因子 td
2. 趋势角度
3. 角度断点表与趋势符号化
4. tfdist 查找表
5. 批量计算与逐段计算一致
6. 反转与单调段的性质
"""

import sys
import os

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

# 添加src目录到Python路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# 设置清洁的日志配置
from tfsaxtools.log_config import setup_test_logging
setup_test_logging()

from tfsaxtools.exceptions import ParseError, SymbolOutOfRange, UnsupportedTrendAlpha
from tfsaxtools.models import TrendFeature
from tfsaxtools.series_core import segment
from tfsaxtools.trend_codec import (angle_breakpoints, parse_trend_word, tfdist, trend_angle,
                                    trend_angles_matrix, trend_distance_factor,
                                    trend_features_matrix, trend_points, trend_shape_factor,
                                    trend_symbolize)


def tan(degrees):
    return float(np.tan(np.radians(degrees)))


def test_trend_points():
    """测试趋势点（1-based 下标）"""
    assert trend_points([1, 2, 1]) == [2], "峰值是趋势点"
    assert trend_points([1, 2, 3, 4]) == [], "单调序列没有趋势点"
    assert trend_points([1, 2, 2, 3]) == [2, 3], "平台的两端都是趋势点"
    assert trend_points([3, 1, 3, 1, 3]) == [2, 3, 4]
    assert trend_points([5, 7]) == []
    assert trend_points([2, 2, 2, 2]) == [], "常数段没有趋势点"


def test_trend_shape_factor():
    """测试 K = max(1, 趋势点个数)"""
    assert trend_shape_factor([1, 2, 3, 4]) == 1
    assert trend_shape_factor([1, 3, 2, 4]) == 2
    assert trend_shape_factor([5, 5, 5, 5]) == 1


def test_trend_distance_factor():
    """测试 td = 终点 - 起点"""
    assert trend_distance_factor([0, 1, 2, 3]) == 3.0
    assert trend_distance_factor([2, 2, 2]) == 0.0
    assert trend_distance_factor([3, 2, 1, 0]) == -3.0


def test_trend_angle():
    """测试趋势角度"""
    rising = trend_angle([0, 1, 2, 3])
    assert (rising.td, rising.k) == (3.0, 1)
    assert rising.theta == pytest.approx(71.565, abs=1e-3)

    flat = trend_angle([1, 0, 1])
    assert (flat.td, flat.k, flat.theta) == (0.0, 1, 0.0)

    falling = trend_angle([3, 2, 1, 0])
    assert falling.theta == pytest.approx(-71.565, abs=1e-3)


@pytest.mark.parametrize("values", [[0, 5, -5, 2], [1, 2, 2, 3], [9, 1]])
def test_trend_angle_range(values):
    """测试角度在 (-90, 90) 内"""
    assert -90.0 < trend_angle(values).theta < 90.0


def test_angle_breakpoint_tables():
    """测试各 alpha_t 的角度断点"""
    assert angle_breakpoints(2).thetas == (0.0,)
    assert angle_breakpoints(3).thetas == (-5.0, 5.0)
    assert angle_breakpoints(4).thetas == (-30.0, 0.0, 30.0)
    assert angle_breakpoints(5).thetas == (-30.0, -5.0, 5.0, 30.0)
    assert angle_breakpoints(6).thetas == (-30.0, -5.0, 0.0, 5.0, 30.0)


@pytest.mark.parametrize("alpha_t", [0, 1, 7])
def test_angle_breakpoints_unsupported(alpha_t):
    with pytest.raises(UnsupportedTrendAlpha):
        angle_breakpoints(alpha_t)


def test_trend_symbolize():
    """测试角度到趋势符号的映射 (alpha_t=5)"""
    table = angle_breakpoints(5)
    thetas = [71.565, -40.0, 0.0, -30.0, 5.0, -10.0]
    features = [TrendFeature(td=0.0, k=1, theta=theta) for theta in thetas]
    word = trend_symbolize(features, table)
    assert str(word) == "EACBDB", "恰好落在断点上的角度取上方符号"
    assert word.alpha_t == 5 and word.w == len(thetas)


def test_tfdist_table_alpha5():
    """测试 alpha_t=5 的 tfdist 查找表"""
    table = angle_breakpoints(5)
    expected = {
        (1, 1): 0.0, (1, 2): 0.0, (1, 3): tan(25), (1, 4): tan(35), (1, 5): tan(60),
        (2, 3): 0.0, (2, 5): tan(35), (3, 5): tan(25), (4, 5): 0.0,
        # 两个相隔一个符号的中间符号: tan(5 - (-5))
        (2, 4): tan(10),
    }
    for (i, j), value in expected.items():
        assert tfdist(i, j, table) == pytest.approx(value, abs=1e-12)
        assert tfdist(j, i, table) == pytest.approx(value, abs=1e-12), "tfdist 对称"
    assert tfdist(2, 4, table) == pytest.approx(0.17633, abs=1e-5)
    assert tfdist(1, 5, table) == pytest.approx(np.sqrt(3.0))


@pytest.mark.parametrize("alpha_t", range(2, 7))
def test_tfdist_properties(alpha_t):
    """测试 tfdist 非负、对称，相同或相邻符号为 0"""
    table = angle_breakpoints(alpha_t)
    matrix = table.matrix
    assert np.all(matrix >= 0.0)
    np.testing.assert_allclose(matrix, matrix.T)
    for i in range(1, alpha_t + 1):
        assert tfdist(i, i, table) == 0.0
        if i < alpha_t:
            assert tfdist(i, i + 1, table) == 0.0


def test_tfdist_out_of_range():
    with pytest.raises(SymbolOutOfRange):
        tfdist(1, 6, angle_breakpoints(5))


def test_trend_features_matrix_matches_segments():
    """测试批量 (td, K) 与逐段计算一致，包括不能整除的分段"""
    rng = np.random.default_rng(5)
    matrix = np.round(rng.standard_normal((6, 47)), 1)
    seg = segment(47, 9)
    td, k = trend_features_matrix(matrix, seg)
    angles = trend_angles_matrix(matrix, seg)
    for row in range(matrix.shape[0]):
        for col, (start, end) in enumerate(seg.bounds):
            piece = matrix[row, start:end]
            feature = trend_angle(piece)
            assert td[row, col] == pytest.approx(feature.td)
            assert k[row, col] == feature.k
            assert angles[row, col] == pytest.approx(feature.theta)


def test_trend_features_single_point_segments():
    """测试 w = n 时每段只有一个点: td = 0, K = 1"""
    td, k = trend_features_matrix(np.array([[0.5, -1.0, 2.0]]), segment(3, 3))
    np.testing.assert_array_equal(td, [[0.0, 0.0, 0.0]])
    np.testing.assert_array_equal(k, [[1, 1, 1]])


def test_parse_trend_word():
    word = parse_trend_word("eAc", alpha_t=5)
    assert word.symbols == (5, 1, 3)
    assert str(word) == "EAC"
    with pytest.raises(ParseError):
        parse_trend_word("E-A", alpha_t=5)
    for bad in ("AÉ", "Ωa"):
        with pytest.raises(ParseError):
            parse_trend_word(bad, alpha_t=5)
    with pytest.raises(SymbolOutOfRange):
        parse_trend_word("F", alpha_t=5)


# 整数取值容易产生平台与相等差分
_segments = st.one_of(
    st.lists(st.integers(min_value=-3, max_value=3).map(float), min_size=2, max_size=40),
    st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=2, max_size=40),
)


@settings(max_examples=200, deadline=None)
@given(_segments)
def test_reversal_flips_trend(values):
    """测试反转序列: td 与 theta 变号，趋势点个数不变且位置镜像"""
    forward = trend_angle(values)
    backward = trend_angle(values[::-1])
    assert backward.td == -forward.td
    assert backward.theta == pytest.approx(-forward.theta, abs=1e-12)
    assert backward.k == forward.k

    points = trend_points(values)
    mirrored = sorted(len(values) + 1 - i for i in trend_points(values[::-1]))
    assert len(trend_points(values[::-1])) == len(points)
    assert mirrored == points


@settings(max_examples=200, deadline=None)
@given(st.lists(st.one_of(st.just(0.0), st.floats(min_value=0.01, max_value=10.0)),
                min_size=1, max_size=30),
       st.booleans(),
       st.integers(min_value=2, max_value=6))
def test_steep_monotone_segment_gets_outer_symbol(steps, rising, alpha_t):
    """测试 |td|/K > tan30° 的单调段映射到最外侧的趋势符号"""
    values = np.concatenate([[0.0], np.cumsum(steps)])
    if not rising:
        values = -values
    feature = trend_angle(values)
    assume(abs(feature.td) / feature.k > tan(30) * (1 + 1e-9))

    word = trend_symbolize([feature], angle_breakpoints(alpha_t))
    assert word.symbols == ((alpha_t,) if rising else (1,))
