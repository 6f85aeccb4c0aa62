"""
合成数据生成器
- Cylinder-Bell-Funnel (CBF) 三分类数据集
- 随机游走语料，用于没有 UCR 数据时的下界审计
"""

import logging
from typing import List, Optional

import numpy as np

from .exceptions import InvalidSeries
from .models import Dataset, TimeSeries
from .series_core import znormalize_matrix

logger = logging.getLogger(__name__)

CBF_MIN_LENGTH = 16
CBF_CLASSES = {1: "cylinder", 2: "bell", 3: "funnel"}

# 长度 128 时事件窗口 a ~ U[16, 32], b - a ~ U[32, 96]
_REFERENCE_LENGTH = 128


def _cbf_matrix(labels: np.ndarray, length: int, rng: np.random.Generator) -> np.ndarray:
    """
    按标签批量生成 CBF 序列

    c(t) = (6+eta) * 1[a,b](t) + eps(t)
    b(t) = (6+eta) * 1[a,b](t) * (t-a)/(b-a) + eps(t)
    f(t) = (6+eta) * 1[a,b](t) * (b-t)/(b-a) + eps(t)
    """
    m = labels.size
    scale = length / _REFERENCE_LENGTH
    a_low, a_high = int(round(16 * scale)), int(round(32 * scale))
    span_low = max(1, int(round(32 * scale)))
    span_high = max(span_low, int(round(96 * scale)))

    a = rng.integers(a_low, a_high + 1, size=m)
    span = rng.integers(span_low, span_high + 1, size=m)
    b = np.minimum(a + span, length - 1)
    eta = rng.standard_normal(m)
    eps = rng.standard_normal((m, length))

    t = np.arange(length)[None, :]
    a_col, b_col = a[:, None], b[:, None]
    window = (t >= a_col) & (t <= b_col)
    width = np.maximum(b_col - a_col, 1)

    shape = np.ones((m, length))
    shape = np.where((labels == 2)[:, None], (t - a_col) / width, shape)
    shape = np.where((labels == 3)[:, None], (b_col - t) / width, shape)
    return (6.0 + eta)[:, None] * window * shape + eps


def gen_cbf(per_class: int, length: int, seed: int, test_per_class: Optional[int] = None,
            normalize: bool = True, name: str = "CBF") -> Dataset:
    """
    生成 CBF 数据集，给定 seed 时完全确定

    Args:
        per_class: 训练集每类样本数
        length: 序列长度 (>= 16)
        seed: 随机种子
        test_per_class: 测试集每类样本数，默认与训练集相同
        normalize: 是否 z-normalize

    Returns:
        标签为 1 (cylinder)、2 (bell)、3 (funnel) 的数据集
    """
    if length < CBF_MIN_LENGTH:
        raise InvalidSeries(f"CBF length must be >= {CBF_MIN_LENGTH}, got {length}")
    if per_class < 1:
        raise InvalidSeries(f"per_class must be positive, got {per_class}")
    if test_per_class is None:
        test_per_class = per_class

    rng = np.random.default_rng(seed)
    splits = {}
    for split, count in (("train", per_class), ("test", test_per_class)):
        labels = np.repeat(np.array(sorted(CBF_CLASSES)), count)
        labels = labels[rng.permutation(labels.size)]
        matrix = _cbf_matrix(labels, length, rng)
        if normalize:
            matrix = znormalize_matrix(matrix)
        splits[split] = [TimeSeries(values=row, label=int(label), id=f"{name}:{split}:{index}")
                         for index, (label, row) in enumerate(zip(labels, matrix))]

    logger.info(f"[Generator] {name}: train={len(splits['train'])} test={len(splits['test'])} "
                f"length={length} seed={seed}")
    return Dataset(name=name, train=splits["train"], test=splits["test"])


def gen_random_walk(count: int, length: int, seed: int) -> np.ndarray:
    """(count, length) 的 z-normalized 随机游走矩阵"""
    if length < 2:
        raise InvalidSeries(f"random walk length must be >= 2, got {length}")
    rng = np.random.default_rng(seed)
    walks = np.cumsum(rng.standard_normal((count, length)), axis=1)
    return znormalize_matrix(walks)


def random_walk_dataset(train_count: int, test_count: int, length: int, seed: int,
                        name: str = "RandomWalk") -> Dataset:
    """无标签的随机游走数据集，训练/测试来自同一个种子序列"""
    matrix = gen_random_walk(train_count + test_count, length, seed)

    def wrap(rows: np.ndarray, split: str) -> List[TimeSeries]:
        return [TimeSeries(values=row, id=f"{name}:{split}:{i}") for i, row in enumerate(rows)]

    return Dataset(name=name, train=wrap(matrix[:train_count], "train"),
                   test=wrap(matrix[train_count:], "test"))
