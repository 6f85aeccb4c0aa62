"""
运行时间测试
计时范围: 训练/测试集转换为单词 + 1-NN 分类，alpha 固定（默认 10）
"""

import logging
import time
from typing import Iterable, List, Optional

from .classification import count_errors
from .distance_methods import get_method
from .exceptions import EmptyDataset
from .models import Dataset, RuntimeRow

logger = logging.getLogger(__name__)

BENCH_ALPHA = 10


def time_transform_and_classify(dataset: Dataset, method: str, w: int, alpha: int,
                                alpha_t: Optional[int] = None) -> float:
    """单次墙钟时间 (秒)"""
    distance_method = get_method(method)
    train = Dataset.matrix(dataset.train)
    test = Dataset.matrix(dataset.test)
    train_labels = Dataset.labels(dataset.train)
    test_labels = Dataset.labels(dataset.test)

    start = time.perf_counter()
    encoded_train = distance_method.encode(train, w=w, alpha=alpha, alpha_t=alpha_t)
    encoded_test = distance_method.encode(test, w=w, alpha=alpha, alpha_t=alpha_t)
    count_errors(distance_method, encoded_train, train_labels, encoded_test, test_labels)
    return time.perf_counter() - start


def bench_runtime(dataset: Dataset, method: str, w_values: Iterable[int], alpha: int = BENCH_ALPHA,
                  alpha_t: Optional[int] = None, repeats: int = 3) -> List[RuntimeRow]:
    """
    每个 w 的运行时间

    Args:
        dataset: 带训练/测试划分的数据集
        method: 距离方法
        w_values: 要测试的 w
        alpha: 固定字母表大小
        alpha_t: TFSAX 的趋势字母表大小，默认取配置
        repeats: 重复次数，取最短时间

    Returns:
        每个 w 一行 RuntimeRow
    """
    from .tfsax_config import get_config

    if not dataset.train or not dataset.test:
        raise EmptyDataset(f"dataset {dataset.name!r} needs both train and test series")
    if alpha_t is None and get_method(method).uses_trend_alpha:
        alpha_t = get_config().default_alpha_t

    rows = []
    for w in w_values:
        seconds = min(time_transform_and_classify(dataset, method, w, alpha, alpha_t)
                      for _ in range(max(1, repeats)))
        logger.debug(f"[Bench] {dataset.name} {method} w={w}: {seconds:.4f}s")
        rows.append(RuntimeRow(dataset=dataset.name, method=method, w=w, alpha=alpha, seconds=seconds))
    return rows
