"""
1-NN 分类与参数网格搜索

fpr = 错分样本数 / 测试样本数；最近邻距离相同时取下标最小的训练样本。
网格搜索默认按测试集选参数，也可以用训练集留一法 (selection="train") 选参数后只在测试集上评估一次。
"""

import concurrent.futures
import logging
import time
from typing import Dict, List, Optional, Sequence

import numpy as np

from .distance_methods import DistanceMethod, Encoded, get_method
from .exceptions import EmptyDataset, InvalidW, LengthMismatch, ParamMismatch
from .models import (Dataset, GridEvaluation, GridPoint, GridSearchResult, GridSpec,
                     MethodResult, TimeSeries, grid_point_key)

logger = logging.getLogger(__name__)

SELECTIONS = ("test", "train")


def _check_splits(train: Sequence[TimeSeries], test: Sequence[TimeSeries]) -> int:
    if not train:
        raise EmptyDataset("train split is empty")
    if not test:
        raise EmptyDataset("test split is empty")
    lengths = {len(s) for s in train} | {len(s) for s in test}
    if len(lengths) != 1:
        raise LengthMismatch(f"train/test series lengths differ: {sorted(lengths)}")
    return lengths.pop()


def nearest_neighbor_predictions(method: DistanceMethod, train: Encoded, train_labels: np.ndarray,
                                 queries: Encoded, leave_one_out: bool = False) -> np.ndarray:
    """
    每条查询的最近邻标签

    np.argmin 返回第一个最小值，即下标最小的训练样本。
    leave_one_out 时 queries 必须就是 train，自身距离被排除。
    """
    distances = method.pairwise(queries, train)
    if leave_one_out:
        np.fill_diagonal(distances, np.inf)
    return train_labels[np.argmin(distances, axis=1)]


def count_errors(method: DistanceMethod, train: Encoded, train_labels: np.ndarray,
                 test: Encoded, test_labels: np.ndarray, leave_one_out: bool = False) -> int:
    predictions = nearest_neighbor_predictions(method, train, train_labels, test, leave_one_out)
    return int(np.count_nonzero(predictions != test_labels))


def classify_1nn(train: Sequence[TimeSeries], test: Sequence[TimeSeries], method: str,
                 params: Optional[Dict[str, Optional[int]]] = None) -> float:
    """
    1-NN 分类错误率

    Args:
        train: 训练序列（带标签）
        test: 测试序列（带标签）
        method: euclid / sax / esax / saxtd / tfsax
        params: w, alpha, alpha_t

    Returns:
        fpr in [0, 1]
    """
    _check_splits(train, test)
    distance_method = get_method(method)
    params = params or {}
    encoded_train = distance_method.encode(Dataset.matrix(list(train)), **params)
    encoded_test = distance_method.encode(Dataset.matrix(list(test)), **params)
    errors = count_errors(distance_method, encoded_train, Dataset.labels(list(train)),
                          encoded_test, Dataset.labels(list(test)))
    return errors / len(test)


def reduction_ratio(method: str, w: Optional[int], n: int) -> float:
    """压缩比: sax w/n, esax 3w/n, saxtd (2w+1)/n, tfsax 2w/n, euclid 1"""
    distance_method = get_method(method)
    if distance_method.uses_params and (w is None or not 1 <= w <= n):
        raise InvalidW(f"w={w} outside [1, n={n}]")
    return distance_method.ratio(w, n)


def _point_params(point: GridPoint) -> Dict[str, Optional[int]]:
    w, alpha, alpha_t = point
    return {"w": w, "alpha": alpha, "alpha_t": alpha_t}


def _grid_points(method: DistanceMethod, grid: Optional[GridSpec]) -> List[GridPoint]:
    if not method.uses_params:
        return [(None, None, None)]
    if grid is None:
        raise ParamMismatch(f"method {method.name!r} needs a parameter grid")
    return list(grid.points(uses_trend_alpha=method.uses_trend_alpha))


def _evaluate_point(method: DistanceMethod, point: GridPoint, train: np.ndarray,
                    train_labels: np.ndarray, test: np.ndarray, test_labels: np.ndarray,
                    leave_one_out: bool) -> GridEvaluation:
    params = _point_params(point)
    encoded_train = method.encode(train, **params)
    if leave_one_out:
        errors = count_errors(method, encoded_train, train_labels, encoded_train, train_labels,
                              leave_one_out=True)
        return GridEvaluation(point=point, errors=errors, total=len(train_labels))
    encoded_test = method.encode(test, **params)
    errors = count_errors(method, encoded_train, train_labels, encoded_test, test_labels)
    return GridEvaluation(point=point, errors=errors, total=len(test_labels))


def _evaluate_grid(method: DistanceMethod, points: List[GridPoint], train: np.ndarray,
                   train_labels: np.ndarray, test: np.ndarray, test_labels: np.ndarray,
                   leave_one_out: bool, max_workers: int) -> List[GridEvaluation]:
    """并行评估所有网格点，结果按网格顺序返回"""
    results: Dict[GridPoint, GridEvaluation] = {}
    failures = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_point = {
            executor.submit(_evaluate_point, method, point, train, train_labels,
                            test, test_labels, leave_one_out): point
            for point in points
        }
        for future in concurrent.futures.as_completed(future_to_point):
            point = future_to_point[future]
            try:
                evaluation = future.result()
                results[point] = evaluation
                logger.info(f"[GridPoint] {method.name} w={point[0]} alpha={point[1]} "
                            f"alpha_t={point[2]} errors={evaluation.errors}/{evaluation.total}")
            except Exception as e:
                logger.error(f"[GridSearch] {method.name} {point} failed: {e}")
                failures.append((point, e))

    if failures:
        raise sorted(failures, key=lambda item: grid_point_key(item[0]))[0][1]
    return [results[point] for point in points]


def grid_search(train: Sequence[TimeSeries], test: Sequence[TimeSeries], method: str,
                grid: Optional[GridSpec] = None, selection: str = "test",
                max_workers: Optional[int] = None) -> GridSearchResult:
    """
    在网格上搜索最优参数

    错误率最低者胜出；相同时依次取较小的 w、alpha、alpha_t。

    Args:
        selection: "test" 按测试集错误率选参数；"train" 按训练集留一法选参数
    """
    from .tfsax_config import get_config

    if selection not in SELECTIONS:
        raise ParamMismatch(f"selection must be one of {SELECTIONS}, got {selection!r}")
    n = _check_splits(train, test)
    distance_method = get_method(method)
    points = _grid_points(distance_method, grid)
    if grid is not None and distance_method.uses_params:
        grid.check_length(n)

    train_matrix, train_labels = Dataset.matrix(list(train)), Dataset.labels(list(train))
    test_matrix, test_labels = Dataset.matrix(list(test)), Dataset.labels(list(test))
    leave_one_out = selection == "train"
    if leave_one_out and len(train) < 2:
        raise EmptyDataset("leave-one-out selection needs at least two train series")

    evaluations = _evaluate_grid(distance_method, points, train_matrix, train_labels, test_matrix,
                                 test_labels, leave_one_out, max_workers or get_config().max_workers)
    best = min(evaluations, key=lambda e: grid_point_key(e.point, e.errors))

    if leave_one_out:
        scored = _evaluate_point(distance_method, best.point, train_matrix, train_labels,
                                 test_matrix, test_labels, leave_one_out=False)
        errors = scored.errors
    else:
        errors = best.errors

    logger.info(f"[GridSearch] {method}: best w={best.point[0]} alpha={best.point[1]} "
                f"alpha_t={best.point[2]} fpr={errors / len(test):.4f} ({selection} selection)")
    return GridSearchResult(method=distance_method.name, best=best.point, errors=errors,
                            n_test=len(test), selection=selection, evaluations=evaluations)


def evaluate_method(dataset: Dataset, method: str, grid: Optional[GridSpec] = None,
                    selection: str = "test", max_workers: Optional[int] = None) -> MethodResult:
    """
    单个方法在数据集上的结果：网格搜索 + 压缩比 + 墙钟时间

    grid 为 None 时使用 GridSpec.for_length(n)。
    """
    if grid is None and get_method(method).uses_params:
        grid = GridSpec.for_length(dataset.n)
    started = time.perf_counter()
    result = grid_search(dataset.train, dataset.test, method, grid, selection, max_workers)
    seconds = time.perf_counter() - started
    w, alpha, alpha_t = result.best
    return MethodResult(
        dataset=dataset.name, method=result.method, n=dataset.n, w=w, alpha=alpha,
        alpha_t=alpha_t, ratio=reduction_ratio(method, w, dataset.n), fpr=result.fpr,
        errors=result.errors, n_test=result.n_test, seconds=seconds, selection=selection,
    )
