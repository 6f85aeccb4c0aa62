"""
下界审计
对一组序列对在每个 (w, alpha, alpha_t) 上计算 Euclidean、MINDIST、TDIST、SAX-TD，
记录 TLB 并统计"下界距离超过欧氏距离"的次数。审计只测量，不假设下界成立。
"""

import concurrent.futures
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .distance_methods import get_method
from .exceptions import EmptyDataset, ReportError
from .models import AuditSummary, BoundAuditRecord, Dataset, GridSpec

logger = logging.getLogger(__name__)

AUDIT_COLUMNS = ["dataset", "w", "alpha", "alpha_t", "pair_id", "euclid", "mindist", "tdist",
                 "tlb_mindist", "tlb_tdist", "saxtd", "tlb_saxtd"]
SUMMARY_COLUMNS = ["dataset", "w", "alpha", "alpha_t", "pairs", "mean_tlb_mindist",
                   "mean_tlb_tdist", "mean_tlb_saxtd", "mindist_violations",
                   "tdist_violations", "saxtd_violations"]

CSV_FLOAT_FORMAT = "%.10g"


@dataclass
class PairCorpus:
    """逐对排列的序列：queries[i] 与 candidates[i] 构成第 i 对"""

    queries: np.ndarray
    candidates: np.ndarray
    pair_ids: List[str]
    euclid: np.ndarray

    def __len__(self) -> int:
        return len(self.pair_ids)


def corpus_from_matrices(queries: np.ndarray, candidates: np.ndarray,
                         pair_ids: Optional[List[str]] = None) -> PairCorpus:
    """由两个等形状矩阵构造语料，欧氏距离为 0 的对被剔除"""
    queries = np.asarray(queries, dtype=np.float64)
    candidates = np.asarray(candidates, dtype=np.float64)
    if pair_ids is None:
        pair_ids = [str(i) for i in range(queries.shape[0])]

    euclid = get_method("euclid")
    encoded_q = euclid.encode(queries)
    distances = euclid.paired(encoded_q, euclid.encode(candidates))
    keep = distances > 0.0
    dropped = int((~keep).sum())
    if dropped:
        logger.warning(f"[Audit] excluded {dropped} pair(s) with zero Euclidean distance (TLB undefined)")
    return PairCorpus(
        queries=queries[keep],
        candidates=candidates[keep],
        pair_ids=[pid for pid, k in zip(pair_ids, keep) if k],
        euclid=distances[keep],
    )


def build_pair_corpus(dataset: Dataset, max_pairs: Optional[int] = None,
                      seed: int = 0) -> PairCorpus:
    """
    从数据集构造审计语料

    有测试集时取 train x test 全部组合，否则取训练集内部的无序对；
    组合数超过 max_pairs 时按 seed 均匀无放回抽样。
    """
    from .tfsax_config import get_config

    if not dataset.train:
        raise EmptyDataset(f"dataset {dataset.name!r} has no series")
    max_pairs = max_pairs or get_config().audit_max_pairs

    train = Dataset.matrix(dataset.train)
    if dataset.test:
        test = Dataset.matrix(dataset.test)
        q_index, c_index = np.divmod(np.arange(len(dataset.train) * len(dataset.test)), len(dataset.test))
    else:
        test = train
        q_index, c_index = np.triu_indices(len(dataset.train), k=1)

    total = q_index.size
    if total > max_pairs:
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(total, size=max_pairs, replace=False))
        q_index, c_index = q_index[chosen], c_index[chosen]
        logger.info(f"[Audit] {dataset.name}: sampled {max_pairs} of {total} pairs (seed={seed})")
    else:
        logger.info(f"[Audit] {dataset.name}: using all {total} pairs")

    pair_ids = [f"{q}-{c}" for q, c in zip(q_index.tolist(), c_index.tolist())]
    return corpus_from_matrices(train[q_index], test[c_index], pair_ids)


def _audit_point(corpus: PairCorpus, w: int, alpha: int, alpha_t: int) -> Dict[str, np.ndarray]:
    """单个网格点上的向量化计算"""
    values = {}
    for name in ("tfsax", "saxtd"):
        method = get_method(name)
        encoded_q = method.encode(corpus.queries, w=w, alpha=alpha, alpha_t=alpha_t)
        encoded_c = method.encode(corpus.candidates, w=w, alpha=alpha, alpha_t=alpha_t)
        sax_term, trend_term = method.squared_terms(encoded_q.arrays, encoded_c.arrays, encoded_q)
        if name == "tfsax":
            values["mindist"] = np.sqrt(sax_term)
            values["tdist"] = np.sqrt(sax_term + trend_term)
        else:
            values["saxtd"] = np.sqrt(sax_term + trend_term)
    return values


def _summarize(dataset: str, point: Tuple[int, int, int], corpus: PairCorpus,
               values: Dict[str, np.ndarray], tolerance: float) -> AuditSummary:
    w, alpha, alpha_t = point
    limit = corpus.euclid * (1.0 + tolerance)

    def mean_tlb(name: str) -> float:
        return float(np.mean(values[name] / corpus.euclid))

    def violations(name: str) -> int:
        return int(np.count_nonzero(values[name] > limit))

    return AuditSummary(
        dataset=dataset, w=w, alpha=alpha, alpha_t=alpha_t, pairs=len(corpus),
        mean_tlb_mindist=mean_tlb("mindist"),
        mean_tlb_tdist=mean_tlb("tdist"),
        mean_tlb_saxtd=mean_tlb("saxtd"),
        mindist_violations=violations("mindist"),
        tdist_violations=violations("tdist"),
        saxtd_violations=violations("saxtd"),
    )


def _records(dataset: str, point: Tuple[int, int, int], corpus: PairCorpus,
             values: Dict[str, np.ndarray]) -> List[BoundAuditRecord]:
    w, alpha, alpha_t = point
    euclid = corpus.euclid
    return [
        BoundAuditRecord(
            dataset=dataset, pair_id=pair_id, w=w, alpha=alpha, alpha_t=alpha_t,
            euclid=float(e), mindist_val=float(m), tdist_val=float(t), saxtd_val=float(s),
            tlb_mindist=float(m / e), tlb_tdist=float(t / e), tlb_saxtd=float(s / e),
        )
        for pair_id, e, m, t, s in zip(corpus.pair_ids, euclid, values["mindist"],
                                       values["tdist"], values["saxtd"])
    ]


def audit_corpus(corpus: PairCorpus, grid: GridSpec, dataset: str = "corpus",
                 keep_records: bool = True,
                 max_workers: Optional[int] = None) -> Tuple[List[BoundAuditRecord], List[AuditSummary]]:
    """
    在所有网格点上审计语料

    网格点并行计算，结果按 (w, alpha, alpha_t) 升序汇总，与线程数无关。

    Returns:
        (records, summaries)；keep_records=False 时 records 为空
    """
    from .tfsax_config import get_config

    config = get_config()
    points = list(grid.points(uses_trend_alpha=True))
    if len(corpus) == 0:
        logger.warning(f"[Audit] {dataset}: no usable pairs, summary is empty")
        return [], []

    max_workers = max_workers or config.max_workers
    outputs: Dict[Tuple[int, int, int], Dict[str, np.ndarray]] = {}
    failures = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_point = {
            executor.submit(_audit_point, corpus, *point): point
            for point in points
        }
        for future in concurrent.futures.as_completed(future_to_point):
            point = future_to_point[future]
            try:
                outputs[point] = future.result()
                logger.info(f"[GridPoint] audit {dataset} w={point[0]} alpha={point[1]} "
                            f"alpha_t={point[2]} done")
            except Exception as e:
                logger.error(f"[Audit] {dataset} {point} failed: {e}")
                failures.append((point, e))

    if failures:
        raise sorted(failures, key=lambda item: item[0])[0][1]

    records: List[BoundAuditRecord] = []
    summaries: List[AuditSummary] = []
    for point in points:
        values = outputs[point]
        summaries.append(_summarize(dataset, point, corpus, values, config.bound_tolerance))
        if keep_records:
            records.extend(_records(dataset, point, corpus, values))

    violated = sum(s.tdist_violations for s in summaries)
    logger.info(f"[Audit] {dataset}: {len(points)} grid points x {len(corpus)} pairs, "
                f"TDIST violations={violated}")
    return records, summaries


def audit_lower_bound(dataset: Dataset, grid: GridSpec, samples: Optional[int] = None,
                      seed: int = 0, keep_records: bool = True,
                      max_workers: Optional[int] = None) -> Tuple[List[BoundAuditRecord], List[AuditSummary]]:
    """
    数据集上的下界审计

    Args:
        dataset: 已归一化的数据集
        grid: 审计的参数网格
        samples: 最多使用的序列对数，默认取配置 (10000)
        seed: 抽样种子
    """
    corpus = build_pair_corpus(dataset, max_pairs=samples, seed=seed)
    return audit_corpus(corpus, grid, dataset=dataset.name, keep_records=keep_records,
                        max_workers=max_workers)


def audit_frame(records: List[BoundAuditRecord]) -> pd.DataFrame:
    rows = [
        {
            "dataset": r.dataset, "w": r.w, "alpha": r.alpha, "alpha_t": r.alpha_t,
            "pair_id": r.pair_id, "euclid": r.euclid, "mindist": r.mindist_val,
            "tdist": r.tdist_val, "tlb_mindist": r.tlb_mindist, "tlb_tdist": r.tlb_tdist,
            "saxtd": r.saxtd_val, "tlb_saxtd": r.tlb_saxtd,
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=AUDIT_COLUMNS)


def summary_frame(summaries: List[AuditSummary]) -> pd.DataFrame:
    rows = [{column: getattr(s, column) for column in SUMMARY_COLUMNS} for s in summaries]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """UTF-8、LF 换行、固定浮点格式"""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n",
                     float_format=CSV_FLOAT_FORMAT)
    except OSError as e:
        raise ReportError(f"cannot write {path}: {e}") from e
    logger.debug(f"wrote {len(frame)} rows to {path}")
    return path


def write_audit(records: List[BoundAuditRecord], summaries: List[AuditSummary],
                output_dir: Path, name: str) -> Tuple[Path, Path]:
    """写出 <name>_audit.csv 与 <name>_audit_summary.csv"""
    output_dir = Path(output_dir)
    return (write_csv(audit_frame(records), output_dir / f"{name}_audit.csv"),
            write_csv(summary_frame(summaries), output_dir / f"{name}_audit_summary.csv"))
