"""
评测报告
- build_report: 对多个数据集运行分类、下界审计与运行时间测试
- emit_report: 写出分类结果、压缩比、TLB、运行时间四个 CSV
- check_acceptance: 根据报告判断各项定性结论是否复现
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from .distance_methods import COMPARED_METHODS
from .exceptions import DatasetNotFound, ReportError
from .models import AcceptanceCheck, Dataset, EvalReport, GridSpec

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ["dataset", "method", "n", "w", "alpha", "alpha_t", "ratio", "fpr",
                  "errors", "n_test", "selection"]
RATIO_COLUMNS = ["dataset", "method", "n", "w", "ratio"]
RUNTIME_COLUMNS = ["dataset", "method", "w", "alpha", "seconds"]

REPORT_FILES = {
    "results": "results.csv",
    "ratios": "ratios.csv",
    "tlb": "tlb.csv",
    "runtime": "runtime.csv",
}

# 默认的 CBF 形状: 训练 30、测试 900、长度 128
CBF_TRAIN_PER_CLASS = 10
CBF_TEST_PER_CLASS = 300
CBF_LENGTH = 128

# 30 x 30 = 900 对
RANDOM_WALK_SPLIT = 30

AUDIT_W = 32
AUDIT_ALPHA = 8
BENCH_W_VALUES = (2, 4, 8, 16, 32, 64)

# 已发表的最优错误率，按数据集、方法
PUBLISHED_FPR: Dict[str, Dict[str, float]] = {
    "ECG200": {"sax": 0.12, "esax": 0.1, "saxtd": 0.09, "tfsax": 0.09},
    "Two_Pattern": {"sax": 0.17, "esax": 0.129, "saxtd": 0.071, "tfsax": 0.05},
    "Beef": {"sax": 0.56, "esax": 0.52, "saxtd": 0.2, "tfsax": 0.14},
    "Coffee": {"sax": 0.496, "esax": 0.179, "saxtd": 0.0, "tfsax": 0.12},
    "CBF": {"sax": 0.104, "esax": 0.138, "saxtd": 0.11, "tfsax": 0.08},
}
PUBLISHED_FPR_TOLERANCE = 0.07
CBF_TFSAX_FPR_CEILING = 0.13

_PUBLISHED_NAMES = {
    "ecg200": "ECG200",
    "twopattern": "Two_Pattern",
    "twopatterns": "Two_Pattern",
    "beef": "Beef",
    "coffee": "Coffee",
    "cbf": "CBF",
}


def results_frame(report: EvalReport) -> pd.DataFrame:
    rows = [{column: getattr(r, column) for column in RESULT_COLUMNS} for r in report.results]
    frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    # 无参数的方法留空而不是写成浮点 NaN
    for column in ("w", "alpha", "alpha_t"):
        frame[column] = frame[column].astype("Int64")
    return frame


def ratios_frame(report: EvalReport) -> pd.DataFrame:
    rows = [{column: getattr(r, column) for column in RATIO_COLUMNS} for r in report.results]
    frame = pd.DataFrame(rows, columns=RATIO_COLUMNS)
    frame["w"] = frame["w"].astype("Int64")
    return frame


def runtime_frame(report: EvalReport) -> pd.DataFrame:
    rows = [{column: getattr(r, column) for column in RUNTIME_COLUMNS} for r in report.runtimes]
    return pd.DataFrame(rows, columns=RUNTIME_COLUMNS)


def emit_report(report: EvalReport, output_dir: Path) -> Dict[str, Path]:
    """
    写出报告 CSV（UTF-8、LF、表头、固定列顺序），空的部分不写文件

    Returns:
        部分名称 -> 文件路径

    Raises:
        ReportError: 报告为空或无法写入
    """
    from .lower_bound_audit import summary_frame, write_csv

    if report.is_empty():
        raise ReportError("nothing to report: results, audit and runtime sections are all empty")

    output_dir = Path(output_dir)
    frames = {}
    if report.results:
        frames["results"] = results_frame(report)
        frames["ratios"] = ratios_frame(report)
    if report.audit_summaries:
        frames["tlb"] = summary_frame(report.audit_summaries)
    if report.runtimes:
        frames["runtime"] = runtime_frame(report)

    written = {name: write_csv(frame, output_dir / REPORT_FILES[name]) for name, frame in frames.items()}
    logger.info(f"[Report] wrote {', '.join(p.name for p in written.values())} to {output_dir}")
    return written


def resolve_dataset(name: str, seed: int = 7, data_dir: Optional[Path] = None) -> Dataset:
    """'cbf' 找不到 UCR 文件时使用生成器，'randomwalk' 为随机游走语料，其余名称在 UCR 数据目录中查找"""
    # 在这里导入避免循环导入
    from .generators import gen_cbf, random_walk_dataset
    from .ucr_io import find_ucr_dataset

    if name.lower() == "cbf":
        try:
            return find_ucr_dataset("CBF", data_dir=data_dir)
        except DatasetNotFound:
            return gen_cbf(CBF_TRAIN_PER_CLASS, CBF_LENGTH, seed, test_per_class=CBF_TEST_PER_CLASS)
    if name.lower() == "randomwalk":
        return random_walk_dataset(RANDOM_WALK_SPLIT, RANDOM_WALK_SPLIT, CBF_LENGTH, seed)
    return find_ucr_dataset(name, data_dir=data_dir)


def audit_grids(n: int, alpha_t: int) -> List[GridSpec]:
    """两条 TLB 曲线: w=32 时扫 alpha，alpha=8 时扫 w"""
    w_values = tuple(w for w in BENCH_W_VALUES if w <= n)
    grids = [GridSpec(w_values=w_values, alpha_values=(AUDIT_ALPHA,), alpha_t_values=(alpha_t,))]
    if AUDIT_W <= n:
        grids.insert(0, GridSpec(w_values=(AUDIT_W,), alpha_values=tuple(range(3, 11)),
                                 alpha_t_values=(alpha_t,)))
    return grids


def build_report(dataset_names: Sequence[str], methods: Iterable[str] = ("euclid",) + COMPARED_METHODS,
                 selection: str = "test", seed: int = 7, audit: bool = True, bench: bool = True,
                 data_dir: Optional[Path] = None, max_workers: Optional[int] = None) -> EvalReport:
    """
    运行完整评测

    找不到的 UCR 数据集会被跳过并记录在 notes 中。
    """
    from .benchmark import bench_runtime
    from .classification import evaluate_method
    from .lower_bound_audit import audit_lower_bound
    from .tfsax_config import get_config

    config = get_config()
    methods = list(methods)
    report = EvalReport()
    for name in dataset_names:
        try:
            dataset = resolve_dataset(name, seed=seed, data_dir=data_dir)
        except DatasetNotFound as e:
            logger.warning(f"[Report] skipping {name}: {e}")
            report.notes[name] = f"skipped: {e}"
            continue

        logger.info(f"[Report] {dataset.name}: n={dataset.n} train={len(dataset.train)} "
                    f"test={len(dataset.test)}")
        for method in methods:
            report.results.append(evaluate_method(dataset, method, selection=selection,
                                                  max_workers=max_workers))

        if audit:
            seen = set()
            for grid in audit_grids(dataset.n, config.default_alpha_t):
                _, summaries = audit_lower_bound(dataset, grid, seed=seed, keep_records=False,
                                                 max_workers=max_workers)
                for summary in summaries:
                    key = (summary.w, summary.alpha, summary.alpha_t)
                    if key not in seen:
                        seen.add(key)
                        report.audit_summaries.append(summary)

        if bench:
            w_values = [w for w in BENCH_W_VALUES if w <= dataset.n]
            for method in COMPARED_METHODS:
                report.runtimes.extend(bench_runtime(dataset, method, w_values))
    return report


def non_decreasing_with_slack(values: Sequence[float], max_inversions: int = 1,
                              max_drop: float = 0.01) -> bool:
    """序列非递减，允许最多 max_inversions 次小于 max_drop 的相邻下降"""
    drops = [b - a for a, b in zip(values, values[1:]) if b < a]
    return len(drops) <= max_inversions and all(-drop < max_drop for drop in drops)


def published_fpr(dataset: str) -> Optional[Dict[str, float]]:
    """已发表的错误率；名称不区分大小写与下划线，Two_Patterns 视为 Two_Pattern"""
    key = _PUBLISHED_NAMES.get(dataset.lower().replace("_", ""))
    return PUBLISHED_FPR[key] if key else None


def _best_fpr(report: EvalReport) -> Dict[str, Dict[str, float]]:
    table: Dict[str, Dict[str, float]] = {}
    for result in report.results:
        table.setdefault(result.dataset, {})[result.method] = result.fpr
    return table


def check_acceptance(report: EvalReport) -> List[AcceptanceCheck]:
    """根据报告评估定性结论；数据不足的检查 passed 为 None"""
    checks: List[AcceptanceCheck] = []
    summaries = report.audit_summaries

    if summaries:
        tdist_violations = sum(s.tdist_violations for s in summaries)
        mindist_violations = sum(s.mindist_violations for s in summaries)
        tighter = all(s.mean_tlb_tdist >= s.mean_tlb_mindist for s in summaries)
        checks.append(AcceptanceCheck("mindist_lower_bound", mindist_violations == 0,
                                      f"{mindist_violations} MINDIST > Euclidean violations"))
        checks.append(AcceptanceCheck("tdist_lower_bound", tdist_violations == 0,
                                      f"{tdist_violations} TDIST > Euclidean violations"))
        checks.append(AcceptanceCheck("tdist_tighter_than_mindist", tighter,
                                      "mean TLB(TDIST) >= mean TLB(MINDIST) at every grid point"))
        for dataset in sorted({s.dataset for s in summaries}):
            rows = [s for s in summaries if s.dataset == dataset]
            by_alpha = sorted((s.alpha, s.mean_tlb_tdist) for s in rows if s.w == AUDIT_W)
            by_w = sorted((s.w, s.mean_tlb_tdist) for s in rows if s.alpha == AUDIT_ALPHA)
            for label, curve in ((f"w={AUDIT_W}, alpha sweep", by_alpha),
                                 (f"alpha={AUDIT_ALPHA}, w sweep", by_w)):
                values = [v for _, v in curve]
                passed = non_decreasing_with_slack(values) if len(values) > 1 else None
                checks.append(AcceptanceCheck(f"tlb_monotonic[{dataset}, {label}]", passed,
                                              " ".join(f"{v:.3f}" for v in values)))

    fprs = _best_fpr(report)
    if fprs:
        wins = []
        for dataset, by_method in fprs.items():
            compared = {m: by_method[m] for m in COMPARED_METHODS if m in by_method}
            if "tfsax" in compared and len(compared) > 1:
                if compared["tfsax"] <= min(compared.values()):
                    wins.append(dataset)
        total = sum(1 for by_method in fprs.values() if "tfsax" in by_method)
        passed = len(wins) >= 3 if total >= 5 else None
        checks.append(AcceptanceCheck("tfsax_lowest_fpr", passed,
                                      f"TFSAX lowest on {len(wins)}/{total}: {', '.join(wins)}"))
        cbf = next((by_method for dataset, by_method in fprs.items() if dataset.upper() == "CBF"), None)
        if cbf and "tfsax" in cbf and "sax" in cbf:
            passed = cbf["tfsax"] <= cbf["sax"] and cbf["tfsax"] <= CBF_TFSAX_FPR_CEILING
            checks.append(AcceptanceCheck(
                "cbf_classification", passed,
                f"tfsax={cbf['tfsax']:.3f} sax={cbf['sax']:.3f} "
                f"(needs tfsax <= sax and tfsax <= {CBF_TFSAX_FPR_CEILING})"))

        for dataset, by_method in sorted(fprs.items()):
            published = published_fpr(dataset)
            compared = [m for m in COMPARED_METHODS if m in by_method]
            if published is None or not compared:
                continue
            deviations = {m: by_method[m] - published[m] for m in compared}
            passed = all(abs(d) <= PUBLISHED_FPR_TOLERANCE + 1e-12 for d in deviations.values())
            detail = "; ".join(f"{m} {by_method[m]:.3f} vs {published[m]:.3f} ({d:+.3f})"
                               for m, d in deviations.items())
            checks.append(AcceptanceCheck(f"published_fpr[{dataset}]", passed,
                                          f"{detail} (tolerance {PUBLISHED_FPR_TOLERANCE})"))

    if report.runtimes:
        frame = runtime_frame(report)
        for dataset, rows in frame.groupby("dataset", sort=True):
            monotone = all(np.all(np.diff(group.sort_values("w")["seconds"].to_numpy()) >= 0)
                           for _, group in rows.groupby("method"))
            at_max = rows[rows["w"] == rows["w"].max()]
            slowest = at_max.loc[at_max["seconds"].idxmax(), "method"]
            timings = ", ".join(f"{m} {s:.4f}s" for m, s in zip(at_max["method"], at_max["seconds"]))
            checks.append(AcceptanceCheck(f"runtime_shape[{dataset}]", monotone and slowest == "esax",
                                          f"non-decreasing in w: {monotone}; slowest at "
                                          f"w={rows['w'].max()}: {slowest} ({timings})"))
    return checks


def format_acceptance(checks: List[AcceptanceCheck]) -> str:
    status = {True: "PASS", False: "FAIL", None: "N/A "}
    return "\n".join(f"[{status[c.passed]}] {c.name}: {c.detail}" for c in checks)
