"""
tfsaxtools 命令行
子命令: encode, dist, classify, audit, gen, bench, report

stdout 只输出数据，诊断信息写到 stderr。
退出码: 0 成功, 1 领域错误, 2 用法 / IO 错误
"""

import functools
import logging
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer

from .exceptions import TfsaxError
from .log_config import setup_debug_logging, setup_default_logging, setup_production_logging
from .tfsax_config import get_config

logger = logging.getLogger(__name__)

app = typer.Typer(help="TFSAX time series representation and evaluation toolkit",
                  no_args_is_help=True, add_completion=False)
gen_app = typer.Typer(help="Generate synthetic datasets", no_args_is_help=True)
app.add_typer(gen_app, name="gen")

CSV_FLOAT_FORMAT = "%.10g"

# distance method -> dist 输出中的名称
_DIST_LABELS = {"sax": "mindist", "tfsax": "tdist", "esax": "esax", "saxtd": "saxtd"}


def parse_range(text: str) -> List[int]:
    """
    解析整数范围

    "5" -> [5]; "3:10" -> [3..10]; "2:64:x2" -> [2, 4, ..., 64]; "2,4,8" -> [2, 4, 8]
    """
    try:
        if "," in text:
            return [int(part) for part in text.split(",") if part.strip()]
        parts = text.split(":")
        if len(parts) == 1:
            return [int(parts[0])]
        start, stop = int(parts[0]), int(parts[1])
        if len(parts) == 2:
            values = list(range(start, stop + 1))
        elif len(parts) == 3 and parts[2].startswith("x"):
            factor = int(parts[2][1:])
            if start < 1 or factor < 2:
                raise ValueError("doubling range needs start >= 1 and factor >= 2")
            values = []
            value = start
            while value <= stop:
                values.append(value)
                value *= factor
        else:
            raise ValueError("expected a:b or a:b:xK")
    except ValueError as e:
        raise typer.BadParameter(f"invalid range {text!r}: {e}") from None
    if not values:
        raise typer.BadParameter(f"range {text!r} is empty")
    return values


def handle_errors(func):
    """把 TfsaxError 转成 stderr 消息和对应的退出码"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TfsaxError as e:
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=e.exit_code) from None

    return wrapper


def _emit(text: str, output: Optional[Path]):
    if output is None:
        typer.echo(text, nl=False)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8", newline="\n")
    logger.info(f"wrote {output}")


def _frame_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)


def _load_split(path: Path, normalize: bool, zeros_on_constant: bool):
    from .ucr_io import read_ucr_series

    return read_ucr_series(path, normalize=normalize, zeros_on_constant=zeros_on_constant)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Warnings and errors only"),
):
    """TFSAX toolkit"""
    if verbose:
        setup_debug_logging()
    elif quiet:
        setup_production_logging()
    else:
        setup_default_logging()


@app.command()
@handle_errors
def encode(
    method: str = typer.Option("tfsax", help="sax, esax, saxtd or tfsax"),
    w: int = typer.Option(..., help="Segment count"),
    alpha: int = typer.Option(..., help="Alphabet size"),
    alpha_t: Optional[int] = typer.Option(None, "--alpha-t", help="Trend alphabet size (tfsax)"),
    input_path: Path = typer.Option(..., "--input", "-i", help="UCR file"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Output file (default stdout)"),
    no_normalize: bool = typer.Option(False, "--no-normalize", help="Skip z-normalization"),
    zeros_on_constant: bool = typer.Option(False, "--zeros-on-constant",
                                           help="Map constant series to zeros"),
):
    """Encode every series of a UCR file into words, one per line"""
    from .distance_methods import get_method
    from .tfsax import encode_word, format_words

    if get_method(method).uses_trend_alpha and alpha_t is None:
        alpha_t = get_config().default_alpha_t
    series = _load_split(input_path, not no_normalize, zeros_on_constant)
    words = [encode_word(s, method, w, alpha, alpha_t) for s in series]
    params = {"w": w, "alpha": alpha, "alpha_t": alpha_t if method.lower() == "tfsax" else None}
    _emit(format_words(words, method.lower(), params), output)


@app.command()
@handle_errors
def dist(
    input_path: Path = typer.Option(..., "--input", help="UCR file holding both series"),
    i: int = typer.Option(0, "--i", help="Row index of the first series"),
    j: int = typer.Option(1, "--j", help="Row index of the second series"),
    method: str = typer.Option("tfsax", help="Additional method to report"),
    w: int = typer.Option(..., help="Segment count"),
    alpha: int = typer.Option(..., help="Alphabet size"),
    alpha_t: Optional[int] = typer.Option(None, "--alpha-t", help="Trend alphabet size"),
    no_normalize: bool = typer.Option(False, "--no-normalize", help="Skip z-normalization"),
):
    """Euclidean, MINDIST, TDIST and their TLBs for one pair of series"""
    from .distance_methods import get_method
    from .series_core import euclidean

    alpha_t = alpha_t if alpha_t is not None else get_config().default_alpha_t
    series = _load_split(input_path, not no_normalize, False)
    for index in (i, j):
        if not 0 <= index < len(series):
            raise typer.BadParameter(f"row {index} outside 0..{len(series) - 1}")
    a, b = series[i].values, series[j].values

    euclid = euclidean(a, b)
    lines = [f"euclid\t{euclid:.6f}"]
    names = ["sax", "tfsax"] + ([method.lower()] if method.lower() not in ("sax", "tfsax", "euclid") else [])
    for name in names:
        value = get_method(name).distance(a, b, w=w, alpha=alpha, alpha_t=alpha_t)
        label = _DIST_LABELS[name]
        lines.append(f"{label}\t{value:.6f}")
        if euclid > 0:
            lines.append(f"tlb_{label}\t{value / euclid:.6f}")
    if euclid == 0:
        logger.warning("identical series: TLB is undefined")
    _emit("\n".join(lines) + "\n", None)


@app.command()
@handle_errors
def classify(
    method: str = typer.Option("tfsax", help="euclid, sax, esax, saxtd or tfsax"),
    train: Path = typer.Option(..., "--train", help="UCR train file"),
    test: Path = typer.Option(..., "--test", help="UCR test file"),
    grid: bool = typer.Option(False, "--grid", help="Search the doubling w grid and alpha 3..10"),
    w: Optional[int] = typer.Option(None, help="Fixed segment count"),
    alpha: Optional[int] = typer.Option(None, help="Fixed alphabet size"),
    alpha_t: Optional[int] = typer.Option(None, "--alpha-t", help="Trend alphabet size"),
    alphas: str = typer.Option("3:10", help="Alphabet range for --grid"),
    honest_selection: bool = typer.Option(False, "--honest-selection",
                                          help="Select parameters by leave-one-out on train"),
    sweep_trend_alpha: bool = typer.Option(False, "--sweep-trend-alpha",
                                           help="Also search alpha_t in 2..6"),
    grid_csv: Optional[Path] = typer.Option(None, "--grid-csv", help="Write every grid point"),
    no_normalize: bool = typer.Option(False, "--no-normalize", help="Skip z-normalization"),
):
    """1-NN classification error rate with fixed parameters or a grid search"""
    from .classification import classify_1nn, grid_search, reduction_ratio
    from .distance_methods import get_method
    from .lower_bound_audit import write_csv
    from .models import EvalReport, GridSpec, MethodResult
    from .report import results_frame

    distance_method = get_method(method)
    if grid and (w is not None or alpha is not None):
        raise typer.BadParameter("--grid cannot be combined with --w/--alpha")
    if distance_method.uses_params and not grid and (w is None or alpha is None):
        raise typer.BadParameter(f"method {method!r} needs --grid or both --w and --alpha")

    train_series = _load_split(train, not no_normalize, False)
    test_series = _load_split(test, not no_normalize, False)
    n = len(train_series[0])
    selection = "train" if honest_selection else "test"
    default_alpha_t = alpha_t if alpha_t is not None else get_config().default_alpha_t

    if grid or not distance_method.uses_params:
        alpha_t_values = tuple(range(2, 7)) if sweep_trend_alpha else (default_alpha_t,)
        grid_spec = (GridSpec.for_length(n, alpha_values=tuple(parse_range(alphas)),
                                         alpha_t_values=alpha_t_values)
                     if distance_method.uses_params else None)
        result = grid_search(train_series, test_series, method, grid_spec, selection=selection)
        best_w, best_alpha, best_alpha_t = result.best
        fpr, errors = result.fpr, result.errors
        if grid_csv is not None:
            rows = [{"method": result.method, "w": e.point[0], "alpha": e.point[1],
                     "alpha_t": e.point[2], "errors": e.errors, "total": e.total, "fpr": e.fpr}
                    for e in result.evaluations]
            frame = pd.DataFrame(rows, columns=["method", "w", "alpha", "alpha_t", "errors", "total", "fpr"])
            for column in ("w", "alpha", "alpha_t"):
                frame[column] = frame[column].astype("Int64")
            write_csv(frame, grid_csv)
    else:
        best_w, best_alpha = w, alpha
        best_alpha_t = default_alpha_t if distance_method.uses_trend_alpha else None
        fpr = classify_1nn(train_series, test_series, method,
                           {"w": best_w, "alpha": best_alpha, "alpha_t": best_alpha_t})
        errors = int(round(fpr * len(test_series)))
        selection = "fixed"

    row = MethodResult(dataset=train.name, method=distance_method.name, n=n, w=best_w, alpha=best_alpha,
                       alpha_t=best_alpha_t, ratio=reduction_ratio(method, best_w, n), fpr=fpr,
                       errors=errors, n_test=len(test_series), seconds=0.0, selection=selection)
    _emit(_frame_text(results_frame(EvalReport(results=[row]))), None)


@app.command()
@handle_errors
def audit(
    dataset: Optional[str] = typer.Option(None, "--dataset", help="Dataset name (cbf, randomwalk or UCR)"),
    train: Optional[Path] = typer.Option(None, "--train", help="UCR train file"),
    test: Optional[Path] = typer.Option(None, "--test", help="UCR test file"),
    w: str = typer.Option("32", "--w", help="w values, e.g. 32 or 2:64:x2"),
    alphas: str = typer.Option("3:10", help="Alphabet range"),
    alpha_t: Optional[int] = typer.Option(None, "--alpha-t", help="Trend alphabet size"),
    samples: Optional[int] = typer.Option(None, help="Maximum number of pairs"),
    seed: int = typer.Option(0, help="Sampling seed"),
    data_dir: Optional[Path] = typer.Option(None, "--data-dir", help="UCR root (default TFSAX_DATA_DIR)"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="CSV directory"),
):
    """Lower-bound audit: Euclidean, MINDIST, TDIST and SAX-TD on sampled pairs"""
    from .lower_bound_audit import audit_lower_bound, summary_frame, write_audit
    from .models import GridSpec
    from .report import resolve_dataset
    from .ucr_io import load_ucr

    if (dataset is None) == (train is None):
        raise typer.BadParameter("give either --dataset or --train [--test]")
    if dataset is not None:
        data = resolve_dataset(dataset, seed=seed, data_dir=data_dir)
    else:
        data = load_ucr(train, test_path=test)

    grid = GridSpec(w_values=tuple(parse_range(w)), alpha_values=tuple(parse_range(alphas)),
                    alpha_t_values=(alpha_t or get_config().default_alpha_t,))
    records, summaries = audit_lower_bound(data, grid, samples=samples, seed=seed)
    if records:
        write_audit(records, summaries, output_dir or get_config().output_dir, data.name)
    _emit(_frame_text(summary_frame(summaries)), None)


@gen_app.command("cbf")
@handle_errors
def gen_cbf_command(
    per_class: int = typer.Option(..., "--per-class", help="Train series per class"),
    test_per_class: Optional[int] = typer.Option(None, "--test-per-class",
                                                 help="Test series per class (default --per-class)"),
    length: int = typer.Option(128, "--len", help="Series length (>= 16)"),
    seed: int = typer.Option(..., help="Random seed"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Output directory"),
):
    """Cylinder-Bell-Funnel train/test files in UCR format"""
    from .generators import gen_cbf
    from .ucr_io import write_dataset

    dataset = gen_cbf(per_class, length, seed, test_per_class=test_per_class)
    for path in write_dataset(dataset, output_dir or get_config().output_dir):
        typer.echo(str(path))


@app.command()
@handle_errors
def bench(
    dataset: str = typer.Option("cbf", "--dataset", help="Dataset name"),
    w: str = typer.Option("2:64:x2", "--w", help="w values"),
    alpha: int = typer.Option(10, help="Fixed alphabet size"),
    methods: str = typer.Option("sax,esax,saxtd,tfsax", help="Comma-separated methods"),
    repeats: int = typer.Option(3, help="Repetitions per point (minimum is kept)"),
    seed: int = typer.Option(7, help="Seed for generated datasets"),
    data_dir: Optional[Path] = typer.Option(None, "--data-dir", help="UCR root"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV file (default stdout)"),
):
    """Transform + classify wall-clock time per w"""
    from .benchmark import bench_runtime
    from .lower_bound_audit import write_csv
    from .models import EvalReport
    from .report import resolve_dataset, runtime_frame

    data = resolve_dataset(dataset, seed=seed, data_dir=data_dir)
    rows = []
    for method in (m.strip() for m in methods.split(",") if m.strip()):
        rows.extend(bench_runtime(data, method, parse_range(w), alpha=alpha, repeats=repeats))
    frame = runtime_frame(EvalReport(runtimes=rows))
    if output is None:
        _emit(_frame_text(frame), None)
    else:
        write_csv(frame, output)


@app.command()
@handle_errors
def report(
    datasets: str = typer.Option("cbf", "--datasets", help="Comma-separated dataset names"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="CSV directory"),
    seed: int = typer.Option(7, help="Seed for generated datasets and audit sampling"),
    honest_selection: bool = typer.Option(False, "--honest-selection",
                                          help="Select parameters by leave-one-out on train"),
    no_audit: bool = typer.Option(False, "--no-audit", help="Skip the lower-bound audit"),
    no_bench: bool = typer.Option(False, "--no-bench", help="Skip runtime measurement"),
    data_dir: Optional[Path] = typer.Option(None, "--data-dir", help="UCR root"),
):
    """Full evaluation: classification, audit and runtime CSVs plus an acceptance summary"""
    from .report import build_report, check_acceptance, emit_report, format_acceptance

    names = [name.strip() for name in datasets.split(",") if name.strip()]
    result = build_report(names, selection="train" if honest_selection else "test", seed=seed,
                          audit=not no_audit, bench=not no_bench, data_dir=data_dir)
    emit_report(result, output_dir or get_config().output_dir)
    for name, note in result.notes.items():
        typer.echo(f"{name}: {note}", err=True)
    _emit(format_acceptance(check_acceptance(result)) + "\n", None)


if __name__ == "__main__":
    app()
