"""
UCR 文本格式读写
每行: 类别标签 + n 个数值，逗号、制表符或空格分隔；支持 .gz
"""

import gzip
import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from .exceptions import DatasetNotFound, ParseError, RaggedRows
from .models import Dataset, TimeSeries
from .series_core import znormalize_matrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_SEPARATORS = re.compile(r"[,\t ]+")

# 同一个数据集在不同 UCR 版本中的名字
_ALIASES = {
    "two_pattern": ("Two_Patterns", "Two_Pattern", "TwoPatterns"),
    "two_patterns": ("Two_Patterns", "Two_Pattern", "TwoPatterns"),
    "twopatterns": ("TwoPatterns", "Two_Patterns", "Two_Pattern"),
}

_SUFFIXES = ("", ".txt", ".tsv", ".csv")


def _open_text(path: Path):
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def _parse_label(token: str, line_number: int) -> int:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"label {token!r} is not numeric", line_number) from None
    if not np.isfinite(value) or value != round(value):
        raise ParseError(f"label {token!r} is not an integer", line_number)
    return int(round(value))


def parse_ucr_lines(lines: Iterable[str], source: str = "<text>") -> Tuple[np.ndarray, np.ndarray]:
    """
    解析 UCR 行

    Returns:
        labels: (m,) 整数, matrix: (m, n) 原始数值

    Raises:
        ParseError: 无法解析的行或空输入
        RaggedRows: 行长度不一致
    """
    labels: List[int] = []
    rows: List[List[float]] = []
    width = None
    for line_number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        tokens = _SEPARATORS.split(text)
        if len(tokens) < 3:
            raise ParseError("row needs a label and at least two values", line_number)
        label = _parse_label(tokens[0], line_number)
        try:
            values = [float(token) for token in tokens[1:]]
        except ValueError as exc:
            raise ParseError(f"non-numeric value: {exc}", line_number) from None
        if not np.all(np.isfinite(values)):
            raise ParseError("row contains NaN or Inf", line_number)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise RaggedRows(f"row has {len(values)} values, expected {width}", line_number)
        labels.append(label)
        rows.append(values)

    if not rows:
        raise ParseError(f"{source} contains no series")
    return np.array(labels, dtype=np.int64), np.array(rows, dtype=np.float64)


def read_ucr_series(path: PathLike, normalize: Optional[bool] = None,
                    zeros_on_constant: Optional[bool] = None) -> List[TimeSeries]:
    """
    读取单个 UCR 文件（一个划分）

    Args:
        path: 文件路径，.gz 结尾时按 gzip 读取
        normalize: 是否 z-normalize，默认取配置
        zeros_on_constant: 常数序列置零而不是报错，默认取配置
    """
    from .tfsax_config import get_config

    config = get_config()
    if normalize is None:
        normalize = config.normalize_on_load
    if zeros_on_constant is None:
        zeros_on_constant = config.zeros_on_constant

    path = Path(path)
    if not path.is_file():
        raise DatasetNotFound(f"no such file: {path}")

    with _open_text(path) as handle:
        labels, matrix = parse_ucr_lines(handle, source=str(path))

    if normalize:
        matrix = znormalize_matrix(matrix, zeros_on_constant=zeros_on_constant)

    stem = _split_name(path)[0]
    logger.info(f"[UCR] {path.name}: {matrix.shape[0]} series of length {matrix.shape[1]}")
    return [TimeSeries(values=row, label=int(label), id=f"{stem}:{index}")
            for index, (label, row) in enumerate(zip(labels, matrix))]


def _split_name(path: Path) -> Tuple[str, Optional[str]]:
    """'Coffee_TRAIN.tsv.gz' -> ('Coffee', 'TRAIN')"""
    name = path.name
    if name.endswith(".gz"):
        name = name[:-3]
    for suffix in _SUFFIXES[1:]:
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    for split in ("TRAIN", "TEST"):
        if name.upper().endswith("_" + split):
            return name[: -len(split) - 1], split
    return name, None


def load_ucr(path: PathLike, test_path: Optional[PathLike] = None,
             normalize: Optional[bool] = None, zeros_on_constant: Optional[bool] = None,
             name: Optional[str] = None) -> Dataset:
    """
    读取 UCR 数据集

    path 为 *_TRAIN 文件时自动寻找同目录的 *_TEST 文件；
    path 为目录时在目录内寻找训练/测试文件；
    也可以用 test_path 显式指定测试文件。
    """
    path = Path(path)
    if path.is_dir():
        return find_ucr_dataset(name or path.name, data_dir=path.parent,
                                normalize=normalize, zeros_on_constant=zeros_on_constant)

    stem, split = _split_name(path)
    train = read_ucr_series(path, normalize, zeros_on_constant)
    test: List[TimeSeries] = []
    if test_path is not None:
        test = read_ucr_series(test_path, normalize, zeros_on_constant)
    elif split == "TRAIN":
        sibling = _sibling_test_file(path)
        if sibling is not None:
            test = read_ucr_series(sibling, normalize, zeros_on_constant)
    return Dataset(name=name or stem, train=train, test=test)


def _sibling_test_file(train_path: Path) -> Optional[Path]:
    name = train_path.name
    index = name.upper().rfind("_TRAIN")
    candidate = train_path.with_name(name[:index] + "_TEST" + name[index + len("_TRAIN"):])
    return candidate if candidate.is_file() else None


def _match_case(root: Path, name: str) -> str:
    """在 root 下按大小写不敏感匹配数据集名 ('beef' -> 'Beef')"""
    if not root.is_dir():
        return name
    prefix = name.lower()
    for entry in sorted(root.iterdir()):
        entry_name = entry.name.lower()
        if entry_name == prefix or entry_name.startswith(prefix + "_train"):
            return entry.name if entry.is_dir() else entry.name[:len(name)]
    return name


def _candidate_files(root: Path, name: str, split: str) -> Iterable[Path]:
    for folder in (root / name, root):
        for suffix in _SUFFIXES:
            base = folder / f"{name}_{split}{suffix}"
            yield base
            yield base.with_name(base.name + ".gz")


def find_ucr_dataset(name: str, data_dir: Optional[PathLike] = None,
                     normalize: Optional[bool] = None,
                     zeros_on_constant: Optional[bool] = None) -> Dataset:
    """
    按名称在数据目录中查找 <name>_TRAIN / <name>_TEST

    数据目录默认取 TFSAX_DATA_DIR；Two_Pattern 与 TwoPatterns 视为同名。
    """
    from .tfsax_config import get_config

    root = Path(data_dir) if data_dir is not None else get_config().data_dir
    if root is None:
        raise DatasetNotFound(f"dataset {name!r}: no data directory (set TFSAX_DATA_DIR)")

    for alias in _ALIASES.get(name.lower(), (name,)):
        alias = _match_case(root, alias)
        files = {}
        for split in ("TRAIN", "TEST"):
            files[split] = next((p for p in _candidate_files(root, alias, split) if p.is_file()), None)
        if files["TRAIN"] is None:
            continue
        if files["TEST"] is None:
            raise DatasetNotFound(f"dataset {alias!r} has a train file but no test file under {root}")
        logger.info(f"[UCR] found {alias} under {root}")
        return Dataset(
            name=alias,
            train=read_ucr_series(files["TRAIN"], normalize, zeros_on_constant),
            test=read_ucr_series(files["TEST"], normalize, zeros_on_constant),
        )
    raise DatasetNotFound(f"dataset {name!r} not found under {root}")


def format_ucr_row(series: TimeSeries) -> str:
    label = 0 if series.label is None else series.label
    return ",".join([str(label)] + [format(float(v), ".17g") for v in series.values])


def write_ucr(series: List[TimeSeries], path: PathLike) -> Path:
    """写出 UCR 文件（逗号分隔，LF 换行），输出可逐字节复现"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(format_ucr_row(s) + "\n" for s in series)
    if path.suffix == ".gz":
        # mtime=0 使压缩结果可复现
        with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as handle:
            handle.write(text.encode("utf-8"))
    else:
        path.write_text(text, encoding="utf-8", newline="\n")
    logger.debug(f"[UCR] wrote {len(series)} series to {path}")
    return path


def write_dataset(dataset: Dataset, output_dir: PathLike) -> Tuple[Path, Path]:
    """写出 <name>_TRAIN.txt 与 <name>_TEST.txt"""
    output_dir = Path(output_dir)
    return (write_ucr(dataset.train, output_dir / f"{dataset.name}_TRAIN.txt"),
            write_ucr(dataset.test, output_dir / f"{dataset.name}_TEST.txt"))
