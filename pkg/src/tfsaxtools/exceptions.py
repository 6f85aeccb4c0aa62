"""
异常定义
所有模块抛出的领域错误都继承自 TfsaxError，CLI 根据 exit_code 决定退出码
"""

from typing import Optional


class TfsaxError(Exception):
    """tfsaxtools 的基础异常"""

    # 1 = 领域错误, 2 = 用法 / IO 错误
    exit_code: int = 1


class InvalidSeries(TfsaxError):
    """序列长度不足或含有 NaN/Inf"""


class ConstantSeries(TfsaxError):
    """标准差低于阈值，无法 z-normalize"""


class InvalidW(TfsaxError):
    """分段数 w 超出 [1, n]"""


class LengthMismatch(TfsaxError):
    """两条序列（或数据集内序列）长度不一致"""


class InvalidAlpha(TfsaxError):
    """字母表大小 alpha 不受支持"""


class UnsupportedTrendAlpha(TfsaxError):
    """趋势字母表大小 alpha_t 不在 2..6"""


class SymbolOutOfRange(TfsaxError):
    """符号索引超出 [1, alpha]"""


class ParamMismatch(TfsaxError):
    """两个单词的 (n, w, alpha, alpha_t) 不一致"""


class UnknownMethod(TfsaxError):
    """未注册的距离方法"""


class ZeroEuclidean(TfsaxError):
    """欧氏距离为 0，TLB 无定义"""


class EmptyDataset(TfsaxError):
    """数据集为空"""


class ParseError(TfsaxError):
    """UCR 文本或单词解析失败"""

    exit_code = 2

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class RaggedRows(ParseError):
    """同一文件中序列长度不一致"""


class ReportError(TfsaxError):
    """结果文件写入失败"""

    exit_code = 2


class DatasetNotFound(TfsaxError):
    """在数据目录中找不到数据集文件"""

    exit_code = 2
