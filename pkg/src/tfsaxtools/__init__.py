"""
TFSAX time series toolkit.

This package provides the TFSAX symbolic representation (SAX mean symbols plus
trend symbols), the TDIST distance, a lower-bound audit, and a 1-NN evaluation
harness comparing SAX, ESAX, SAX-TD and TFSAX.
"""

# Core components
from .exceptions import TfsaxError
from .models import Dataset, GridSpec, TfsaxWord, TimeSeries
from .tfsax_config import TfsaxConfig, get_config

# Codecs and distances
from .series_core import euclidean, paa, segment, znormalize
from .sax_codec import gaussian_breakpoints, mindist, sax_symbolize, symbol_dist
from .trend_codec import angle_breakpoints, tfdist, trend_angle, trend_points, trend_symbolize
from .tfsax import tdist, tfsax_encode, tlb
from .baselines import esax_dist, esax_encode, saxtd_dist, saxtd_encode
from .distance_methods import get_method

# Evaluation harness
from .ucr_io import load_ucr, write_ucr
from .generators import gen_cbf, gen_random_walk
from .lower_bound_audit import audit_lower_bound
from .classification import classify_1nn, grid_search, reduction_ratio
from .benchmark import bench_runtime
from .report import check_acceptance, emit_report

__all__ = [
    # Core components
    "TfsaxError",
    "Dataset",
    "GridSpec",
    "TfsaxWord",
    "TimeSeries",
    "TfsaxConfig",
    "get_config",
    # Codecs and distances
    "euclidean",
    "paa",
    "segment",
    "znormalize",
    "gaussian_breakpoints",
    "mindist",
    "sax_symbolize",
    "symbol_dist",
    "angle_breakpoints",
    "tfdist",
    "trend_angle",
    "trend_points",
    "trend_symbolize",
    "tdist",
    "tfsax_encode",
    "tlb",
    "esax_dist",
    "esax_encode",
    "saxtd_dist",
    "saxtd_encode",
    "get_method",
    # Evaluation harness
    "load_ucr",
    "write_ucr",
    "gen_cbf",
    "gen_random_walk",
    "audit_lower_bound",
    "classify_1nn",
    "grid_search",
    "reduction_ratio",
    "bench_runtime",
    "check_acceptance",
    "emit_report",
]
