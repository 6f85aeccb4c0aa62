"""
Unified configuration for tfsaxtools.
Provides centralized defaults for the codecs, the evaluation harness and the CLI.
"""

import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

try:
    from dotenv import load_dotenv

    # 加载环境变量
    load_dotenv()
except ImportError:
    pass


class TfsaxConfig(BaseModel):
    """Global configuration for all tfsaxtools components"""

    # Data locations
    data_dir: Optional[Path] = Field(
        default=None, description="Default UCR dataset root (TFSAX_DATA_DIR)")
    output_dir: Path = Field(default=Path("results"),
                             description="Default directory for CSV output")

    # Parallelism
    max_workers: int = Field(default=4,
                             description="Worker threads for grid points")
    pairwise_chunk_elements: int = Field(
        default=4_000_000,
        description="Upper bound on elements per pairwise distance block")

    # Codec defaults
    default_alpha_t: int = Field(default=5,
                                 description="Trend alphabet size used when none is given")
    normalize_on_load: bool = Field(default=True,
                                    description="z-normalize series on load")
    zeros_on_constant: bool = Field(
        default=False,
        description="Map constant series to all-zeros instead of raising")

    # Lower-bound audit
    audit_max_pairs: int = Field(
        default=10_000,
        description="Use all train x test pairs up to this count, else sample")
    bound_tolerance: float = Field(
        default=1e-9,
        description="Relative slack before a lower bound counts as violated")

    # Logging
    log_level: str = Field(default="INFO", description="Root log level")

    @classmethod
    def from_env(cls) -> "TfsaxConfig":
        """Create config from environment variables"""
        config = cls()

        if data_dir := os.getenv("TFSAX_DATA_DIR"):
            config.data_dir = Path(data_dir)

        if output_dir := os.getenv("TFSAX_OUTPUT_DIR"):
            config.output_dir = Path(output_dir)

        if max_workers := os.getenv("TFSAX_MAX_WORKERS"):
            config.max_workers = max(1, int(max_workers))

        if chunk := os.getenv("TFSAX_PAIRWISE_CHUNK"):
            config.pairwise_chunk_elements = int(chunk)

        if alpha_t := os.getenv("TFSAX_DEFAULT_ALPHA_T"):
            config.default_alpha_t = int(alpha_t)

        if normalize := os.getenv("TFSAX_NORMALIZE_ON_LOAD"):
            config.normalize_on_load = normalize.lower() == "true"

        if zeros := os.getenv("TFSAX_ZEROS_ON_CONSTANT"):
            config.zeros_on_constant = zeros.lower() == "true"

        if max_pairs := os.getenv("TFSAX_AUDIT_MAX_PAIRS"):
            config.audit_max_pairs = int(max_pairs)

        if log_level := os.getenv("TFSAX_LOG_LEVEL"):
            config.log_level = log_level.upper()

        return config


# Global configuration instance
tfsax_config = TfsaxConfig.from_env()


def get_config() -> TfsaxConfig:
    """Get the global tfsaxtools configuration"""
    return tfsax_config


def reload_config() -> TfsaxConfig:
    """Rebuild the global configuration from the current environment"""
    global tfsax_config
    tfsax_config = TfsaxConfig.from_env()
    return tfsax_config
