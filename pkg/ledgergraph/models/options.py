"""Global analysis options."""

import os
from dataclasses import dataclass
from enum import Enum

from ledgergraph.config import NODE_CAP, SIGNIFICANCE, WORKERS_ENV
from ledgergraph.errors import ConfigError


class NormalizationMode(Enum):
    """Which partition constant normalises betweenness."""

    OWN_PARTITION = "own-partition"
    CROSSWISE = "paper-literal"  # U nodes by b_V, V nodes by b_U


class BetweennessMode(Enum):
    """Reading of the betweenness pair term."""

    GEODESIC_FRACTION = "geodesic-fraction"
    LENGTH_WEIGHTED = "length-weighted"


class OutputFormat(Enum):
    """Machine-readable output format."""

    CSV = "csv"
    JSON = "json"


@dataclass
class GlobalConfig:
    """Options shared by every subcommand."""

    node_cap: int | None = NODE_CAP
    significance: float = SIGNIFICANCE
    normalization: NormalizationMode = NormalizationMode.OWN_PARTITION
    betweenness: BetweennessMode = BetweennessMode.GEODESIC_FRACTION
    workers: int = 1
    output_format: OutputFormat = OutputFormat.CSV

    def validate(self) -> "GlobalConfig":
        """Check ranges; raises ConfigError."""
        if self.node_cap is not None and self.node_cap < 1:
            raise ConfigError(f"node cap must be >= 1, got {self.node_cap}")
        if not 0.0 < self.significance < 1.0:
            raise ConfigError(f"significance must lie in (0, 1), got {self.significance}")
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")
        return self


def resolve_workers(flag: int | None) -> int:
    """Worker count: explicit flag, then environment, then 1."""
    if flag is not None:
        return flag
    value = os.environ.get(WORKERS_ENV, "").strip()
    if not value:
        return 1
    try:
        return int(value)
    except ValueError as e:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}") from e
