"""Centrality report types."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt

from ledgergraph.models.network import Partition


class Measure(Enum):
    """Centrality measure."""

    DEGREE = "degree"
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"

    @property
    def display_name(self) -> str:
        """What the measure highlights in a financial statements network."""
        names: dict[Measure, str] = {
            Measure.DEGREE: "financial core activities",
            Measure.CLOSENESS: "financial hubs",
            Measure.BETWEENNESS: "financial gateways",
        }
        return names[self]


@dataclass(frozen=True)
class RankedNode:
    """A node picked by ``top_nodes``."""

    node: int
    partition: Partition
    label: str
    score: float
    raw: float
    name: str | None = None


@dataclass
class CentralityReport:
    """Raw and bipartite-normalised scores for one measure over every node.

    Node ids are global: BP nodes first (0..n_bp-1), then FA nodes.
    """

    measure: Measure
    raw: npt.NDArray[np.float64]
    normalized: npt.NDArray[np.float64]
    n_bp: int
    labels: tuple[str, ...]
    names: tuple[str | None, ...]
    constants: dict[str, float] = field(default_factory=dict)
    policy: str = "per-component"

    @property
    def n_nodes(self) -> int:
        """Number of scored nodes."""
        return int(self.raw.shape[0])

    def partition_of(self, node: int) -> Partition:
        """Partition of a global node id."""
        return Partition.BP if node < self.n_bp else Partition.FA
