"""Bipartite graph storage and shortest-path algorithms."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property
from multiprocessing import Pool
from typing import TypeVar

import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _scipy_components
from scipy.sparse.csgraph import shortest_path

from ledgergraph.config import SWEEP_CHUNK_SIZE
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import DegreeSequence, FinancialStatementsNetwork, Partition

logger = logging.getLogger(__name__)

UNREACHABLE: int = -1

IntArray = npt.NDArray[np.int64]
FloatArray = npt.NDArray[np.float64]
T = TypeVar("T")


class GraphError(LedgerGraphError):
    """Graph algorithm precondition not met."""

    pass


@dataclass(frozen=True, eq=False)
class BipartiteAdjacency:
    """Compressed adjacency of a bipartite graph.

    Global node ids: BP nodes (partition U) are 0..n_bp-1, FA nodes (partition V) follow.
    ``indptr``/``indices`` hold both directions of every edge, neighbours sorted.
    """

    n_bp: int
    n_fa: int
    indptr: IntArray
    indices: IntArray
    labels: tuple[str, ...]
    names: tuple[str | None, ...]

    @classmethod
    def from_edges(
        cls,
        n_bp: int,
        n_fa: int,
        edges: Sequence[tuple[int, int]],
        labels: Sequence[str] | None = None,
        names: Sequence[str | None] | None = None,
    ) -> "BipartiteAdjacency":
        """Build from (bp_index, fa_index) pairs. Duplicate pairs collapse to one edge."""
        n = n_bp + n_fa
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if pairs.size:
            if (pairs[:, 0] < 0).any() or (pairs[:, 0] >= n_bp).any():
                raise GraphError("business process index out of range")
            if (pairs[:, 1] < 0).any() or (pairs[:, 1] >= n_fa).any():
                raise GraphError("financial account index out of range")
            pairs = np.unique(pairs, axis=0)

        bp = pairs[:, 0]
        fa = pairs[:, 1] + n_bp
        src = np.concatenate([bp, fa])
        dst = np.concatenate([fa, bp])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        if labels is None:
            labels = [f"U{i + 1}" for i in range(n_bp)] + [f"V{i + 1}" for i in range(n_fa)]
        if names is None:
            names = [None] * n
        if len(labels) != n or len(names) != n:
            raise GraphError("labels and names must cover every node")

        return cls(
            n_bp=n_bp,
            n_fa=n_fa,
            indptr=indptr,
            indices=dst.astype(np.int64),
            labels=tuple(labels),
            names=tuple(names),
        )

    @classmethod
    def from_network(cls, net: FinancialStatementsNetwork) -> "BipartiteAdjacency":
        """Adjacency of a financial statements network; BP nodes labelled BP1, BP2, ..."""
        labels = [f"BP{i + 1}" for i in range(net.n_bp)] + [fa.account_id for fa in net.fa_nodes]
        names: list[str | None] = [bp.pattern.description for bp in net.bp_nodes]
        names.extend(fa.name for fa in net.fa_nodes)
        return cls.from_edges(net.n_bp, net.n_fa, list(net.edges), labels, names)

    @property
    def n_nodes(self) -> int:
        """Total node count."""
        return self.n_bp + self.n_fa

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return int(self.indices.size // 2)

    @cached_property
    def degrees(self) -> IntArray:
        """Degree of every node."""
        return np.diff(self.indptr)

    @cached_property
    def csr(self) -> csr_matrix:
        """Symmetric unit-weight sparse matrix."""
        data = np.ones(self.indices.size, dtype=np.float64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n_nodes, self.n_nodes))

    def partition_of(self, node: int) -> Partition:
        """Partition of a global node id."""
        if not 0 <= node < self.n_nodes:
            raise GraphError(f"node {node} not in graph")
        return Partition.BP if node < self.n_bp else Partition.FA

    def neighbors(self, node: int) -> IntArray:
        """Neighbours of one node."""
        return self.indices[self.indptr[node]:self.indptr[node + 1]]

    def gather_neighbors(self, nodes: IntArray) -> tuple[IntArray, IntArray]:
        """Expand a node set: parallel arrays (node, neighbour) over every incident edge."""
        starts = self.indptr[nodes]
        counts = self.indptr[nodes + 1] - starts
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        src = np.repeat(nodes, counts)
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(total)
        return src, self.indices[offsets]

    def degree_sequence(self, partition: Partition) -> DegreeSequence:
        """Degrees of one partition for tail fitting."""
        if partition is Partition.BP:
            return DegreeSequence.from_degrees(self.degrees[:self.n_bp], partition)
        return DegreeSequence.from_degrees(self.degrees[self.n_bp:], partition)


@dataclass(frozen=True)
class Components:
    """Component labelling: every node carries the smallest node id of its component."""

    labels: IntArray
    n_bp: int

    @property
    def count(self) -> int:
        """Number of components."""
        return int(np.unique(self.labels).size)

    def sizes(self) -> dict[int, int]:
        """Component label -> node count, by ascending label."""
        values, counts = np.unique(self.labels, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def largest(self) -> int:
        """Label of the largest component; ties go to the smallest label."""
        sizes = self.sizes()
        return max(sizes, key=lambda label: (sizes[label], -label))

    def members(self, label: int) -> IntArray:
        """Node ids of one component, ascending."""
        return np.flatnonzero(self.labels == label).astype(np.int64)

    def partition_sizes(self) -> tuple[IntArray, IntArray]:
        """Per node: (BP count, FA count) of the node's component."""
        n = self.labels.size
        is_bp = (np.arange(n) < self.n_bp).astype(np.float64)
        bp_count = np.bincount(self.labels, weights=is_bp, minlength=n).astype(np.int64)
        fa_count = np.bincount(self.labels, weights=1.0 - is_bp, minlength=n).astype(np.int64)
        return bp_count[self.labels], fa_count[self.labels]


@dataclass(frozen=True)
class DiameterResult:
    """Diameter with the policy used to obtain it."""

    value: int
    component_policy: str
    component_label: int
    component_size: int
    n_components: int


def distance_rows(graph: BipartiteAdjacency, sources: IntArray) -> FloatArray:
    """Hop distances from each source to every node; unreachable is inf."""
    rows = shortest_path(
        graph.csr, method="D", directed=True, unweighted=True, indices=np.asarray(sources)
    )
    return np.atleast_2d(rows)


def bfs_distances(graph: BipartiteAdjacency, source: int) -> IntArray:
    """Exact hop distances from one node; unreachable nodes hold UNREACHABLE."""
    graph.partition_of(source)
    row = distance_rows(graph, np.array([source], dtype=np.int64))[0]
    out = np.full(graph.n_nodes, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(row)
    out[finite] = row[finite].astype(np.int64)
    return out


def connected_components(graph: BipartiteAdjacency) -> Components:
    """Label components by their smallest node id."""
    n = graph.n_nodes
    n_comp, raw = _scipy_components(graph.csr, directed=False)
    smallest = np.full(n_comp, n, dtype=np.int64)
    np.minimum.at(smallest, raw, np.arange(n, dtype=np.int64))
    return Components(labels=smallest[raw], n_bp=graph.n_bp)


def sweep(
    graph: BipartiteAdjacency,
    sources: IntArray,
    kernel: Callable[[BipartiteAdjacency, IntArray], T],
    workers: int = 1,
    chunk_size: int = SWEEP_CHUNK_SIZE,
) -> list[T]:
    """Run ``kernel`` over fixed-size source chunks, results in chunk order.

    Chunking does not depend on ``workers``, so reductions over the returned list are
    bitwise identical for every worker count. ``kernel`` must be a module-level function.
    """
    chunks = [sources[i:i + chunk_size] for i in range(0, len(sources), chunk_size)]
    if workers <= 1 or len(chunks) <= 1:
        return [kernel(graph, chunk) for chunk in chunks]

    with Pool(
        processes=min(workers, len(chunks)),
        initializer=_install_graph,
        initargs=(graph,),
    ) as pool:
        return pool.map(_run_chunk, [(kernel, chunk) for chunk in chunks])


def diameter(graph: BipartiteAdjacency, workers: int = 1) -> DiameterResult:
    """Exact diameter of the largest connected component by a BFS from each of its nodes."""
    if graph.n_edges == 0:
        raise GraphError("diameter undefined: graph has no edges")

    components = connected_components(graph)
    label = components.largest()
    members = components.members(label)
    eccentricities = sweep(graph, members, _eccentricity_kernel, workers)
    value = int(max(int(e.max()) for e in eccentricities))
    if components.count > 1:
        logger.debug(
            "diameter taken over largest of %d components (%d nodes)",
            components.count, members.size,
        )
    return DiameterResult(
        value=value,
        component_policy="largest-component",
        component_label=label,
        component_size=int(members.size),
        n_components=components.count,
    )


def _eccentricity_kernel(graph: BipartiteAdjacency, chunk: IntArray) -> IntArray:
    """Largest finite distance from each source."""
    rows = distance_rows(graph, chunk)
    rows[~np.isfinite(rows)] = 0.0
    return rows.max(axis=1).astype(np.int64)


_WORKER_GRAPH: BipartiteAdjacency | None = None


def _install_graph(graph: BipartiteAdjacency) -> None:
    """Pool initializer: keep the graph in the worker process."""
    global _WORKER_GRAPH
    _WORKER_GRAPH = graph


def _run_chunk(task: tuple[Callable[[BipartiteAdjacency, IntArray], T], IntArray]) -> T:
    """Pool task wrapper."""
    kernel, chunk = task
    assert _WORKER_GRAPH is not None
    return kernel(_WORKER_GRAPH, chunk)


@dataclass(frozen=True)
class NetworkSummary:
    """Size, connectivity and density of one network."""

    n_bp: int
    n_fa: int
    n_edges: int
    n_components: int
    largest_component: int
    diameter: DiameterResult | None
    mean_degree_bp: float
    mean_degree_fa: float
    density: float

    def to_dict(self) -> dict[str, object]:
        """JSON-ready mapping."""
        return {
            "n_bp": self.n_bp,
            "n_fa": self.n_fa,
            "n_edges": self.n_edges,
            "n_components": self.n_components,
            "largest_component": self.largest_component,
            "diameter": self.diameter.value if self.diameter else None,
            "diameter_policy": self.diameter.component_policy if self.diameter else None,
            "mean_degree_bp": self.mean_degree_bp,
            "mean_degree_fa": self.mean_degree_fa,
            "density": self.density,
        }


def summarize_network(graph: BipartiteAdjacency, workers: int = 1) -> NetworkSummary:
    """Counts, components, diameter and bipartite density |E| / (|U| |V|)."""
    components = connected_components(graph)
    sizes = components.sizes()
    degrees = graph.degrees
    return NetworkSummary(
        n_bp=graph.n_bp,
        n_fa=graph.n_fa,
        n_edges=graph.n_edges,
        n_components=components.count,
        largest_component=sizes[components.largest()] if sizes else 0,
        diameter=diameter(graph, workers) if graph.n_edges else None,
        mean_degree_bp=float(degrees[:graph.n_bp].mean()) if graph.n_bp else 0.0,
        mean_degree_fa=float(degrees[graph.n_bp:].mean()) if graph.n_fa else 0.0,
        density=graph.n_edges / (graph.n_bp * graph.n_fa) if graph.n_bp and graph.n_fa else 0.0,
    )
