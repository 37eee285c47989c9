"""Bipartite-normalised degree, closeness and betweenness centrality."""

import logging

import numpy as np

from ledgergraph.config import LENGTH_WEIGHTED_MAX_NODES
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import (
    BetweennessMode,
    CentralityReport,
    Measure,
    NormalizationMode,
    Partition,
    RankedNode,
)
from ledgergraph.services.graph import (
    BipartiteAdjacency,
    FloatArray,
    IntArray,
    connected_components,
    distance_rows,
    sweep,
)

logger = logging.getLogger(__name__)

ZERO_TOLERANCE: float = 1e-9


class CentralityError(LedgerGraphError):
    """Centrality cannot be computed for this graph."""

    pass


def betweenness_constant(n: int, m: int) -> float:
    """Maximum betweenness of a node in a partition of size n facing a partition of size m.

    s and t are the quotient and remainder of (n - 1) / m.
    """
    if n < 1 or m < 1:
        raise CentralityError(f"partition sizes must be positive, got n={n}, m={m}")
    s, t = divmod(n - 1, m)
    value = m * m * (s + 1) ** 2 + m * (s + 1) * (2 * t - s - 1) - t * (2 * s - t + 3)
    return value / 2


def degree_centrality(graph: BipartiteAdjacency) -> CentralityReport:
    """Degree divided by the size of the opposite partition."""
    _require_partitions(graph)
    raw = graph.degrees.astype(np.float64)
    normalized = raw.copy()
    normalized[:graph.n_bp] /= graph.n_fa
    normalized[graph.n_bp:] /= graph.n_bp
    return _report(
        graph,
        Measure.DEGREE,
        raw,
        normalized,
        constants={"n_bp": float(graph.n_bp), "n_fa": float(graph.n_fa)},
        policy="whole-graph",
    )


def closeness_centrality(graph: BipartiteAdjacency, workers: int = 1) -> CentralityReport:
    """Closeness normalised by the bipartite theoretical minimum farness.

    Farness sums run over the node's component; the numerator uses the component's
    partition sizes. Nodes without reachable peers score 0.
    """
    n = graph.n_nodes
    raw = np.zeros(n, dtype=np.float64)
    normalized = np.zeros(n, dtype=np.float64)
    if n == 1:
        logger.warning("closeness: graph has a single node, its score is 0")
        return _report(graph, Measure.CLOSENESS, raw, normalized, policy="per-component")
    _require_partitions(graph)

    if graph.n_edges == 0:
        logger.warning("closeness: graph has no edges, every score is 0")
        return _report(graph, Measure.CLOSENESS, raw, normalized, policy="per-component")

    sources = np.arange(n, dtype=np.int64)
    farness = np.concatenate(sweep(graph, sources, _farness_kernel, workers))

    comp_bp, comp_fa = connected_components(graph).partition_sizes()
    is_bp = sources < graph.n_bp
    numerator = np.where(is_bp, comp_fa + 2 * (comp_bp - 1), comp_bp + 2 * (comp_fa - 1))

    reachable = farness > 0
    raw[reachable] = 1.0 / farness[reachable]
    normalized[reachable] = numerator[reachable] / farness[reachable]
    return _report(graph, Measure.CLOSENESS, raw, normalized, policy="per-component")


def betweenness_centrality(
    graph: BipartiteAdjacency,
    normalization: NormalizationMode = NormalizationMode.OWN_PARTITION,
    mode: BetweennessMode = BetweennessMode.GEODESIC_FRACTION,
    workers: int = 1,
) -> CentralityReport:
    """Betweenness normalised by the bipartite theoretical maximum.

    The raw score sums, over unordered pairs in the node's component, the fraction of
    shortest paths passing through the node. Normalising constants use whole-graph
    partition sizes; a zero constant gives a normalised score of 0.
    """
    _require_partitions(graph)
    n = graph.n_nodes
    sources = np.arange(n, dtype=np.int64)

    if mode is BetweennessMode.LENGTH_WEIGHTED:
        raw = _length_weighted_betweenness(graph)
    else:
        partials = sweep(graph, sources, _brandes_kernel, workers)
        raw = np.zeros(n, dtype=np.float64)
        for partial in partials:
            raw += partial
        raw /= 2.0

    b_bp = betweenness_constant(graph.n_bp, graph.n_fa)
    b_fa = betweenness_constant(graph.n_fa, graph.n_bp)
    if normalization is NormalizationMode.OWN_PARTITION:
        bp_divisor, fa_divisor = b_bp, b_fa
    else:
        # crosswise: U nodes by b_V, V nodes by b_U
        bp_divisor, fa_divisor = b_fa, b_bp

    normalized = np.zeros(n, dtype=np.float64)
    for lo, hi, divisor, partition in (
        (0, graph.n_bp, bp_divisor, Partition.BP),
        (graph.n_bp, n, fa_divisor, Partition.FA),
    ):
        if divisor > 0:
            normalized[lo:hi] = raw[lo:hi] / divisor
            continue
        worst = float(raw[lo:hi].max(initial=0.0))
        if worst > ZERO_TOLERANCE:
            if normalization is NormalizationMode.OWN_PARTITION:
                raise CentralityError(
                    f"{partition.display_name} constant is 0 but a raw score is {worst}"
                )
            logger.warning(
                "%s divisor is 0 under %s normalisation; scores set to 0",
                partition.display_name, normalization.value,
            )

    constants = {
        "b_bp": b_bp,
        "b_fa": b_fa,
        "bp_divisor": bp_divisor,
        "fa_divisor": fa_divisor,
        "n_bp": float(graph.n_bp),
        "n_fa": float(graph.n_fa),
    }
    policy = f"per-component;{normalization.value};{mode.value}"
    return _report(graph, Measure.BETWEENNESS, raw, normalized, constants, policy)


def compute_centrality(
    graph: BipartiteAdjacency,
    measure: Measure,
    normalization: NormalizationMode = NormalizationMode.OWN_PARTITION,
    mode: BetweennessMode = BetweennessMode.GEODESIC_FRACTION,
    workers: int = 1,
) -> CentralityReport:
    """Dispatch on measure."""
    if measure is Measure.DEGREE:
        return degree_centrality(graph)
    if measure is Measure.CLOSENESS:
        return closeness_centrality(graph, workers)
    return betweenness_centrality(graph, normalization, mode, workers)


def top_nodes(report: CentralityReport, k: int) -> list[RankedNode]:
    """The k highest normalised scores, ties by ascending node id."""
    if k < 0:
        raise CentralityError(f"k must be >= 0, got {k}")
    order = np.lexsort((np.arange(report.n_nodes), -report.normalized))
    return [
        RankedNode(
            node=int(node),
            partition=report.partition_of(int(node)),
            label=report.labels[node],
            score=float(report.normalized[node]),
            raw=float(report.raw[node]),
            name=report.names[node],
        )
        for node in order[:k]
    ]


def _require_partitions(graph: BipartiteAdjacency) -> None:
    """Both partitions must hold at least one node."""
    if graph.n_bp == 0 or graph.n_fa == 0:
        raise CentralityError(
            f"empty partition: {graph.n_bp} business process and {graph.n_fa} account nodes"
        )


def _report(
    graph: BipartiteAdjacency,
    measure: Measure,
    raw: FloatArray,
    normalized: FloatArray,
    constants: dict[str, float] | None = None,
    policy: str = "per-component",
) -> CentralityReport:
    return CentralityReport(
        measure=measure,
        raw=raw,
        normalized=normalized,
        n_bp=graph.n_bp,
        labels=graph.labels,
        names=graph.names,
        constants=constants or {},
        policy=policy,
    )


def _farness_kernel(graph: BipartiteAdjacency, chunk: IntArray) -> FloatArray:
    """Sum of finite distances from each source."""
    rows = distance_rows(graph, chunk)
    rows[~np.isfinite(rows)] = 0.0
    return rows.sum(axis=1)


def _brandes_kernel(graph: BipartiteAdjacency, chunk: IntArray) -> FloatArray:
    """Dependency sums of the given sources (ordered pairs, so every pair counts twice)."""
    n = graph.n_nodes
    total = np.zeros(n, dtype=np.float64)
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    slot_of = np.zeros(n, dtype=np.int64)

    for source in chunk:
        visited = _accumulate_source(graph, int(source), dist, sigma, delta, slot_of)
        total[visited] += delta[visited]
        dist[visited] = -1
        sigma[visited] = 0.0
        delta[visited] = 0.0
    return total


def _accumulate_source(
    graph: BipartiteAdjacency,
    source: int,
    dist: IntArray,
    sigma: FloatArray,
    delta: FloatArray,
    slot_of: IntArray,
) -> IntArray:
    """Level-synchronous shortest-path counting from one source, then dependency accumulation.

    Leaves the source's dependencies in ``delta`` (delta[source] = 0) and returns the visited
    nodes so the caller can reset the scratch arrays. ``slot_of`` is scratch space holding each
    newly reached node's position in the next frontier.
    """
    dist[source] = 0
    sigma[source] = 1.0
    frontier = np.array([source], dtype=np.int64)
    visited = [frontier]
    # (frontier, parent slot, child node) for each shortest-path edge of a level
    levels: list[tuple[IntArray, IntArray, IntArray]] = []
    depth = 0

    while frontier.size:
        slots = np.repeat(np.arange(frontier.size), graph.degrees[frontier])
        _, nbr = graph.gather_neighbors(frontier)
        fresh = nbr[dist[nbr] < 0]
        if fresh.size == 0:
            break
        dist[fresh] = depth + 1
        # one survivor per node among repeated hits
        slot_of[fresh] = np.arange(fresh.size)
        nxt = fresh[slot_of[fresh] == np.arange(fresh.size)]
        slot_of[nxt] = np.arange(nxt.size)

        on_dag = dist[nbr] == depth + 1
        parent, child = slots[on_dag], nbr[on_dag]
        sigma[nxt] = np.bincount(
            slot_of[child], weights=sigma[frontier][parent], minlength=nxt.size
        )
        levels.append((frontier, parent, child))
        frontier = nxt
        visited.append(frontier)
        depth += 1

    for frontier, parent, child in reversed(levels):
        share = sigma[frontier][parent] / sigma[child] * (1.0 + delta[child])
        delta[frontier] += np.bincount(parent, weights=share, minlength=frontier.size)
    delta[source] = 0.0
    return np.concatenate(visited)


def _length_weighted_betweenness(graph: BipartiteAdjacency) -> FloatArray:
    """Literal reading: half the sum over pairs (k, j) of 1/d(k, j) for every node i on some
    shortest k-j path, i distinct from k and j."""
    n = graph.n_nodes
    if n > LENGTH_WEIGHTED_MAX_NODES:
        raise CentralityError(
            f"length-weighted betweenness needs all-pairs distances; "
            f"{n} nodes exceeds the limit of {LENGTH_WEIGHTED_MAX_NODES}"
        )
    dist = distance_rows(graph, np.arange(n, dtype=np.int64))
    finite = np.isfinite(dist)
    inverse = np.zeros_like(dist)
    positive = finite & (dist > 0)
    inverse[positive] = 1.0 / dist[positive]

    raw = np.zeros(n, dtype=np.float64)
    for i in range(n):
        through = dist[:, i][:, None] + dist[i, :][None, :] == dist
        through &= finite
        through[i, :] = False
        through[:, i] = False
        raw[i] = 0.5 * float(inverse[through].sum())
    return raw
