"""Services for ledgergraph."""

from ledgergraph.services.builder import NetworkError, NodeCapExceeded, build_network, entry_pattern
from ledgergraph.services.centrality import (
    CentralityError,
    betweenness_centrality,
    betweenness_constant,
    closeness_centrality,
    compute_centrality,
    degree_centrality,
    top_nodes,
)
from ledgergraph.services.cohort import (
    CohortError,
    analyze_company,
    list_datasets,
    read_industry_map,
    run_cohort,
    summarize_cohort,
    write_cohort_report,
)
from ledgergraph.services.graph import (
    BipartiteAdjacency,
    GraphError,
    bfs_distances,
    connected_components,
    diameter,
    summarize_network,
)
from ledgergraph.services.ingest import (
    IngestError,
    parse_journal_csv,
    read_journal_file,
    write_journal_csv,
)
from ledgergraph.services.serialization import (
    NetworkFormatError,
    load_network,
    network_from_json,
    network_to_json,
    save_network,
)
from ledgergraph.services.synth import SynthError, generate_cohort, generate_company
from ledgergraph.services.tail_fit import (
    DegenerateTail,
    InsufficientTailData,
    TailFitError,
    assess_tail,
    distribution_curves,
    fit_exponential,
    fit_power_law,
    likelihood_ratio_test,
)

__all__ = [
    "BipartiteAdjacency",
    "CentralityError",
    "CohortError",
    "DegenerateTail",
    "GraphError",
    "IngestError",
    "InsufficientTailData",
    "NetworkError",
    "NetworkFormatError",
    "NodeCapExceeded",
    "SynthError",
    "TailFitError",
    "analyze_company",
    "assess_tail",
    "betweenness_centrality",
    "betweenness_constant",
    "bfs_distances",
    "build_network",
    "closeness_centrality",
    "compute_centrality",
    "connected_components",
    "degree_centrality",
    "diameter",
    "distribution_curves",
    "entry_pattern",
    "fit_exponential",
    "fit_power_law",
    "generate_cohort",
    "generate_company",
    "likelihood_ratio_test",
    "list_datasets",
    "load_network",
    "network_from_json",
    "network_to_json",
    "parse_journal_csv",
    "read_industry_map",
    "read_journal_file",
    "run_cohort",
    "save_network",
    "summarize_cohort",
    "summarize_network",
    "top_nodes",
    "write_cohort_report",
    "write_journal_csv",
]
