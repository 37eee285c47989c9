"""Data models for ledgergraph."""

from ledgergraph.models.centrality import CentralityReport, Measure, RankedNode
from ledgergraph.models.cohort import (
    CohortSummary,
    CompanyStats,
    CompanyStatus,
    RangeSummary,
    ShareSummary,
)
from ledgergraph.models.fit import (
    CurveRow,
    DegreeSequence,
    ExponentialFit,
    PowerLawFit,
    TailFitResult,
    Verdict,
)
from ledgergraph.models.journal import (
    IngestConfig,
    IngestStats,
    JournalEntry,
    JournalEntryLine,
    Side,
)
from ledgergraph.models.network import (
    BusinessProcess,
    FinancialAccount,
    FinancialStatementsNetwork,
    Partition,
    Pattern,
    PatternMode,
)
from ledgergraph.models.options import (
    BetweennessMode,
    GlobalConfig,
    NormalizationMode,
    OutputFormat,
)
from ledgergraph.models.synth import SynthConfig

__all__ = [
    "BetweennessMode",
    "BusinessProcess",
    "CentralityReport",
    "CohortSummary",
    "CompanyStats",
    "CompanyStatus",
    "CurveRow",
    "DegreeSequence",
    "ExponentialFit",
    "FinancialAccount",
    "FinancialStatementsNetwork",
    "GlobalConfig",
    "IngestConfig",
    "IngestStats",
    "JournalEntry",
    "JournalEntryLine",
    "Measure",
    "NormalizationMode",
    "OutputFormat",
    "Partition",
    "Pattern",
    "PatternMode",
    "PowerLawFit",
    "RangeSummary",
    "RankedNode",
    "ShareSummary",
    "Side",
    "SynthConfig",
    "TailFitResult",
    "Verdict",
]
