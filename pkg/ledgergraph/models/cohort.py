"""Per-company and cohort summary types."""

from dataclasses import dataclass, field
from enum import Enum

from ledgergraph.models.centrality import RankedNode
from ledgergraph.models.fit import TailFitResult


class CompanyStatus(Enum):
    """Outcome of the per-company pipeline."""

    OK = "ok"
    FAILED = "failed"


@dataclass
class CompanyStats:
    """Network statistics of one company."""

    company_id: str
    industry_code: str = ""
    status: CompanyStatus = CompanyStatus.OK
    error: str = ""
    n_fa: int = 0
    n_bp: int = 0
    n_edges: int = 0
    n_entries: int = 0
    n_unbalanced: int = 0
    n_components: int = 0
    diameter: int | None = None
    top_betweenness: RankedNode | None = None
    top_closeness: RankedNode | None = None
    top_degree: RankedNode | None = None
    fa_fit: TailFitResult | None = None
    bp_fit: TailFitResult | None = None

    @property
    def ok(self) -> bool:
        """The pipeline finished for this company."""
        return self.status is CompanyStatus.OK


@dataclass(frozen=True)
class RangeSummary:
    """Mean, minimum and maximum of a per-company quantity."""

    mean: float
    minimum: float
    maximum: float
    count: int


@dataclass(frozen=True)
class ShareSummary:
    """Share of reliable tests preferring the power law."""

    power_law: int
    reliable: int
    tested: int

    @property
    def fraction(self) -> float | None:
        """power_law / reliable, or None without reliable tests."""
        if self.reliable == 0:
            return None
        return self.power_law / self.reliable

    @property
    def percentage(self) -> float | None:
        """Fraction in percent."""
        fraction = self.fraction
        return None if fraction is None else 100.0 * fraction


@dataclass
class CohortSummary:
    """Aggregates over a cohort of companies."""

    companies_total: int
    companies_ok: int
    industry_counts: dict[str, int] = field(default_factory=dict)
    n_fa: RangeSummary | None = None
    n_bp: RangeSummary | None = None
    diameter: RangeSummary | None = None
    fa_share: ShareSummary = field(default_factory=lambda: ShareSummary(0, 0, 0))
    bp_share: ShareSummary = field(default_factory=lambda: ShareSummary(0, 0, 0))
    fa_share_by_industry: dict[str, ShareSummary] = field(default_factory=dict)
    bp_share_by_industry: dict[str, ShareSummary] = field(default_factory=dict)
    significance: float = 0.1

    @property
    def companies_failed(self) -> int:
        """Companies excluded from the means."""
        return self.companies_total - self.companies_ok
