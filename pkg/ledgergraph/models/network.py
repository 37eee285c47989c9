"""Financial statements network model."""

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum


class Partition(Enum):
    """Node partition of the bipartite network."""

    BP = "bp"
    FA = "fa"

    @property
    def display_name(self) -> str:
        """Human-readable partition name."""
        return "business process" if self is Partition.BP else "financial account"

    @property
    def other(self) -> "Partition":
        """The opposite partition."""
        return Partition.FA if self is Partition.BP else Partition.BP


class PatternMode(Enum):
    """How journal entries are reduced to patterns."""

    DIRECTED = "directed"  # debit set and credit set kept apart
    UNDIRECTED = "undirected"  # single account set


@dataclass(frozen=True, order=True)
class Pattern:
    """Canonical combination of debited and credited accounts."""

    debit_accounts: tuple[str, ...]
    credit_accounts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.debit_accounts and not self.credit_accounts:
            raise ValueError("pattern must reference at least one account")
        object.__setattr__(self, "debit_accounts", tuple(sorted(set(self.debit_accounts))))
        object.__setattr__(self, "credit_accounts", tuple(sorted(set(self.credit_accounts))))

    @property
    def accounts(self) -> tuple[str, ...]:
        """Every account in the pattern, sorted."""
        return tuple(sorted(set(self.debit_accounts) | set(self.credit_accounts)))

    @property
    def description(self) -> str:
        """Compact text form, e.g. 'D:1300 | C:1500,8000'."""
        if not self.credit_accounts:
            return ",".join(self.debit_accounts)
        return f"D:{','.join(self.debit_accounts)} | C:{','.join(self.credit_accounts)}"


@dataclass(frozen=True)
class BusinessProcess:
    """A business process node: one distinct pattern and how often it occurred."""

    pattern: Pattern
    count: int


@dataclass(frozen=True)
class FinancialAccount:
    """A financial account node."""

    account_id: str
    name: str | None = None


@dataclass(frozen=True)
class FinancialStatementsNetwork:
    """Bipartite network G = (V, U, E) built from one company's journal entries.

    ``bp_nodes`` is partition U, ``fa_nodes`` partition V. Edges are (bp_index, fa_index) pairs.
    Node lists are kept in canonical order: FA by account id, BP by pattern.
    """

    company_id: str
    fa_nodes: tuple[FinancialAccount, ...]
    bp_nodes: tuple[BusinessProcess, ...]
    edges: tuple[tuple[int, int], ...]
    edge_amounts: tuple[Decimal, ...] = ()
    entry_count: int = 0
    unbalanced_count: int = 0
    pattern_mode: PatternMode = PatternMode.DIRECTED
    _fa_index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self._fa_index:
            self._fa_index.update({fa.account_id: i for i, fa in enumerate(self.fa_nodes)})

    @property
    def n_fa(self) -> int:
        """Number of financial account nodes, |V|."""
        return len(self.fa_nodes)

    @property
    def n_bp(self) -> int:
        """Number of business process nodes, |U|."""
        return len(self.bp_nodes)

    @property
    def n_nodes(self) -> int:
        """Total node count."""
        return self.n_fa + self.n_bp

    def fa_index(self, account_id: str) -> int:
        """Index of an account in ``fa_nodes``."""
        return self._fa_index[account_id]
