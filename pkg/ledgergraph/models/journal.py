"""Journal entry model and related types."""

from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal
from enum import Enum

from ledgergraph.config import CREDIT_TOKENS, DEBIT_TOKENS, DEFAULT_COLUMNS


class Side(Enum):
    """Side of a ledger line."""

    DEBIT = "D"
    CREDIT = "C"

    @property
    def display_name(self) -> str:
        """Human-readable side name."""
        return "debit" if self is Side.DEBIT else "credit"


@dataclass(frozen=True)
class JournalEntryLine:
    """One ledger line of a journal entry."""

    company_id: str
    entry_id: str
    date: date
    account_id: str
    amount: Decimal
    side: Side
    account_name: str | None = None


@dataclass(frozen=True)
class JournalEntry:
    """A bookkeeping transaction: every line sharing one entry id."""

    entry_id: str
    lines: tuple[JournalEntryLine, ...]

    @property
    def company_id(self) -> str:
        """Company the entry belongs to."""
        return self.lines[0].company_id

    @property
    def debit_total(self) -> Decimal:
        """Sum of debit amounts."""
        return sum((ln.amount for ln in self.lines if ln.side is Side.DEBIT), Decimal(0))

    @property
    def credit_total(self) -> Decimal:
        """Sum of credit amounts."""
        return sum((ln.amount for ln in self.lines if ln.side is Side.CREDIT), Decimal(0))

    @property
    def balanced(self) -> bool:
        """Debit and credit totals are exactly equal."""
        return self.debit_total == self.credit_total

    @property
    def account_ids(self) -> set[str]:
        """Accounts touched by this entry."""
        return {ln.account_id for ln in self.lines}


@dataclass
class IngestStats:
    """Counters collected while parsing a journal file."""

    lines: int = 0
    entries: int = 0
    accounts: int = 0
    unbalanced_entries: int = 0


@dataclass
class IngestConfig:
    """Options for reading journal CSV files."""

    # logical field -> header name in the file
    column_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_COLUMNS))
    # extra side tokens, matched case-insensitively
    side_aliases: dict[str, Side] = field(default_factory=dict)
    # used when the file has no company_id column
    default_company_id: str | None = None
    delimiter: str = ","

    def with_columns(self, overrides: dict[str, str]) -> "IngestConfig":
        """Return a copy with some header names replaced."""
        columns = dict(self.column_map)
        columns.update(overrides)
        return IngestConfig(
            column_map=columns,
            side_aliases=dict(self.side_aliases),
            default_company_id=self.default_company_id,
            delimiter=self.delimiter,
        )

    def side_tokens(self) -> dict[str, Side]:
        """All accepted side tokens, lower-cased."""
        tokens: dict[str, Side] = {t: Side.DEBIT for t in DEBIT_TOKENS}
        tokens.update({t: Side.CREDIT for t in CREDIT_TOKENS})
        tokens.update({k.strip().lower(): v for k, v in self.side_aliases.items()})
        return tokens
