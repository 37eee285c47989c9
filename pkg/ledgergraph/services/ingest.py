"""Journal CSV ingestion service."""

import csv
import io
import logging
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from pathlib import Path
from typing import BinaryIO, TextIO

from ledgergraph.config import DEFAULT_COLUMNS, REQUIRED_COLUMNS
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import IngestConfig, IngestStats, JournalEntry, JournalEntryLine, Side

logger = logging.getLogger(__name__)

# digits with an optional fraction; exponents and underscores are rejected
AMOUNT_PATTERN = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)")


class IngestError(LedgerGraphError):
    """Malformed or empty journal data."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


@dataclass
class IngestResult:
    """Parsed journal entries in order of first appearance, plus counters."""

    entries: list[JournalEntry]
    stats: IngestStats


def iter_journal_lines(
    source: BinaryIO, config: IngestConfig | None = None
) -> Iterator[JournalEntryLine]:
    """Stream validated ledger lines from a UTF-8 CSV byte stream."""
    config = config or IngestConfig()
    text = io.TextIOWrapper(source, encoding="utf-8-sig", newline="")
    try:
        yield from _iter_lines(text, config)
    except UnicodeDecodeError as e:
        raise IngestError(f"input is not valid UTF-8: {e}") from e
    finally:
        text.detach()


def parse_journal_csv(source: BinaryIO, config: IngestConfig | None = None) -> IngestResult:
    """Parse a journal CSV and group its lines by entry id.

    Lines of one entry keep their file order; entries are ordered by first appearance.
    Unbalanced entries are kept and counted.
    """
    groups: dict[str, list[JournalEntryLine]] = {}
    accounts: set[str] = set()
    line_count = 0

    for line in iter_journal_lines(source, config):
        group = groups.setdefault(line.entry_id, [])
        if group and group[0].company_id != line.company_id:
            raise IngestError(
                f"entry {line.entry_id!r} mixes companies "
                f"{group[0].company_id!r} and {line.company_id!r}"
            )
        group.append(line)
        accounts.add(line.account_id)
        line_count += 1

    if line_count == 0:
        raise IngestError("no records")

    entries = [JournalEntry(entry_id=eid, lines=tuple(lines)) for eid, lines in groups.items()]
    stats = IngestStats(
        lines=line_count,
        entries=len(entries),
        accounts=len(accounts),
        unbalanced_entries=sum(1 for e in entries if not e.balanced),
    )
    if stats.unbalanced_entries:
        logger.warning(
            "%d of %d journal entries are unbalanced (kept and flagged)",
            stats.unbalanced_entries,
            stats.entries,
        )
    logger.debug(
        "parsed %d lines into %d entries over %d accounts",
        stats.lines, stats.entries, stats.accounts,
    )
    return IngestResult(entries=entries, stats=stats)


def read_journal_file(path: Path, config: IngestConfig | None = None) -> IngestResult:
    """Parse a journal CSV file from disk."""
    with path.open("rb") as f:
        return parse_journal_csv(f, config)


def write_journal_csv(entries: Iterable[JournalEntry], target: TextIO) -> int:
    """Write entries in the default column layout. Returns the number of lines written."""
    writer = csv.writer(target, lineterminator="\n")
    columns = list(DEFAULT_COLUMNS)
    writer.writerow(columns)
    written = 0
    for entry in entries:
        for ln in entry.lines:
            writer.writerow([
                ln.company_id,
                ln.entry_id,
                ln.date.isoformat(),
                ln.account_id,
                ln.account_name or "",
                format(ln.amount, "f"),
                ln.side.value,
            ])
            written += 1
    return written


def _iter_lines(text: TextIO, config: IngestConfig) -> Iterator[JournalEntryLine]:
    """Parse rows of an opened text stream."""
    reader = csv.reader(text, delimiter=config.delimiter)
    header = next(reader, None)
    if header is None:
        raise IngestError("no records")

    header = [h.strip() for h in header]
    positions = _resolve_columns(header, config)
    side_tokens = config.side_tokens()

    for row in reader:
        line_no = reader.line_num
        # blank trailing lines
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise IngestError(
                f"expected {len(header)} columns, found {len(row)}", line_no
            )
        yield _parse_row(row, positions, side_tokens, config, line_no)


def _resolve_columns(header: list[str], config: IngestConfig) -> dict[str, int]:
    """Map logical fields to column positions."""
    positions: dict[str, int] = {}
    for logical, name in config.column_map.items():
        if name in header:
            positions[logical] = header.index(name)

    missing = [config.column_map.get(c, c) for c in REQUIRED_COLUMNS if c not in positions]
    if missing:
        raise IngestError(f"missing required columns {missing}; found {header}", 1)
    if "company_id" not in positions and not config.default_company_id:
        name = config.column_map.get("company_id", "company_id")
        raise IngestError(f"missing column {name!r} and no default company id", 1)
    return positions


def _parse_row(
    row: list[str],
    positions: dict[str, int],
    side_tokens: dict[str, Side],
    config: IngestConfig,
    line_no: int,
) -> JournalEntryLine:
    """Validate one CSV row."""

    def cell(field: str) -> str:
        pos = positions.get(field)
        return row[pos].strip() if pos is not None else ""

    company_id = cell("company_id") or (config.default_company_id or "")
    entry_id = cell("entry_id")
    account_id = cell("account_id")
    if not company_id:
        raise IngestError("company_id is empty", line_no)
    if not entry_id:
        raise IngestError("entry_id is empty", line_no)
    if not account_id:
        raise IngestError("account_id is empty", line_no)

    raw_date = cell("date")
    try:
        entry_date = date.fromisoformat(raw_date)
    except ValueError as e:
        raise IngestError(f"unparsable date {raw_date!r}", line_no) from e

    raw_amount = cell("amount")
    if not AMOUNT_PATTERN.fullmatch(raw_amount):
        raise IngestError(f"unparsable amount {raw_amount!r}", line_no)
    amount = Decimal(raw_amount)
    if amount < 0:
        raise IngestError(f"negative amount {raw_amount!r}", line_no)

    raw_side = cell("side")
    side = side_tokens.get(raw_side.lower())
    if side is None:
        raise IngestError(f"unknown side token {raw_side!r}", line_no)

    return JournalEntryLine(
        company_id=company_id,
        entry_id=entry_id,
        date=entry_date,
        account_id=account_id,
        amount=amount,
        side=side,
        account_name=cell("account_name") or None,
    )
