"""Seeded synthetic journal-entry generator."""

import csv
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from datetime import timedelta
from decimal import Decimal
from pathlib import Path

import numpy as np

from ledgergraph.config import INDUSTRY_LABELS
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import JournalEntry, JournalEntryLine, Side, SynthConfig
from ledgergraph.services.ingest import write_journal_csv

logger = logging.getLogger(__name__)

CENTS = Decimal("0.01")


class SynthError(LedgerGraphError):
    """Invalid generator configuration."""

    pass


@dataclass(frozen=True)
class SynthPattern:
    """Debited and credited account indices of a generated pattern."""

    debit: tuple[int, ...]
    credit: tuple[int, ...]

    @property
    def accounts(self) -> tuple[int, ...]:
        return self.debit + self.credit


@dataclass
class CohortManifest:
    """Files written by ``generate_cohort``."""

    directory: Path
    datasets: list[Path]
    industry_map: Path
    industries: dict[str, str]


def validate_config(config: SynthConfig) -> None:
    """Check counts and rates; raises SynthError."""
    low, high = config.accounts_per_entry
    if config.n_accounts < 1 or config.n_entries < 1:
        raise SynthError("n_accounts and n_entries must be >= 1")
    if low < 1 or high < low:
        raise SynthError(f"invalid accounts_per_entry range {low}..{high}")
    if high > config.n_accounts:
        raise SynthError(
            f"accounts_per_entry upper bound {high} exceeds n_accounts {config.n_accounts}"
        )
    if config.attachment_bias < 0:
        raise SynthError("attachment_bias must be >= 0")
    for name in ("pattern_mutation_rate", "novel_pattern_rate", "account_open_rate"):
        rate = getattr(config, name)
        if not 0.0 <= rate <= 1.0:
            raise SynthError(f"{name} must lie in [0, 1], got {rate}")
    if config.amount_sigma < 0:
        raise SynthError("amount_sigma must be >= 0")


def generate_company(config: SynthConfig) -> Iterator[JournalEntry]:
    """Stream balanced journal entries for one company.

    Every draw comes from one generator seeded by ``config.seed`` in a fixed order, so a
    longer run repeats the patterns and amounts of a shorter one before continuing.
    """
    validate_config(config)
    return _PatternGenerator(config).entries()


def generate_cohort(
    base: SynthConfig,
    n_companies: int,
    out_dir: Path,
    labels: Sequence[str] = INDUSTRY_LABELS,
    entries_range: tuple[int, int] | None = None,
) -> CohortManifest:
    """Write one journal CSV per company plus an industry map.

    Entry counts spread log-uniformly over ``entries_range`` (default: the base entry count),
    industry labels are assigned round-robin, per-company seeds come from the base seed.
    """
    if n_companies < 1:
        raise SynthError("cohort needs at least one company")
    if not labels:
        raise SynthError("at least one industry label is required")
    low, high = entries_range or (base.n_entries, base.n_entries)
    if low < 1 or high < low:
        raise SynthError(f"invalid entries range {low}..{high}")
    validate_config(base)

    root = np.random.SeedSequence(base.seed)
    size_rng = np.random.default_rng(root)
    sizes = np.exp(size_rng.uniform(math.log(low), math.log(high), n_companies))
    children = root.spawn(n_companies)

    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(n_companies)))
    datasets: list[Path] = []
    industries: dict[str, str] = {}

    for i in range(n_companies):
        company_id = f"C{i + 1:0{width}d}"
        seed = int(children[i].generate_state(1, dtype=np.uint64)[0])
        n_entries = max(1, min(high, int(round(float(sizes[i])))))
        config = base.with_seed(seed, company_id=company_id, n_entries=n_entries)

        path = out_dir / f"{company_id}.csv"
        with path.open("w", encoding="utf-8", newline="") as f:
            write_journal_csv(generate_company(config), f)
        datasets.append(path)
        industries[company_id] = labels[i % len(labels)]
        logger.debug("wrote %s (%d entries)", path.name, n_entries)

    map_path = out_dir / "industry_map.csv"
    with map_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["company_id", "industry_code"])
        writer.writerows(industries.items())

    logger.info("generated %d synthetic companies in %s", n_companies, out_dir)
    return CohortManifest(
        directory=out_dir, datasets=datasets, industry_map=map_path, industries=industries
    )


class _PatternGenerator:
    """Account growth with degree-biased selection and pattern reuse or mutation."""

    def __init__(self, config: SynthConfig) -> None:
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        self.degrees = np.zeros(config.n_accounts, dtype=np.float64)
        self.n_active = min(config.accounts_per_entry[1], config.n_accounts)
        self.patterns: list[SynthPattern] = []
        self.occurrences: list[int] = []
        self.known: dict[SynthPattern, int] = {}
        self.width = max(6, len(str(config.n_entries)))

    def entries(self) -> Iterator[JournalEntry]:
        for i in range(self.config.n_entries):
            pattern = self._next_pattern()
            yield self._entry(i, pattern)

    def _next_pattern(self) -> SynthPattern:
        rng = self.rng
        if not self.patterns:
            return self._register(self._fresh_pattern())
        if rng.random() >= self.config.pattern_mutation_rate:
            weights = np.asarray(self.occurrences, dtype=np.float64)
            pick = int(rng.choice(len(self.patterns), p=weights / weights.sum()))
            self.occurrences[pick] += 1
            return self.patterns[pick]
        if rng.random() < self.config.novel_pattern_rate:
            return self._register(self._fresh_pattern())
        base = self.patterns[int(rng.integers(len(self.patterns)))]
        return self._register(self._perturb(base))

    def _register(self, pattern: SynthPattern) -> SynthPattern:
        index = self.known.get(pattern)
        if index is not None:
            self.occurrences[index] += 1
            return pattern
        self.known[pattern] = len(self.patterns)
        self.patterns.append(pattern)
        self.occurrences.append(1)
        self.degrees[list(set(pattern.accounts))] += 1
        return pattern

    def _fresh_pattern(self) -> SynthPattern:
        low, high = self.config.accounts_per_entry
        k = int(self.rng.integers(low, high + 1))
        chosen = self._draw_accounts(k, exclude=set())
        if k == 1:
            return SynthPattern(debit=(chosen[0],), credit=(chosen[0],))
        n_debit = int(self.rng.integers(1, k))
        return SynthPattern(
            debit=tuple(sorted(chosen[:n_debit])), credit=tuple(sorted(chosen[n_debit:]))
        )

    def _perturb(self, base: SynthPattern) -> SynthPattern:
        """Swap one account of a pattern for another account."""
        accounts = list(base.accounts)
        slot = int(self.rng.integers(len(accounts)))
        replacement = self._draw_accounts(1, exclude=set(accounts))
        if not replacement:
            return base
        accounts[slot] = replacement[0]
        n_debit = len(base.debit)
        debit, credit = accounts[:n_debit], accounts[n_debit:]
        return SynthPattern(debit=tuple(sorted(set(debit))), credit=tuple(sorted(set(credit))))

    def _draw_accounts(self, k: int, exclude: set[int]) -> list[int]:
        """k distinct accounts: open a new one with the open rate, else degree-biased."""
        chosen: list[int] = []
        taken = set(exclude)
        while len(chosen) < k:
            if self.n_active < self.config.n_accounts and (
                self.rng.random() < self.config.account_open_rate
            ):
                account = self.n_active
                self.n_active += 1
            else:
                candidates = np.array(
                    [a for a in range(self.n_active) if a not in taken], dtype=np.int64
                )
                if candidates.size == 0:
                    if self.n_active >= self.config.n_accounts:
                        break
                    account = self.n_active
                    self.n_active += 1
                else:
                    weights = (self.degrees[candidates] + 1.0) ** self.config.attachment_bias
                    account = int(self.rng.choice(candidates, p=weights / weights.sum()))
            taken.add(account)
            chosen.append(account)
        return chosen

    def _entry(self, index: int, pattern: SynthPattern) -> JournalEntry:
        config = self.config
        entry_id = f"JE{index + 1:0{self.width}d}"
        when = config.start_date + timedelta(days=index * 365 // config.n_entries)
        total = Decimal(str(self.rng.lognormal(config.amount_mu, config.amount_sigma)))
        total = max(total.quantize(CENTS), Decimal(len(pattern.accounts)) * CENTS)

        lines: list[JournalEntryLine] = []
        for side, accounts in ((Side.DEBIT, pattern.debit), (Side.CREDIT, pattern.credit)):
            for account, amount in zip(accounts, self._split(total, len(accounts))):
                lines.append(
                    JournalEntryLine(
                        company_id=config.company_id,
                        entry_id=entry_id,
                        date=when,
                        account_id=_account_id(account),
                        amount=amount,
                        side=side,
                    )
                )
        return JournalEntry(entry_id=entry_id, lines=tuple(lines))

    def _split(self, total: Decimal, parts: int) -> list[Decimal]:
        """Split an amount into positive cent amounts that sum exactly to it."""
        if parts == 1:
            return [total]
        cents = int(total / CENTS)
        cuts = np.sort(self.rng.choice(cents - 1, size=parts - 1, replace=False) + 1)
        bounds = [0, *(int(c) for c in cuts), cents]
        return [Decimal(bounds[i + 1] - bounds[i]) * CENTS for i in range(parts)]


def _account_id(index: int) -> str:
    """Ledger-style account number."""
    return f"{1000 + index * 10}"
