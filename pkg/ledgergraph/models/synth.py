"""Synthetic generator configuration."""

from dataclasses import dataclass, replace
from datetime import date


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the synthetic journal-entry generator."""

    seed: int = 0
    n_accounts: int = 100
    n_entries: int = 1_000
    attachment_bias: float = 1.0
    pattern_mutation_rate: float = 0.3
    accounts_per_entry: tuple[int, int] = (2, 4)
    # share of mutations that draw a completely new pattern instead of a small variation
    novel_pattern_rate: float = 0.1
    # chance that an account draw opens a not-yet-used account
    account_open_rate: float = 0.05
    company_id: str = "C0001"
    start_date: date = date(2023, 1, 1)
    amount_mu: float = 6.0
    amount_sigma: float = 1.5

    def with_seed(self, seed: int, **changes: object) -> "SynthConfig":
        """Copy with another seed and optional field changes."""
        return replace(self, seed=seed, **changes)  # type: ignore[arg-type]
