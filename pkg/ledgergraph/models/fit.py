"""Degree-distribution fit types."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from ledgergraph.models.network import Partition


class Verdict(Enum):
    """Outcome of the power-law vs exponential comparison."""

    POWER_LAW_PREFERRED = "power_law_preferred"
    EXPONENTIAL_PREFERRED = "exponential_preferred"
    INCONCLUSIVE = "inconclusive"
    INSUFFICIENT_DATA = "insufficient_data"

    @property
    def display_name(self) -> str:
        """Human-readable verdict."""
        names: dict[Verdict, str] = {
            Verdict.POWER_LAW_PREFERRED: "power law preferred",
            Verdict.EXPONENTIAL_PREFERRED: "exponential preferred",
            Verdict.INCONCLUSIVE: "inconclusive",
            Verdict.INSUFFICIENT_DATA: "insufficient tail data",
        }
        return names[self]

    @property
    def is_reliable(self) -> bool:
        """The test separated the two models at the chosen significance."""
        return self in (Verdict.POWER_LAW_PREFERRED, Verdict.EXPONENTIAL_PREFERRED)


@dataclass(frozen=True)
class DegreeSequence:
    """Degrees of one partition, isolated nodes excluded."""

    values: npt.NDArray[np.int64]
    partition: Partition
    isolated: int = 0

    @classmethod
    def from_degrees(cls, degrees: npt.ArrayLike, partition: Partition) -> "DegreeSequence":
        """Build from raw degrees, dropping zeros."""
        arr = np.asarray(degrees, dtype=np.int64)
        positive = arr[arr >= 1]
        return cls(values=positive, partition=partition, isolated=int(arr.size - positive.size))

    @property
    def size(self) -> int:
        """Number of fitted values."""
        return int(self.values.size)


@dataclass(frozen=True)
class PowerLawFit:
    """Discrete power-law fit on the tail x >= x_min."""

    x_min: int
    alpha: float
    log_likelihood: float
    ks_distance: float
    n_tail: int


@dataclass(frozen=True)
class ExponentialFit:
    """Discrete exponential fit on the tail x >= x_min."""

    x_min: int
    lam: float
    log_likelihood: float
    n_tail: int


@dataclass(frozen=True)
class TailFitResult:
    """Likelihood-ratio comparison of power law against exponential on a common tail."""

    partition: Partition | None
    x_min: int
    alpha: float
    lam: float
    n_tail: int
    n_values: int
    log_likelihood_ratio: float
    p_value: float
    significance: float
    verdict: Verdict
    ks_distance: float = math.nan
    isolated: int = 0
    note: str = ""

    @classmethod
    def insufficient(
        cls,
        partition: Partition | None,
        n_values: int,
        significance: float,
        note: str,
        isolated: int = 0,
    ) -> "TailFitResult":
        """Record for a sequence that could not be fitted."""
        return cls(
            partition=partition,
            x_min=0,
            alpha=math.nan,
            lam=math.nan,
            n_tail=0,
            n_values=n_values,
            log_likelihood_ratio=math.nan,
            p_value=math.nan,
            significance=significance,
            verdict=Verdict.INSUFFICIENT_DATA,
            isolated=isolated,
            note=note,
        )

    def to_dict(self) -> dict[str, object]:
        """JSON-ready mapping; NaN becomes None."""

        def clean(value: float) -> float | None:
            return None if math.isnan(value) else value

        return {
            "partition": self.partition.value if self.partition else None,
            "x_min": self.x_min,
            "alpha": clean(self.alpha),
            "lambda": clean(self.lam),
            "n_tail": self.n_tail,
            "n_values": self.n_values,
            "isolated": self.isolated,
            "log_likelihood_ratio": clean(self.log_likelihood_ratio),
            "p_value": clean(self.p_value),
            "significance": self.significance,
            "ks_distance": clean(self.ks_distance),
            "verdict": self.verdict.value,
            "note": self.note,
        }


@dataclass(frozen=True)
class CurveRow:
    """One x value of the plot-data table."""

    x: int
    empirical_pdf: float
    empirical_cdf: float
    empirical_ccdf: float
    pl_pdf: float
    pl_cdf: float
    pl_ccdf: float
    exp_pdf: float
    exp_cdf: float
    exp_ccdf: float
