"""Discrete power-law and exponential tail fits and their likelihood-ratio comparison."""

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize_scalar
from scipy.special import erfc, zeta

from ledgergraph.config import ALPHA_TOLERANCE, MAX_ALPHA, MIN_ALPHA, MIN_TAIL, SIGNIFICANCE
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import (
    CurveRow,
    DegreeSequence,
    ExponentialFit,
    Partition,
    PowerLawFit,
    TailFitResult,
    Verdict,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
Values = DegreeSequence | npt.ArrayLike

# relative spread below which per-point log ratios count as identical
FLAT_RATIO_TOLERANCE: float = 1e-12


class TailFitError(LedgerGraphError):
    """A degree sequence cannot be fitted."""

    pass


class InsufficientTailData(TailFitError):
    """Too few values above every candidate lower cutoff."""

    def __init__(self, detail: str) -> None:
        super().__init__(f"insufficient tail data: {detail}")


class DegenerateTail(TailFitError):
    """Every tail value equals the lower cutoff."""

    def __init__(self, detail: str) -> None:
        super().__init__(f"degenerate tail: {detail}")


@dataclass(frozen=True)
class DiscretePowerLaw:
    """p(x) = x^-alpha / zeta(alpha, x_min) on integers x >= x_min."""

    alpha: float
    x_min: int

    @property
    def normalizer(self) -> float:
        """Hurwitz zeta at the lower cutoff."""
        return float(zeta(self.alpha, self.x_min))

    def log_pdf(self, x: npt.ArrayLike) -> FloatArray:
        return -self.alpha * np.log(np.asarray(x, dtype=np.float64)) - math.log(self.normalizer)

    def pdf(self, x: npt.ArrayLike) -> FloatArray:
        return np.exp(self.log_pdf(x))

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        """P(X <= x)."""
        return 1.0 - self.sf(np.asarray(x, dtype=np.float64) + 1.0)

    def sf(self, x: npt.ArrayLike) -> FloatArray:
        """P(X >= x)."""
        arr = np.maximum(np.asarray(x, dtype=np.float64), self.x_min)
        return np.asarray(zeta(self.alpha, arr) / self.normalizer, dtype=np.float64)

    def sample(self, rng: np.random.Generator, size: int) -> IntArray:
        """Draw from the zeta distribution, keeping draws at or above x_min."""
        if self.x_min == 1:
            return rng.zipf(self.alpha, size).astype(np.int64)
        out = np.empty(0, dtype=np.int64)
        while out.size < size:
            draws = rng.zipf(self.alpha, 2 * (size - out.size))
            out = np.concatenate([out, draws[draws >= self.x_min]])
        return out[:size]


@dataclass(frozen=True)
class DiscreteExponential:
    """p(x) = (1 - e^-lam) e^(-lam (x - x_min)) on integers x >= x_min."""

    lam: float
    x_min: int

    def log_pdf(self, x: npt.ArrayLike) -> FloatArray:
        shift = np.asarray(x, dtype=np.float64) - self.x_min
        return math.log(-math.expm1(-self.lam)) - self.lam * shift

    def pdf(self, x: npt.ArrayLike) -> FloatArray:
        return np.exp(self.log_pdf(x))

    def cdf(self, x: npt.ArrayLike) -> FloatArray:
        """P(X <= x)."""
        return 1.0 - self.sf(np.asarray(x, dtype=np.float64) + 1.0)

    def sf(self, x: npt.ArrayLike) -> FloatArray:
        """P(X >= x)."""
        shift = np.maximum(np.asarray(x, dtype=np.float64) - self.x_min, 0.0)
        return np.exp(-self.lam * shift)

    def sample(self, rng: np.random.Generator, size: int) -> IntArray:
        """Shifted geometric draws."""
        draws = rng.geometric(-math.expm1(-self.lam), size)
        return (draws - 1 + self.x_min).astype(np.int64)


def fit_power_law(
    seq: Values,
    min_tail: int = MIN_TAIL,
    x_min: int | None = None,
) -> PowerLawFit:
    """Discrete power-law fit with the lower cutoff chosen by minimum KS distance.

    Candidate cutoffs are the distinct values below the maximum that leave at least
    ``min_tail`` values; ties in KS distance go to the smallest cutoff. A forced ``x_min``
    skips the search.
    """
    values = _values(seq)
    distinct = np.unique(values)
    if distinct.size < 2:
        raise InsufficientTailData(f"need at least 2 distinct values, got {distinct.size}")

    if x_min is not None:
        tail = values[values >= x_min]
        if tail.size < max(min_tail, 1):
            raise InsufficientTailData(
                f"{tail.size} values >= x_min={x_min}, minimum is {min_tail}"
            )
        if np.unique(tail).size < 2:
            raise DegenerateTail(f"every value >= {x_min} is equal")
        return _fit_at(tail, x_min)

    best: PowerLawFit | None = None
    for candidate in distinct[:-1]:
        tail = values[values >= candidate]
        if tail.size < min_tail:
            break
        fit = _fit_at(tail, int(candidate))
        if best is None or fit.ks_distance < best.ks_distance:
            best = fit

    if best is None:
        raise InsufficientTailData(
            f"no cutoff leaves {min_tail} values ({values.size} values in total)"
        )
    logger.debug(
        "power law: x_min=%d alpha=%.4f ks=%.4f n_tail=%d",
        best.x_min, best.alpha, best.ks_distance, best.n_tail,
    )
    return best


def fit_exponential(seq: Values, x_min: int) -> ExponentialFit:
    """Closed-form maximum-likelihood discrete exponential on values >= x_min."""
    values = _values(seq)
    tail = values[values >= x_min]
    if tail.size == 0:
        raise InsufficientTailData(f"no values >= x_min={x_min}")
    excess = float((tail - x_min).sum())
    if excess == 0.0:
        raise DegenerateTail(f"all {tail.size} tail values equal x_min={x_min}")

    lam = math.log1p(tail.size / excess)
    log_likelihood = tail.size * math.log(-math.expm1(-lam)) - lam * excess
    return ExponentialFit(
        x_min=x_min, lam=lam, log_likelihood=log_likelihood, n_tail=int(tail.size)
    )


def compare_log_likelihoods(first: npt.ArrayLike, second: npt.ArrayLike) -> tuple[float, float]:
    """Summed log-likelihood ratio of two models over the same points, and its two-sided p-value.

    p = erfc(|R| / (sigma sqrt(2n))) with sigma the standard deviation of the per-point
    ratios. Identical per-point ratios give p = 1.
    """
    diff = np.asarray(first, dtype=np.float64) - np.asarray(second, dtype=np.float64)
    n = diff.size
    if n == 0:
        return 0.0, 1.0
    ratio = float(diff.sum())
    sigma = float(diff.std())
    if sigma <= FLAT_RATIO_TOLERANCE * max(1.0, abs(float(diff.mean()))):
        return ratio, 1.0
    return ratio, float(erfc(abs(ratio) / (sigma * math.sqrt(2.0 * n))))


def likelihood_ratio_test(
    seq: Values,
    significance: float = SIGNIFICANCE,
    min_tail: int = MIN_TAIL,
    x_min: int | None = None,
) -> TailFitResult:
    """Compare the power law against the exponential on the power law's tail.

    R > 0 favours the power law. The verdict is reliable only when p < significance.
    """
    values = _values(seq)
    partition, isolated = _meta(seq)

    power_law = fit_power_law(values, min_tail, x_min)
    exponential = fit_exponential(values, power_law.x_min)
    tail = values[values >= power_law.x_min]

    pl_model = DiscretePowerLaw(power_law.alpha, power_law.x_min)
    exp_model = DiscreteExponential(exponential.lam, exponential.x_min)
    ratio, p_value = compare_log_likelihoods(pl_model.log_pdf(tail), exp_model.log_pdf(tail))

    return TailFitResult(
        partition=partition,
        x_min=power_law.x_min,
        alpha=power_law.alpha,
        lam=exponential.lam,
        n_tail=power_law.n_tail,
        n_values=int(values.size),
        log_likelihood_ratio=ratio,
        p_value=p_value,
        significance=significance,
        verdict=decide(ratio, p_value, significance),
        ks_distance=power_law.ks_distance,
        isolated=isolated,
    )


def assess_tail(
    seq: Values,
    significance: float = SIGNIFICANCE,
    min_tail: int = MIN_TAIL,
) -> TailFitResult:
    """Like ``likelihood_ratio_test`` but records fit failures instead of raising."""
    try:
        return likelihood_ratio_test(seq, significance, min_tail)
    except TailFitError as e:
        partition, isolated = _meta(seq)
        return TailFitResult.insufficient(
            partition, int(_values(seq).size), significance, str(e), isolated
        )


def decide(ratio: float, p_value: float, significance: float = SIGNIFICANCE) -> Verdict:
    """Verdict from the sign of R and the p-value."""
    if p_value < significance and ratio > 0:
        return Verdict.POWER_LAW_PREFERRED
    if p_value < significance and ratio < 0:
        return Verdict.EXPONENTIAL_PREFERRED
    return Verdict.INCONCLUSIVE


def distribution_curves(seq: Values, fit: TailFitResult) -> list[CurveRow]:
    """Empirical and fitted pdf/cdf/ccdf at each distinct tail value.

    cdf(x) = P(X < x) and ccdf(x) = P(X >= x) on the tail, so cdf + ccdf = 1.
    """
    if fit.verdict is Verdict.INSUFFICIENT_DATA:
        raise InsufficientTailData(fit.note or "no fit to plot")
    values = _values(seq)
    tail = values[values >= fit.x_min]
    if tail.size == 0:
        raise InsufficientTailData(f"no values >= x_min={fit.x_min}")

    xs, counts = np.unique(tail, return_counts=True)
    n = float(tail.size)
    below = np.concatenate([[0], np.cumsum(counts)[:-1]])
    pl_model = DiscretePowerLaw(fit.alpha, fit.x_min)
    exp_model = DiscreteExponential(fit.lam, fit.x_min)
    pl_pdf, pl_sf = pl_model.pdf(xs), pl_model.sf(xs)
    exp_pdf, exp_sf = exp_model.pdf(xs), exp_model.sf(xs)

    return [
        CurveRow(
            x=int(x),
            empirical_pdf=counts[i] / n,
            empirical_cdf=below[i] / n,
            empirical_ccdf=(n - below[i]) / n,
            pl_pdf=float(pl_pdf[i]),
            pl_cdf=1.0 - float(pl_sf[i]),
            pl_ccdf=float(pl_sf[i]),
            exp_pdf=float(exp_pdf[i]),
            exp_cdf=1.0 - float(exp_sf[i]),
            exp_ccdf=float(exp_sf[i]),
        )
        for i, x in enumerate(xs)
    ]


def _values(seq: Values) -> IntArray:
    """Positive integer values of a sequence, sorted."""
    raw = seq.values if isinstance(seq, DegreeSequence) else np.asarray(seq)
    arr = np.asarray(raw, dtype=np.int64)
    if arr.size and int(arr.min()) < 1:
        raise TailFitError("degree values must be >= 1")
    return np.sort(arr)


def _meta(seq: Values) -> tuple[Partition | None, int]:
    if isinstance(seq, DegreeSequence):
        return seq.partition, seq.isolated
    return None, 0


def _fit_at(tail: IntArray, x_min: int) -> PowerLawFit:
    """Maximum-likelihood alpha and KS distance for a fixed cutoff."""
    n = int(tail.size)
    log_sum = float(np.log(tail.astype(np.float64)).sum())

    def neg_log_likelihood(alpha: float) -> float:
        return alpha * log_sum + n * math.log(float(zeta(alpha, x_min)))

    soln = minimize_scalar(
        neg_log_likelihood,
        bounds=(MIN_ALPHA, MAX_ALPHA),
        method="bounded",
        options={"xatol": ALPHA_TOLERANCE},
    )
    alpha = float(soln.x)
    return PowerLawFit(
        x_min=x_min,
        alpha=alpha,
        log_likelihood=-neg_log_likelihood(alpha),
        ks_distance=_ks_distance(tail, DiscretePowerLaw(alpha, x_min)),
        n_tail=n,
    )


def _ks_distance(tail: IntArray, model: DiscretePowerLaw) -> float:
    """Largest gap between the empirical and model CDFs over the tail.

    Both are step functions on the integers; the empirical one is flat between observed
    values, so the gap peaks at an observed value or just before the next one.
    """
    xs, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / tail.size
    points = np.concatenate([xs, xs[1:] - 1])
    levels = np.concatenate([empirical, empirical[:-1]])
    return float(np.abs(levels - model.cdf(points)).max())
