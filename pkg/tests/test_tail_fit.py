"""Tests for the discrete tail fits and the likelihood-ratio comparison."""

import math
import statistics

import numpy as np
import numpy.typing as npt
import pytest
from scipy.special import zeta

from ledgergraph.models import DegreeSequence, Partition, Verdict
from ledgergraph.services.tail_fit import (
    DegenerateTail,
    DiscreteExponential,
    DiscretePowerLaw,
    InsufficientTailData,
    TailFitError,
    assess_tail,
    compare_log_likelihoods,
    decide,
    distribution_curves,
    fit_exponential,
    fit_power_law,
    likelihood_ratio_test,
)

IntArray = npt.NDArray[np.int64]


def _grid_alpha(values: list[int], x_min: int, step: float = 1e-4) -> float:
    """Brute-force discrete MLE over alpha in (1, 6]."""
    tail = np.array([v for v in values if v >= x_min], dtype=np.float64)
    grid = np.arange(1.0 + step, 6.0 + step / 2, step)
    log_likelihood = -grid * np.log(tail).sum() - tail.size * np.log(zeta(grid, x_min))
    return float(grid[int(np.argmax(log_likelihood))])


def _power_law_sample(seed: int, alpha: float = 2.5, size: int = 5000) -> IntArray:
    return DiscretePowerLaw(alpha, 1).sample(np.random.default_rng(seed), size)


def _exponential_sample(seed: int, lam: float = 0.3, size: int = 5000) -> IntArray:
    return DiscreteExponential(lam, 1).sample(np.random.default_rng(seed), size)


def test_alpha_matches_grid_search_oracle() -> None:
    values = [1, 1, 1, 2, 4, 8]
    fit = fit_power_law(values, min_tail=1, x_min=1)

    assert fit.x_min == 1
    assert fit.n_tail == 6
    assert fit.alpha == pytest.approx(_grid_alpha(values, 1), abs=1e-3)


def test_alpha_matches_grid_search_on_seeded_samples() -> None:
    for seed in range(3):
        values = list(_power_law_sample(seed, size=400))
        fit = fit_power_law(values, x_min=2)
        assert fit.alpha == pytest.approx(_grid_alpha(values, 2), abs=1e-3)


def test_log_likelihood_is_reported_at_the_estimate() -> None:
    values = np.array([1, 1, 1, 2, 4, 8])
    fit = fit_power_law(values, min_tail=1, x_min=1)
    model = DiscretePowerLaw(fit.alpha, 1)

    assert fit.log_likelihood == pytest.approx(float(model.log_pdf(values).sum()), abs=1e-9)


def test_identical_values_cannot_be_fitted() -> None:
    with pytest.raises(InsufficientTailData, match="2 distinct values"):
        fit_power_law([4] * 50)


def test_too_short_tail_is_insufficient() -> None:
    with pytest.raises(InsufficientTailData, match="insufficient tail data"):
        fit_power_law([1, 2, 3, 4, 5])
    with pytest.raises(InsufficientTailData):
        fit_power_law([1, 2, 3, 4, 5], min_tail=3, x_min=4)


def test_forced_cutoff_with_equal_tail_is_degenerate() -> None:
    with pytest.raises(DegenerateTail):
        fit_power_law([1, 2, 2, 2], min_tail=1, x_min=2)


def test_non_positive_values_are_rejected() -> None:
    with pytest.raises(TailFitError, match=">= 1"):
        fit_power_law([0, 1, 2])


def test_cutoff_minimises_ks_distance() -> None:
    values = _power_law_sample(11, size=600)
    best = fit_power_law(values, min_tail=10)

    candidates = [int(v) for v in np.unique(values)[:-1] if (values >= v).sum() >= 10]
    distances = {c: fit_power_law(values, min_tail=10, x_min=c).ks_distance for c in candidates}
    lowest = min(distances.values())

    assert best.x_min == min(c for c, d in distances.items() if d == lowest)
    assert best.n_tail == int((values >= best.x_min).sum())


def test_exponential_closed_form() -> None:
    fit = fit_exponential([3, 3, 3, 4, 4, 5], x_min=3)

    assert fit.lam == pytest.approx(math.log(2.5), abs=1e-12)
    assert fit.n_tail == 6


def test_exponential_estimate_maximises_likelihood() -> None:
    values = [3, 3, 3, 4, 4, 5]
    fit = fit_exponential(values, x_min=3)
    for lam in (fit.lam * 0.9, fit.lam * 1.1):
        other = float(DiscreteExponential(lam, 3).log_pdf(values).sum())
        assert other < fit.log_likelihood
    assert fit.log_likelihood == pytest.approx(
        float(DiscreteExponential(fit.lam, 3).log_pdf(values).sum()), abs=1e-9
    )


def test_exponential_ignores_values_below_cutoff() -> None:
    fit = fit_exponential([1, 1, 2, 3, 3, 3, 4, 4, 5], x_min=3)

    assert fit.lam == pytest.approx(math.log(2.5))


def test_exponential_errors() -> None:
    with pytest.raises(DegenerateTail, match="degenerate tail"):
        fit_exponential([7], x_min=7)
    with pytest.raises(DegenerateTail):
        fit_exponential([3, 3, 3], x_min=3)
    with pytest.raises(InsufficientTailData):
        fit_exponential([1, 2], x_min=5)


def test_exponential_rate_recovery() -> None:
    estimates = [fit_exponential(_exponential_sample(seed), 1).lam for seed in range(25)]

    assert statistics.median(estimates) == pytest.approx(0.3, rel=0.05)


def test_compare_known_value() -> None:
    ratio, p_value = compare_log_likelihoods([1.0, -1.0, 3.0, 1.0], [0.0, 0.0, 0.0, 0.0])

    # sum 4, population sd sqrt(2), n 4
    assert ratio == 4.0
    assert p_value == pytest.approx(math.erfc(1.0), abs=1e-15)


def test_compare_identical_models() -> None:
    first = np.log([0.5, 0.25, 0.125])

    assert compare_log_likelihoods(first, first) == (0.0, 1.0)


def test_compare_flat_ratios_give_p_one() -> None:
    ratio, p_value = compare_log_likelihoods([2.0, 2.0, 2.0], [1.0, 1.0, 1.0])

    assert ratio == 3.0
    assert p_value == 1.0


def test_swapping_models_negates_ratio() -> None:
    rng = np.random.default_rng(4)
    for _ in range(20):
        first = rng.normal(size=30)
        second = rng.normal(size=30)
        ratio, p_value = compare_log_likelihoods(first, second)
        swapped_ratio, swapped_p = compare_log_likelihoods(second, first)
        assert swapped_ratio == pytest.approx(-ratio, abs=1e-12)
        assert swapped_p == pytest.approx(p_value, abs=1e-12)


@pytest.mark.parametrize(
    ("ratio", "p_value", "verdict"),
    [
        (2.0, 0.05, Verdict.POWER_LAW_PREFERRED),
        (-2.0, 0.05, Verdict.EXPONENTIAL_PREFERRED),
        (2.0, 0.5, Verdict.INCONCLUSIVE),
        (-2.0, 0.1, Verdict.INCONCLUSIVE),
        (0.0, 0.0, Verdict.INCONCLUSIVE),
    ],
)
def test_decision_rule(ratio: float, p_value: float, verdict: Verdict) -> None:
    assert decide(ratio, p_value, 0.1) is verdict


def test_model_cdf_and_ccdf_sum_to_one() -> None:
    xs = np.arange(3, 200)
    for model in (DiscretePowerLaw(2.2, 3), DiscreteExponential(0.4, 3)):
        below = model.cdf(xs - 1)
        assert below + model.sf(xs) == pytest.approx(np.ones(xs.size), abs=1e-12)


def test_model_pdfs_are_normalised() -> None:
    for model in (DiscretePowerLaw(2.5, 2), DiscreteExponential(0.3, 2)):
        xs = np.arange(2, 2001)
        total = float(model.pdf(xs).sum()) + float(model.sf(2001))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_samplers_respect_cutoff() -> None:
    rng = np.random.default_rng(0)

    assert DiscretePowerLaw(2.5, 4).sample(rng, 500).min() >= 4
    assert DiscreteExponential(0.5, 4).sample(rng, 500).min() >= 4


def test_result_is_independent_of_value_order() -> None:
    values = _power_law_sample(21, size=800)
    shuffled = np.random.default_rng(1).permutation(values)

    assert likelihood_ratio_test(values) == likelihood_ratio_test(shuffled)


def test_result_carries_partition_metadata() -> None:
    degrees = np.concatenate([_power_law_sample(2, size=300), np.zeros(4, dtype=np.int64)])
    seq = DegreeSequence.from_degrees(degrees, Partition.FA)
    result = likelihood_ratio_test(seq)

    assert result.partition is Partition.FA
    assert result.isolated == 4
    assert result.n_values == 300
    assert result.n_tail <= 300
    assert result.alpha > 1.0
    assert result.lam > 0.0
    assert 0.0 <= result.p_value <= 1.0
    assert result.verdict is decide(result.log_likelihood_ratio, result.p_value, 0.1)
    assert result.to_dict()["partition"] == "fa"


def test_assess_tail_records_failures() -> None:
    result = assess_tail(DegreeSequence.from_degrees([1], Partition.BP))

    assert result.verdict is Verdict.INSUFFICIENT_DATA
    assert "insufficient tail data" in result.note
    assert math.isnan(result.alpha)
    assert result.to_dict()["alpha"] is None
    assert not result.verdict.is_reliable


def test_curves_over_the_tail() -> None:
    values = _power_law_sample(5, size=1000)
    fit = likelihood_ratio_test(values)
    rows = distribution_curves(values, fit)

    assert rows[0].x == fit.x_min
    assert rows[0].empirical_ccdf == 1.0
    assert rows[0].empirical_cdf == 0.0
    assert sum(r.empirical_pdf for r in rows) == pytest.approx(1.0)
    ccdf = [r.empirical_ccdf for r in rows]
    assert all(a >= b for a, b in zip(ccdf, ccdf[1:]))
    for r in rows:
        assert r.pl_cdf + r.pl_ccdf == pytest.approx(1.0, abs=1e-12)
        assert r.exp_cdf + r.exp_ccdf == pytest.approx(1.0, abs=1e-12)
        assert r.empirical_cdf + r.empirical_ccdf == pytest.approx(1.0, abs=1e-12)
    assert rows[0].pl_ccdf == pytest.approx(1.0)


def test_curves_need_a_fit() -> None:
    insufficient = assess_tail([1, 2])

    with pytest.raises(InsufficientTailData):
        distribution_curves([1, 2], insufficient)


@pytest.mark.slow
def test_power_law_samples_are_recognised() -> None:
    results = [likelihood_ratio_test(_power_law_sample(seed)) for seed in range(100)]

    preferred = sum(r.verdict is Verdict.POWER_LAW_PREFERRED for r in results)
    assert preferred >= 90
    assert statistics.median(r.alpha for r in results) == pytest.approx(2.5, abs=0.1)


@pytest.mark.slow
def test_exponential_samples_are_not_mistaken_for_power_laws() -> None:
    results = [likelihood_ratio_test(_exponential_sample(seed)) for seed in range(100)]

    preferred = sum(r.verdict is Verdict.POWER_LAW_PREFERRED for r in results)
    assert preferred <= 10
