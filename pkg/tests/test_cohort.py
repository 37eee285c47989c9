"""Tests for the per-company pipeline and cohort aggregation."""

import csv
import shutil
from pathlib import Path

import pytest

from ledgergraph.models import (
    CompanyStats,
    CompanyStatus,
    GlobalConfig,
    Partition,
    SynthConfig,
    TailFitResult,
    Verdict,
)
from ledgergraph.services.cohort import (
    REPORT_FILES,
    CohortError,
    analyze_company,
    list_datasets,
    read_industry_map,
    run_cohort,
    summarize_cohort,
    write_cohort_report,
)
from ledgergraph.services.synth import generate_cohort
from ledgergraph.services.tail_fit import decide

SMALL = SynthConfig(seed=11, n_accounts=40, n_entries=200)


def _fit(ratio: float, p_value: float, significance: float = 0.1) -> TailFitResult:
    return TailFitResult(
        partition=Partition.FA,
        x_min=1,
        alpha=2.0,
        lam=0.5,
        n_tail=20,
        n_values=20,
        log_likelihood_ratio=ratio,
        p_value=p_value,
        significance=significance,
        verdict=decide(ratio, p_value, significance),
    )


def _read_csv(path: Path) -> list[list[str]]:
    with path.open(encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def test_fixture_company(journal_12_path: Path) -> None:
    stats = analyze_company(journal_12_path, GlobalConfig(), industry_code="RTL")

    assert stats.status is CompanyStatus.OK
    assert stats.company_id == "journal_12"
    assert (stats.n_fa, stats.n_bp, stats.n_edges) == (5, 3, 7)
    assert stats.n_entries == 12
    assert stats.diameter == 6
    assert stats.top_betweenness is not None
    assert stats.top_betweenness.label == "1300"
    assert stats.top_degree is not None
    assert stats.top_degree.label == "1100"
    assert stats.fa_fit is not None
    assert stats.fa_fit.verdict is Verdict.INSUFFICIENT_DATA


def test_failed_company_is_recorded(tmp_path: Path) -> None:
    path = tmp_path / "BROKEN.csv"
    path.write_text(
        "company_id,entry_id,date,account_id,amount,side\nX,J1,2023-01-01,A,abc,D\n",
        encoding="utf-8",
    )
    stats = analyze_company(path, GlobalConfig())

    assert stats.status is CompanyStatus.FAILED
    assert "unparsable amount" in stats.error
    assert stats.company_id == "BROKEN"


def test_node_cap_fails_the_company(journal_12_path: Path) -> None:
    stats = analyze_company(journal_12_path, GlobalConfig(node_cap=5))

    assert not stats.ok
    assert "cap exceeded" in stats.error


def test_diameter_and_size_ranges() -> None:
    stats = [
        CompanyStats("A", n_fa=10, n_bp=100, diameter=2),
        CompanyStats("B", n_fa=20, n_bp=300, diameter=11),
        CompanyStats("C", n_fa=30, n_bp=500, diameter=20),
        CompanyStats("D", status=CompanyStatus.FAILED, error="boom"),
    ]
    summary = summarize_cohort(stats)

    assert summary.diameter is not None
    assert (summary.diameter.mean, summary.diameter.minimum, summary.diameter.maximum) == (
        11.0,
        2.0,
        20.0,
    )
    assert summary.n_fa is not None and summary.n_fa.mean == 20.0
    assert summary.n_bp is not None and summary.n_bp.mean == 300.0
    assert summary.companies_total == 4
    assert summary.companies_ok == 3
    assert summary.companies_failed == 1


def test_power_law_share_counts_reliable_tests_only() -> None:
    fits = [_fit(5.0, 0.01)] * 8 + [_fit(-5.0, 0.01)] + [_fit(3.0, 0.5)] * 2
    fits.append(TailFitResult.insufficient(Partition.FA, 3, 0.1, "insufficient tail data"))
    stats = [CompanyStats(f"C{i:02d}", fa_fit=fit) for i, fit in enumerate(fits)]
    summary = summarize_cohort(stats)

    assert summary.fa_share.power_law == 8
    assert summary.fa_share.reliable == 9
    assert summary.fa_share.tested == 11
    assert summary.fa_share.fraction == pytest.approx(8 / 9)
    assert summary.bp_share.fraction is None


def test_significance_override_rederives_verdicts() -> None:
    stats = [
        CompanyStats("A", fa_fit=_fit(5.0, 0.05)),
        CompanyStats("B", fa_fit=_fit(5.0, 0.005)),
    ]

    assert summarize_cohort(stats).fa_share.reliable == 2
    strict = summarize_cohort(stats, significance=0.01)
    assert strict.fa_share.reliable == 1
    assert strict.significance == 0.01


def test_industry_breakdown() -> None:
    stats = [
        CompanyStats("A", fa_fit=_fit(5.0, 0.01)),
        CompanyStats("B", fa_fit=_fit(-5.0, 0.01)),
        CompanyStats("C", fa_fit=_fit(5.0, 0.01)),
        CompanyStats("D", status=CompanyStatus.FAILED),
    ]
    summary = summarize_cohort(stats, industries={"A": "RTL", "B": "RTL", "D": "LE"})

    assert summary.industry_counts == {"RTL": 2, "unmapped": 1}
    assert summary.fa_share_by_industry["RTL"].fraction == 0.5
    assert summary.fa_share_by_industry["unmapped"].fraction == 1.0


def test_empty_cohort_is_an_error() -> None:
    with pytest.raises(CohortError, match="empty cohort"):
        summarize_cohort([])
    with pytest.raises(CohortError, match="empty cohort"):
        run_cohort([], GlobalConfig())


def test_industry_map(tmp_path: Path) -> None:
    path = tmp_path / "industry_map.csv"
    path.write_text("company_id,industry_code\nC0001, CRS\nC0002,HLP\n,\n", encoding="utf-8")

    assert read_industry_map(path) == {"C0001": "CRS", "C0002": "HLP"}

    path.write_text("company,industry\nC0001,CRS\n", encoding="utf-8")
    with pytest.raises(CohortError, match="company_id and industry_code"):
        read_industry_map(path)


def test_list_datasets(tmp_path: Path) -> None:
    for name in ("C0002.csv", "C0001.csv", "industry_map.csv", "notes.txt"):
        (tmp_path / name).write_text("x\n", encoding="utf-8")

    assert [p.name for p in list_datasets(tmp_path)] == ["C0001.csv", "C0002.csv"]
    with pytest.raises(CohortError, match="not a directory"):
        list_datasets(tmp_path / "missing")


def test_report_files(journal_12_path: Path, tmp_path: Path) -> None:
    stats = [
        analyze_company(journal_12_path, GlobalConfig(), industry_code="RTL"),
        CompanyStats("zzz", status=CompanyStatus.FAILED, error="bad file"),
    ]
    summary = summarize_cohort(stats)
    written = write_cohort_report(stats, summary, tmp_path)

    assert [p.name for p in written] == list(REPORT_FILES)
    companies = _read_csv(tmp_path / "companies.csv")
    assert companies[0][:3] == ["company_id", "industry_code", "status"]
    assert companies[1][:3] == ["journal_12", "RTL", "ok"]
    assert companies[2][:4] == ["zzz", "unmapped", "failed", "bad file"]
    assert len({len(row) for row in companies}) == 1

    assert _read_csv(tmp_path / "table1.csv") == [["industry", "companies"], ["RTL", "1"]]
    assert _read_csv(tmp_path / "fig3_hist.csv") == [["diameter", "companies"], ["6", "1"]]
    table2 = _read_csv(tmp_path / "table2.csv")
    assert table2[1] == ["fa", "0", "0", "0", ""]
    summary_rows = {row[0]: row for row in _read_csv(tmp_path / "summary.csv")}
    assert summary_rows["diameter"][1:] == ["6.0", "6.0", "6.0", "1"]
    assert summary_rows["companies_failed"][4] == "1"


@pytest.mark.slow
def test_synthetic_cohort_end_to_end(tmp_path: Path) -> None:
    manifest = generate_cohort(SMALL, 50, tmp_path / "data", entries_range=(50, 400))
    industries = read_industry_map(manifest.industry_map)
    paths = list_datasets(manifest.directory)
    config = GlobalConfig(workers=2)

    outputs = []
    for run in ("first", "second"):
        stats = run_cohort(paths, config, industries)
        summary = summarize_cohort(stats, industries)
        write_cohort_report(stats, summary, tmp_path / run, industries)
        outputs.append({name: (tmp_path / run / name).read_bytes() for name in REPORT_FILES})

    assert outputs[0] == outputs[1]
    assert summary.companies_total == summary.companies_ok == 50
    assert summary.n_fa is not None and summary.n_bp is not None
    assert summary.diameter is not None
    assert sum(summary.industry_counts.values()) == 50
    assert summary.fa_share.tested + summary.bp_share.tested > 0
    summary_rows = {row[0]: row for row in _read_csv(tmp_path / "first" / "summary.csv")}
    assert all(summary_rows[m][1] for m in ("n_fa", "n_bp", "diameter"))


def test_worker_count_does_not_change_results(tmp_path: Path, journal_12_path: Path) -> None:
    manifest = generate_cohort(SMALL, 4, tmp_path, entries_range=(50, 150))
    shutil.copy(journal_12_path, tmp_path / "ACME.csv")
    paths = list_datasets(tmp_path)

    serial = run_cohort(paths, GlobalConfig(workers=1), manifest.industries)
    pooled = run_cohort(paths, GlobalConfig(workers=3), manifest.industries)

    assert [s.company_id for s in serial] == ["ACME", "C0001", "C0002", "C0003", "C0004"]
    assert [s.company_id for s in pooled] == [s.company_id for s in serial]
    assert serial[0].industry_code == "unmapped"
    # fits hold NaN for insufficient tails, so compare the written tables
    for run, stats in (("serial", serial), ("pooled", pooled)):
        write_cohort_report(stats, summarize_cohort(stats), tmp_path / run)
    for name in REPORT_FILES:
        serial_bytes = (tmp_path / "serial" / name).read_bytes()
        assert serial_bytes == (tmp_path / "pooled" / name).read_bytes()
