"""Per-company pipeline and cohort aggregation."""

import csv
import logging
import math
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from ledgergraph.config import HIST_BINS, MIN_TAIL, SIGNIFICANCE, UNMAPPED_INDUSTRY
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import (
    CohortSummary,
    CompanyStats,
    CompanyStatus,
    GlobalConfig,
    IngestConfig,
    Measure,
    Partition,
    RangeSummary,
    ShareSummary,
    TailFitResult,
    Verdict,
)
from ledgergraph.services.builder import build_network
from ledgergraph.services.centrality import compute_centrality, top_nodes
from ledgergraph.services.graph import BipartiteAdjacency, summarize_network
from ledgergraph.services.ingest import read_journal_file
from ledgergraph.services.tail_fit import assess_tail, decide
from ledgergraph.utils import format_duration, format_float

logger = logging.getLogger(__name__)

INDUSTRY_MAP_NAME = "industry_map.csv"

REPORT_FILES: tuple[str, ...] = (
    "companies.csv",
    "summary.csv",
    "table1.csv",
    "table2.csv",
    "table3.csv",
    "fig2_hist.csv",
    "fig3_hist.csv",
)


class CohortError(LedgerGraphError):
    """Cohort cannot be analysed or summarised."""

    pass


@dataclass(frozen=True)
class CompanyTask:
    """Everything a worker needs to analyse one dataset."""

    path: Path
    config: GlobalConfig
    industry_code: str = ""
    ingest_config: IngestConfig = field(default_factory=IngestConfig)
    min_tail: int = MIN_TAIL


def read_industry_map(path: Path) -> dict[str, str]:
    """Load a company_id,industry_code sidecar file."""
    try:
        with path.open(encoding="utf-8-sig", newline="") as f:
            reader = csv.DictReader(f)
            fields = reader.fieldnames or []
            if "company_id" not in fields or "industry_code" not in fields:
                raise CohortError(
                    f"{path.name}: industry map needs company_id and industry_code columns"
                )
            return {
                row["company_id"].strip(): row["industry_code"].strip()
                for row in reader
                if row.get("company_id", "").strip()
            }
    except OSError as e:
        raise CohortError(f"cannot read industry map {path}: {e}") from e


def list_datasets(directory: Path) -> list[Path]:
    """Journal CSVs of a cohort directory sorted by company id (file stem)."""
    if not directory.is_dir():
        raise CohortError(f"not a directory: {directory}")
    paths = [
        p for p in directory.glob("*.csv") if p.is_file() and p.name != INDUSTRY_MAP_NAME
    ]
    return sorted(paths, key=lambda p: p.stem)


def analyze_company(
    path: Path,
    config: GlobalConfig,
    industry_code: str = "",
    ingest_config: IngestConfig | None = None,
    min_tail: int = MIN_TAIL,
) -> CompanyStats:
    """Run ingest, build, graph statistics, centrality and tail fits for one dataset.

    Any data failure yields a record with status FAILED and the error text; the record's
    company id is the file stem.
    """
    stats = CompanyStats(company_id=path.stem, industry_code=industry_code)
    started = time.monotonic()
    try:
        result = read_journal_file(path, ingest_config)
        network = build_network(result.entries, config.node_cap)
        graph = BipartiteAdjacency.from_network(network)
        summary = summarize_network(graph)

        stats.n_fa = network.n_fa
        stats.n_bp = network.n_bp
        stats.n_edges = len(network.edges)
        stats.n_entries = network.entry_count
        stats.n_unbalanced = network.unbalanced_count
        stats.n_components = summary.n_components
        stats.diameter = summary.diameter.value if summary.diameter else None

        for measure in Measure:
            report = compute_centrality(graph, measure, config.normalization, config.betweenness)
            top = top_nodes(report, 1)
            best = top[0] if top else None
            if measure is Measure.BETWEENNESS:
                stats.top_betweenness = best
            elif measure is Measure.CLOSENESS:
                stats.top_closeness = best
            else:
                stats.top_degree = best

        fa_degrees = graph.degree_sequence(Partition.FA)
        bp_degrees = graph.degree_sequence(Partition.BP)
        stats.fa_fit = assess_tail(fa_degrees, config.significance, min_tail)
        stats.bp_fit = assess_tail(bp_degrees, config.significance, min_tail)
    except (LedgerGraphError, OSError) as e:
        logger.warning("company %s failed: %s", stats.company_id, e)
        stats.status = CompanyStatus.FAILED
        stats.error = str(e)
        return stats

    logger.info(
        "company %s: %d FA, %d BP, diameter %s (%s)",
        stats.company_id, stats.n_fa, stats.n_bp, stats.diameter,
        format_duration(time.monotonic() - started),
    )
    return stats


def run_cohort(
    paths: Sequence[Path],
    config: GlobalConfig,
    industries: dict[str, str] | None = None,
    ingest_config: IngestConfig | None = None,
    min_tail: int = MIN_TAIL,
) -> list[CompanyStats]:
    """Analyse every dataset, in parallel when ``config.workers`` > 1.

    Results come back sorted by company id, one per dataset.
    """
    if not paths:
        raise CohortError("empty cohort: no datasets found")
    industries = industries or {}
    ingest_config = ingest_config or IngestConfig()
    tasks = [
        CompanyTask(
            path=p,
            config=config,
            industry_code=industries.get(p.stem, UNMAPPED_INDUSTRY),
            ingest_config=ingest_config,
            min_tail=min_tail,
        )
        for p in sorted(paths, key=lambda p: p.stem)
    ]
    logger.info("analysing %d companies with %d worker(s)", len(tasks), config.workers)

    if config.workers <= 1 or len(tasks) == 1:
        return [_run_task(task) for task in tasks]
    with Pool(processes=min(config.workers, len(tasks))) as pool:
        return pool.map(_run_task, tasks, chunksize=1)


def summarize_cohort(
    stats: Iterable[CompanyStats],
    industries: dict[str, str] | None = None,
    significance: float | None = None,
) -> CohortSummary:
    """Aggregate company records; failed companies count only in the coverage figures.

    Power-law shares count tests with p < significance only. Verdicts are re-derived from
    each fit's R and p so the summary honours ``significance`` when given.
    """
    rows = sorted(stats, key=lambda s: s.company_id)
    if not rows:
        raise CohortError("empty cohort: nothing to summarise")
    industries = industries or {}
    level = significance if significance is not None else _stored_significance(rows)

    ok = [s for s in rows if s.ok]
    by_industry: dict[str, list[CompanyStats]] = {}
    for s in ok:
        by_industry.setdefault(_industry_of(s, industries), []).append(s)

    diameters = [float(s.diameter) for s in ok if s.diameter is not None]
    return CohortSummary(
        companies_total=len(rows),
        companies_ok=len(ok),
        industry_counts={code: len(group) for code, group in sorted(by_industry.items())},
        n_fa=_range([float(s.n_fa) for s in ok]),
        n_bp=_range([float(s.n_bp) for s in ok]),
        diameter=_range(diameters),
        fa_share=_share([s.fa_fit for s in ok], level),
        bp_share=_share([s.bp_fit for s in ok], level),
        fa_share_by_industry={
            code: _share([s.fa_fit for s in group], level)
            for code, group in sorted(by_industry.items())
        },
        bp_share_by_industry={
            code: _share([s.bp_fit for s in group], level)
            for code, group in sorted(by_industry.items())
        },
        significance=level,
    )


def write_cohort_report(
    stats: Sequence[CompanyStats],
    summary: CohortSummary,
    out_dir: Path,
    industries: dict[str, str] | None = None,
) -> list[Path]:
    """Write the seven report tables; returns their paths in a fixed order."""
    out_dir.mkdir(parents=True, exist_ok=True)
    industries = industries or {}
    rows = sorted(stats, key=lambda s: s.company_id)
    ok = [s for s in rows if s.ok]

    tables: dict[str, list[list[str]]] = {
        "companies.csv": _companies_table(rows, industries),
        "summary.csv": _summary_table(summary),
        "table1.csv": [["industry", "companies"]]
        + [[code, str(n)] for code, n in summary.industry_counts.items()],
        "table2.csv": [_SHARE_HEADER]
        + [
            _share_row(Partition.FA.value, summary.fa_share),
            _share_row(Partition.BP.value, summary.bp_share),
        ],
        "table3.csv": [["industry", *_SHARE_HEADER]] + _industry_share_rows(summary),
        "fig2_hist.csv": _size_histogram(ok),
        "fig3_hist.csv": _diameter_histogram(ok),
    }

    written: list[Path] = []
    for name in REPORT_FILES:
        path = out_dir / name
        with path.open("w", encoding="utf-8", newline="") as f:
            csv.writer(f, lineterminator="\n").writerows(tables[name])
        written.append(path)
    logger.info("cohort report written to %s", out_dir)
    return written


_SHARE_HEADER = ["node_type", "power_law_preferred", "reliable_tests", "tested", "percentage"]

_FIT_COLUMNS = ("x_min", "alpha", "lambda", "n_tail", "llr", "p_value", "verdict")


def _run_task(task: CompanyTask) -> CompanyStats:
    """Pool entry point."""
    return analyze_company(
        task.path, task.config, task.industry_code, task.ingest_config, task.min_tail
    )


def _industry_of(stats: CompanyStats, industries: dict[str, str]) -> str:
    code = industries.get(stats.company_id) or stats.industry_code
    return code or UNMAPPED_INDUSTRY


def _stored_significance(rows: Sequence[CompanyStats]) -> float:
    """Significance the fits were run with."""
    for s in rows:
        for fit in (s.fa_fit, s.bp_fit):
            if fit is not None:
                return fit.significance
    return SIGNIFICANCE


def _range(values: Sequence[float]) -> RangeSummary | None:
    if not values:
        return None
    return RangeSummary(
        mean=math.fsum(values) / len(values),
        minimum=min(values),
        maximum=max(values),
        count=len(values),
    )


def _share(fits: Sequence[TailFitResult | None], significance: float) -> ShareSummary:
    """Power-law verdicts among reliable tests."""
    verdicts = [
        decide(fit.log_likelihood_ratio, fit.p_value, significance)
        for fit in fits
        if fit is not None and fit.verdict is not Verdict.INSUFFICIENT_DATA
    ]
    return ShareSummary(
        power_law=sum(1 for v in verdicts if v is Verdict.POWER_LAW_PREFERRED),
        reliable=sum(1 for v in verdicts if v.is_reliable),
        tested=len(verdicts),
    )


def _share_row(label: str, share: ShareSummary) -> list[str]:
    return [
        label,
        str(share.power_law),
        str(share.reliable),
        str(share.tested),
        format_float(share.percentage),
    ]


def _industry_share_rows(summary: CohortSummary) -> list[list[str]]:
    rows: list[list[str]] = []
    for code in summary.industry_counts:
        for partition, shares in (
            (Partition.FA, summary.fa_share_by_industry),
            (Partition.BP, summary.bp_share_by_industry),
        ):
            share = shares.get(code, ShareSummary(0, 0, 0))
            rows.append([code, *_share_row(partition.value, share)])
    return rows


def _companies_table(rows: Sequence[CompanyStats], industries: dict[str, str]) -> list[list[str]]:
    header = [
        "company_id", "industry_code", "status", "error",
        "n_fa", "n_bp", "n_edges", "n_entries", "n_unbalanced", "n_components", "diameter",
        "top_gateway", "top_gateway_score", "top_hub", "top_hub_score",
        "top_core_activity", "top_core_activity_score",
    ]
    header += [f"fa_{c}" for c in _FIT_COLUMNS] + [f"bp_{c}" for c in _FIT_COLUMNS]
    table = [header]
    for s in rows:
        row = [
            s.company_id,
            _industry_of(s, industries),
            s.status.value,
            s.error,
            str(s.n_fa),
            str(s.n_bp),
            str(s.n_edges),
            str(s.n_entries),
            str(s.n_unbalanced),
            str(s.n_components),
            "" if s.diameter is None else str(s.diameter),
        ]
        for node in (s.top_betweenness, s.top_closeness, s.top_degree):
            row += [node.label, format_float(node.score)] if node else ["", ""]
        for fit in (s.fa_fit, s.bp_fit):
            row += _fit_cells(fit)
        table.append(row)
    return table


def _fit_cells(fit: TailFitResult | None) -> list[str]:
    if fit is None:
        return [""] * len(_FIT_COLUMNS)
    if fit.verdict is Verdict.INSUFFICIENT_DATA:
        return ["", "", "", "", "", "", fit.verdict.value]
    return [
        str(fit.x_min),
        format_float(fit.alpha),
        format_float(fit.lam),
        str(fit.n_tail),
        format_float(fit.log_likelihood_ratio),
        format_float(fit.p_value),
        fit.verdict.value,
    ]


def _summary_table(summary: CohortSummary) -> list[list[str]]:
    table = [["metric", "mean", "min", "max", "count"]]
    ranges = (("n_fa", summary.n_fa), ("n_bp", summary.n_bp), ("diameter", summary.diameter))
    for name, rng in ranges:
        if rng is None:
            table.append([name, "", "", "", "0"])
        else:
            table.append([
                name,
                format_float(rng.mean),
                format_float(rng.minimum),
                format_float(rng.maximum),
                str(rng.count),
            ])
    table.append(["companies_total", "", "", "", str(summary.companies_total)])
    table.append(["companies_ok", "", "", "", str(summary.companies_ok)])
    table.append(["companies_failed", "", "", "", str(summary.companies_failed)])
    table.append(["significance", format_float(summary.significance), "", "", ""])
    return table


def _size_histogram(ok: Sequence[CompanyStats]) -> list[list[str]]:
    """Company counts per node-count bin, per partition."""
    table = [["partition", "bin_left", "bin_right", "companies"]]
    for partition in (Partition.FA, Partition.BP):
        sizes = np.array(
            [s.n_fa if partition is Partition.FA else s.n_bp for s in ok], dtype=np.float64
        )
        if sizes.size == 0:
            continue
        counts, edges = np.histogram(sizes, bins=HIST_BINS)
        for i, count in enumerate(counts):
            table.append([
                partition.value,
                format_float(float(edges[i])),
                format_float(float(edges[i + 1])),
                str(int(count)),
            ])
    return table


def _diameter_histogram(ok: Sequence[CompanyStats]) -> list[list[str]]:
    """Company count per diameter value."""
    counts: dict[int, int] = {}
    for s in ok:
        if s.diameter is not None:
            counts[s.diameter] = counts.get(s.diameter, 0) + 1
    return [["diameter", "companies"]] + [[str(d), str(n)] for d, n in sorted(counts.items())]
