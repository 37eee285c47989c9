"""Command-line application."""

import argparse
import csv
import json
import logging
import sys
import time
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

from ledgergraph import __version__
from ledgergraph.config import INDUSTRY_LABELS, MIN_TAIL, NODE_CAP, SIGNIFICANCE, TOP_K
from ledgergraph.errors import ConfigError, LedgerGraphError
from ledgergraph.models import (
    BetweennessMode,
    CentralityReport,
    GlobalConfig,
    IngestConfig,
    Measure,
    NormalizationMode,
    OutputFormat,
    Partition,
    PatternMode,
    Side,
    SynthConfig,
)
from ledgergraph.models.options import resolve_workers
from ledgergraph.services import (
    BipartiteAdjacency,
    NodeCapExceeded,
    build_network,
    compute_centrality,
    distribution_curves,
    generate_cohort,
    likelihood_ratio_test,
    list_datasets,
    load_network,
    read_industry_map,
    read_journal_file,
    run_cohort,
    save_network,
    summarize_cohort,
    summarize_network,
    top_nodes,
    write_cohort_report,
)
from ledgergraph.ui.console import configure_logging
from ledgergraph.ui.theme import Theme
from ledgergraph.utils import format_count, format_duration, format_float, format_percent

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(ConfigError):
    """Bad command line."""

    pass


class ArgumentParser(argparse.ArgumentParser):
    """Parser that raises instead of exiting on bad arguments."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


class App:
    """ledgergraph command-line front end."""

    def __init__(self, stdout: TextIO | None = None) -> None:
        self.stdout = stdout if stdout is not None else sys.stdout
        self.theme: Theme | None = None
        self.parser = self._build_parser()

    def run(self, argv: Sequence[str]) -> int:
        """Run one subcommand. Returns exit code."""
        try:
            args = self.parser.parse_args(list(argv))
        except UsageError as e:
            self._report(str(e))
            return EXIT_USAGE
        except SystemExit as e:
            # --help and --version
            return e.code if isinstance(e.code, int) else EXIT_OK

        self.theme = configure_logging(args.verbose - args.quiet)
        handler: Callable[[argparse.Namespace, GlobalConfig], None] = args.handler
        started = time.monotonic()
        try:
            config = self._global_config(args)
            handler(args, config)
        except ConfigError as e:
            self._report(str(e))
            return EXIT_USAGE
        except (LedgerGraphError, OSError) as e:
            self._report(str(e))
            return EXIT_DATA
        except KeyboardInterrupt:
            return 130
        logger.debug("%s finished in %s", args.command, format_duration(time.monotonic() - started))
        return EXIT_OK

    def _report(self, message: str) -> None:
        """Print an error line to stderr."""
        label = self.theme.error("Error:") if self.theme else "Error:"
        print(f"{label} {message}", file=sys.stderr)

    # -- parser ---------------------------------------------------------------

    def _build_parser(self) -> ArgumentParser:
        common = ArgumentParser(add_help=False)
        group = common.add_argument_group("global options")
        group.add_argument(
            "--workers", type=int, default=None,
            help="worker processes (default: $LEDGERGRAPH_WORKERS or 1)",
        )
        group.add_argument(
            "--node-cap", type=int, default=NODE_CAP,
            help=f"refuse networks with more nodes (default: {NODE_CAP})",
        )
        group.add_argument("--no-cap", action="store_true", help="disable the node cap")
        group.add_argument(
            "--significance", type=float, default=SIGNIFICANCE,
            help="p-value below which a likelihood-ratio test is reliable "
            f"(default: {SIGNIFICANCE})",
        )
        group.add_argument(
            "--normalization", choices=[m.value for m in NormalizationMode],
            default=NormalizationMode.OWN_PARTITION.value,
            help="betweenness normalising constant assignment (default: own-partition)",
        )
        group.add_argument(
            "--betweenness", choices=[m.value for m in BetweennessMode],
            default=BetweennessMode.GEODESIC_FRACTION.value,
            help="betweenness pair term (default: geodesic-fraction)",
        )
        group.add_argument(
            "--format", dest="output_format", choices=[f.value for f in OutputFormat],
            default=OutputFormat.CSV.value, help="machine-readable output format (default: csv)",
        )
        group.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics")
        group.add_argument("-q", "--quiet", action="count", default=0, help="warnings only")

        parser = ArgumentParser(
            prog="ledgergraph",
            description="Financial statements network analysis of journal entries.",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

        build = sub.add_parser("build", parents=[common], help="build a network from a journal CSV")
        build.add_argument("--input", type=Path, required=True, help="journal CSV file")
        build.add_argument("--output", type=Path, required=True, help="network JSON file to write")
        self._add_ingest_options(build)
        build.add_argument(
            "--pattern-mode", choices=[m.value for m in PatternMode],
            default=PatternMode.DIRECTED.value,
            help="keep debit and credit sets apart (directed) or merge them (default: directed)",
        )
        build.set_defaults(handler=self._cmd_build)

        stats = sub.add_parser("stats", parents=[common], help="network size and connectivity")
        self._add_network_input(stats)
        stats.set_defaults(handler=self._cmd_stats)

        centrality = sub.add_parser(
            "centrality", parents=[common], help="bipartite-normalised centrality scores"
        )
        self._add_network_input(centrality)
        centrality.add_argument(
            "--measure", choices=[m.value for m in Measure],
            default=Measure.BETWEENNESS.value, help="centrality measure (default: betweenness)",
        )
        centrality.add_argument(
            "--top", type=int, default=None, metavar="K",
            help=f"only the K best nodes (csv); size of the top list (json, default {TOP_K})",
        )
        centrality.set_defaults(handler=self._cmd_centrality)

        fit = sub.add_parser("fit", parents=[common], help="power law vs exponential degree test")
        self._add_network_input(fit)
        self._add_fit_options(fit)
        fit.add_argument("--x-min", type=int, default=None, help="force the lower cutoff")
        fit.set_defaults(handler=self._cmd_fit)

        plotdata = sub.add_parser(
            "plotdata", parents=[common], help="pdf/cdf/ccdf tables of the fitted degree tail"
        )
        self._add_network_input(plotdata)
        self._add_fit_options(plotdata)
        plotdata.set_defaults(handler=self._cmd_plotdata)

        cohort = sub.add_parser("cohort", parents=[common], help="analyse a directory of companies")
        cohort.add_argument("--dir", type=Path, required=True, help="directory of journal CSVs")
        cohort.add_argument(
            "--industry-map", type=Path, default=None,
            help="company_id,industry_code CSV (default: DIR/industry_map.csv when present)",
        )
        cohort.add_argument("--out", type=Path, required=True, help="report directory")
        cohort.add_argument(
            "--min-tail", type=int, default=MIN_TAIL,
            help=f"minimum tail size for fits (default: {MIN_TAIL})",
        )
        self._add_ingest_options(cohort)
        cohort.set_defaults(handler=self._cmd_cohort)

        synth = sub.add_parser("synth", parents=[common], help="write a synthetic cohort")
        defaults = SynthConfig()
        synth.add_argument("--seed", type=int, default=defaults.seed, help="base seed (default: 0)")
        synth.add_argument("--companies", type=int, default=1, help="number of companies")
        synth.add_argument(
            "--accounts", type=int, default=defaults.n_accounts,
            help=f"ledger accounts per company (default: {defaults.n_accounts})",
        )
        synth.add_argument(
            "--entries", type=int, default=defaults.n_entries,
            help=f"journal entries of the largest company (default: {defaults.n_entries})",
        )
        synth.add_argument(
            "--min-entries", type=int, default=None,
            help="journal entries of the smallest company; sizes spread log-uniformly "
            "(default: same as --entries)",
        )
        synth.add_argument(
            "--bias", type=float, default=defaults.attachment_bias,
            help=f"preferential attachment exponent (default: {defaults.attachment_bias})",
        )
        synth.add_argument(
            "--mutation-rate", type=float, default=defaults.pattern_mutation_rate,
            help=f"chance of a new pattern per entry (default: {defaults.pattern_mutation_rate})",
        )
        synth.add_argument(
            "--novel-rate", type=float, default=defaults.novel_pattern_rate,
            help="share of new patterns drawn from scratch instead of varying an existing one "
            f"(default: {defaults.novel_pattern_rate})",
        )
        synth.add_argument(
            "--open-rate", type=float, default=defaults.account_open_rate,
            help="chance an account draw opens a new account "
            f"(default: {defaults.account_open_rate})",
        )
        synth.add_argument(
            "--accounts-per-entry", type=_int_range, default=defaults.accounts_per_entry,
            metavar="LO..HI", help="accounts per journal entry (default: 2..4)",
        )
        synth.add_argument(
            "--industries", type=_label_list, default=INDUSTRY_LABELS, metavar="A,B,...",
            help=f"industry labels assigned round-robin (default: {','.join(INDUSTRY_LABELS)})",
        )
        synth.add_argument("--out", type=Path, required=True, help="output directory")
        synth.set_defaults(handler=self._cmd_synth)
        return parser

    @staticmethod
    def _add_network_input(parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "network", type=Path, help="network JSON (or a journal CSV, built on the fly)"
        )
        parser.add_argument(
            "--output", type=Path, default=None, help="write data here instead of stdout"
        )

    @staticmethod
    def _add_fit_options(parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--nodes", choices=[p.value for p in Partition], default=Partition.FA.value,
            help="degree sequence to fit (default: fa)",
        )
        parser.add_argument(
            "--min-tail", type=int, default=MIN_TAIL,
            help=f"minimum tail size (default: {MIN_TAIL})",
        )

    @staticmethod
    def _add_ingest_options(parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--column-map", "--column", dest="column_map", action="append", default=[],
            type=_key_value, metavar="FIELD=HEADER",
            help="map a logical field (entry_id, date, account_id, ...) to a CSV header",
        )
        parser.add_argument(
            "--side-alias", action="append", default=[], type=_key_value, metavar="TOKEN=D|C",
            help="accept an extra side token, e.g. debit=D",
        )
        parser.add_argument(
            "--company-id", default=None, help="company id when the file has no company column"
        )
        parser.add_argument("--delimiter", default=",", help="CSV delimiter (default: ',')")

    # -- configuration --------------------------------------------------------

    @staticmethod
    def _global_config(args: argparse.Namespace) -> GlobalConfig:
        return GlobalConfig(
            node_cap=None if args.no_cap else args.node_cap,
            significance=args.significance,
            normalization=NormalizationMode(args.normalization),
            betweenness=BetweennessMode(args.betweenness),
            workers=resolve_workers(args.workers),
            output_format=OutputFormat(args.output_format),
        ).validate()

    @staticmethod
    def _ingest_config(args: argparse.Namespace) -> IngestConfig:
        aliases: dict[str, Side] = {}
        for token, side in args.side_alias:
            try:
                aliases[token] = Side(side.upper())
            except ValueError as e:
                raise ConfigError(f"side alias {token!r} must map to D or C, got {side!r}") from e
        config = IngestConfig(
            side_aliases=aliases,
            default_company_id=args.company_id,
            delimiter=args.delimiter,
        )
        return config.with_columns(dict(args.column_map))

    def _load_graph(self, args: argparse.Namespace, config: GlobalConfig) -> BipartiteAdjacency:
        """Network JSON, or a journal CSV built with default ingest options."""
        path: Path = args.network
        if path.suffix.lower() == ".csv":
            result = read_journal_file(path)
            network = build_network(result.entries, config.node_cap)
        else:
            network = load_network(path)
            if config.node_cap is not None and network.n_nodes > config.node_cap:
                raise NodeCapExceeded(network.n_nodes, config.node_cap)
        return BipartiteAdjacency.from_network(network)

    # -- subcommands ----------------------------------------------------------

    def _cmd_build(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        result = read_journal_file(args.input, self._ingest_config(args))
        network = build_network(result.entries, config.node_cap, PatternMode(args.pattern_mode))
        save_network(network, args.output)
        logger.info(
            "wrote %s: %s FA, %s BP, %s edges from %s entries",
            args.output,
            format_count(network.n_fa),
            format_count(network.n_bp),
            format_count(len(network.edges)),
            format_count(network.entry_count),
        )

    def _cmd_stats(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        graph = self._load_graph(args, config)
        summary = summarize_network(graph, config.workers).to_dict()
        if config.output_format is OutputFormat.JSON:
            self._emit_json(args.output, summary)
        else:
            rows = [[key, _cell(value)] for key, value in summary.items()]
            self._emit_csv(args.output, ["metric", "value"], rows)

    def _cmd_centrality(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        graph = self._load_graph(args, config)
        report = compute_centrality(
            graph, Measure(args.measure), config.normalization, config.betweenness, config.workers
        )
        if args.top is not None and args.top < 0:
            raise ConfigError(f"--top must be >= 0, got {args.top}")

        if config.output_format is OutputFormat.JSON:
            k = TOP_K if args.top is None else args.top
            self._emit_json(args.output, _report_document(report, k))
            return

        if args.top is None:
            nodes = list(range(report.n_nodes))
        else:
            nodes = [ranked.node for ranked in top_nodes(report, args.top)]
        rows = [
            [
                str(node),
                report.partition_of(node).value,
                format_float(float(report.raw[node])),
                format_float(float(report.normalized[node])),
                report.labels[node],
            ]
            for node in nodes
        ]
        self._emit_csv(args.output, ["node_id", "partition", "raw", "normalized", "label"], rows)

    def _cmd_fit(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        graph = self._load_graph(args, config)
        sequence = graph.degree_sequence(Partition(args.nodes))
        result = likelihood_ratio_test(sequence, config.significance, args.min_tail, args.x_min)
        logger.info(
            "%s degrees: %s (R=%.4g, p=%.4g)", args.nodes, result.verdict.display_name,
            result.log_likelihood_ratio, result.p_value,
        )
        doc = result.to_dict()
        if config.output_format is OutputFormat.JSON:
            self._emit_json(args.output, doc)
        else:
            self._emit_csv(args.output, list(doc), [[_cell(v) for v in doc.values()]])

    def _cmd_plotdata(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        graph = self._load_graph(args, config)
        sequence = graph.degree_sequence(Partition(args.nodes))
        result = likelihood_ratio_test(sequence, config.significance, args.min_tail)
        curves = distribution_curves(sequence, result)
        columns = [
            "x", "empirical_pdf", "empirical_cdf", "empirical_ccdf",
            "pl_pdf", "pl_cdf", "pl_ccdf", "exp_pdf", "exp_cdf", "exp_ccdf",
        ]
        if config.output_format is OutputFormat.JSON:
            self._emit_json(
                args.output,
                {
                    "fit": result.to_dict(),
                    "rows": [{c: getattr(r, c) for c in columns} for r in curves],
                },
            )
        else:
            rows = [
                [str(r.x)] + [format_float(getattr(r, c)) for c in columns[1:]] for r in curves
            ]
            self._emit_csv(args.output, columns, rows)

    def _cmd_cohort(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        paths = list_datasets(args.dir)
        map_path: Path | None = args.industry_map
        if map_path is None and (args.dir / "industry_map.csv").is_file():
            map_path = args.dir / "industry_map.csv"
        industries = read_industry_map(map_path) if map_path else {}

        stats = run_cohort(paths, config, industries, self._ingest_config(args), args.min_tail)
        summary = summarize_cohort(stats, industries, config.significance)
        write_cohort_report(stats, summary, args.out, industries)
        logger.info(
            "%d of %d companies analysed; power law preferred in %s (fa) and %s (bp) of "
            "reliable tests; report in %s",
            summary.companies_ok,
            summary.companies_total,
            format_percent(summary.fa_share.percentage),
            format_percent(summary.bp_share.percentage),
            args.out,
        )

    def _cmd_synth(self, args: argparse.Namespace, config: GlobalConfig) -> None:
        base = SynthConfig(
            seed=args.seed,
            n_accounts=args.accounts,
            n_entries=args.entries,
            attachment_bias=args.bias,
            pattern_mutation_rate=args.mutation_rate,
            novel_pattern_rate=args.novel_rate,
            account_open_rate=args.open_rate,
            accounts_per_entry=args.accounts_per_entry,
        )
        low = args.min_entries if args.min_entries is not None else args.entries
        generate_cohort(base, args.companies, args.out, args.industries, (low, args.entries))

    # -- output ---------------------------------------------------------------

    def _emit_csv(self, target: Path | None, header: list[str], rows: list[list[str]]) -> None:
        def write(stream: TextIO) -> None:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

        self._emit(target, write)

    def _emit_json(self, target: Path | None, doc: Any) -> None:
        def write(stream: TextIO) -> None:
            stream.write(json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False))
            stream.write("\n")

        self._emit(target, write)

    def _emit(self, target: Path | None, write: Callable[[TextIO], None]) -> None:
        if target is None:
            write(self.stdout)
            self.stdout.flush()
            return
        with target.open("w", encoding="utf-8", newline="") as f:
            write(f)


def _report_document(report: CentralityReport, k: int) -> dict[str, Any]:
    """JSON form of a centrality report with its top list."""

    def node_doc(node: int) -> dict[str, Any]:
        return {
            "node_id": node,
            "partition": report.partition_of(node).value,
            "label": report.labels[node],
            "name": report.names[node],
            "raw": float(report.raw[node]),
            "normalized": float(report.normalized[node]),
        }

    return {
        "measure": report.measure.value,
        "meaning": report.measure.display_name,
        "policy": report.policy,
        "constants": report.constants,
        "nodes": [node_doc(i) for i in range(report.n_nodes)],
        "top": [node_doc(ranked.node) for ranked in top_nodes(report, k)],
    }


def _cell(value: object) -> str:
    """CSV text of a scalar."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip() or not value.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def _int_range(text: str) -> tuple[int, int]:
    low, sep, high = text.partition("..")
    try:
        if not sep:
            return int(text), int(text)
        return int(low), int(high)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from e


def _label_list(text: str) -> tuple[str, ...]:
    labels = tuple(label.strip() for label in text.split(",") if label.strip())
    if not labels:
        raise argparse.ArgumentTypeError("at least one label is required")
    return labels
