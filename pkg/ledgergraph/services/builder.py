"""Financial statements network construction."""

import logging
from collections.abc import Iterable
from decimal import Decimal

from ledgergraph.config import NODE_CAP
from ledgergraph.errors import LedgerGraphError
from ledgergraph.models import (
    BusinessProcess,
    FinancialAccount,
    FinancialStatementsNetwork,
    JournalEntry,
    Pattern,
    PatternMode,
    Side,
)

logger = logging.getLogger(__name__)


class NetworkError(LedgerGraphError):
    """Network cannot be built or loaded."""

    pass


class NodeCapExceeded(NetworkError):
    """Network larger than the configured node cap."""

    def __init__(self, n_nodes: int, cap: int) -> None:
        self.n_nodes = n_nodes
        self.cap = cap
        super().__init__(f"cap exceeded: network has {n_nodes} nodes, cap is {cap}")


def entry_pattern(entry: JournalEntry, mode: PatternMode = PatternMode.DIRECTED) -> Pattern:
    """Canonical pattern of one journal entry; amounts and line multiplicity are ignored."""
    if mode is PatternMode.UNDIRECTED:
        return Pattern(debit_accounts=tuple(entry.account_ids))
    debit = tuple(ln.account_id for ln in entry.lines if ln.side is Side.DEBIT)
    credit = tuple(ln.account_id for ln in entry.lines if ln.side is Side.CREDIT)
    return Pattern(debit_accounts=debit, credit_accounts=credit)


def build_network(
    entries: Iterable[JournalEntry],
    node_cap: int | None = NODE_CAP,
    mode: PatternMode = PatternMode.DIRECTED,
) -> FinancialStatementsNetwork:
    """Convert one company's journal entries into its financial statements network.

    One FA node per account, one BP node per distinct pattern, an edge between a pattern
    and each account it contains. ``node_cap=None`` disables the size check.
    """
    company_id: str | None = None
    pattern_counts: dict[Pattern, int] = {}
    # (pattern, account) -> flowed amount
    flows: dict[tuple[Pattern, str], Decimal] = {}
    names: dict[str, str] = {}
    entry_count = 0
    unbalanced = 0

    for entry in entries:
        if company_id is None:
            company_id = entry.company_id
        elif entry.company_id != company_id:
            raise NetworkError(
                f"entries belong to several companies ({company_id!r}, {entry.company_id!r})"
            )

        pattern = entry_pattern(entry, mode)
        pattern_counts[pattern] = pattern_counts.get(pattern, 0) + 1
        for ln in entry.lines:
            key = (pattern, ln.account_id)
            flows[key] = flows.get(key, Decimal(0)) + ln.amount
            if ln.account_name and ln.account_id not in names:
                names[ln.account_id] = ln.account_name
        entry_count += 1
        if not entry.balanced:
            unbalanced += 1

    if company_id is None:
        raise NetworkError("empty network")

    accounts = sorted({account for _, account in flows})
    patterns = sorted(pattern_counts)
    n_nodes = len(accounts) + len(patterns)
    if node_cap is not None and n_nodes > node_cap:
        logger.warning("company %s refused: %d nodes over cap %d", company_id, n_nodes, node_cap)
        raise NodeCapExceeded(n_nodes, node_cap)

    fa_index = {account: i for i, account in enumerate(accounts)}
    bp_index = {pattern: i for i, pattern in enumerate(patterns)}
    edge_flows = sorted(
        ((bp_index[pattern], fa_index[account]), amount)
        for (pattern, account), amount in flows.items()
    )

    network = FinancialStatementsNetwork(
        company_id=company_id,
        fa_nodes=tuple(FinancialAccount(a, names.get(a)) for a in accounts),
        bp_nodes=tuple(BusinessProcess(p, pattern_counts[p]) for p in patterns),
        edges=tuple(edge for edge, _ in edge_flows),
        edge_amounts=tuple(amount for _, amount in edge_flows),
        entry_count=entry_count,
        unbalanced_count=unbalanced,
        pattern_mode=mode,
    )
    logger.info(
        "built network for %s: %d FA, %d BP, %d edges from %d entries",
        company_id, network.n_fa, network.n_bp, len(network.edges), entry_count,
    )
    return network
