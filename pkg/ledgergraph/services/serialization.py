"""Network JSON codec (schema fsn/1)."""

import json
import logging
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any

from ledgergraph.config import SCHEMA_VERSION
from ledgergraph.models import (
    BusinessProcess,
    FinancialAccount,
    FinancialStatementsNetwork,
    Pattern,
    PatternMode,
)
from ledgergraph.services.builder import NetworkError

logger = logging.getLogger(__name__)


class NetworkFormatError(NetworkError):
    """Network JSON does not satisfy the schema or the bipartite invariants."""

    pass


def network_to_json(net: FinancialStatementsNetwork) -> bytes:
    """Serialise a network; output bytes depend only on the network."""
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "company": net.company_id,
        "pattern_mode": net.pattern_mode.value,
        "entries": {"total": net.entry_count, "unbalanced": net.unbalanced_count},
        "fa": [_fa_to_dict(fa) for fa in net.fa_nodes],
        "bp": [
            {
                "pattern": {
                    "debit": list(bp.pattern.debit_accounts),
                    "credit": list(bp.pattern.credit_accounts),
                },
                "count": bp.count,
            }
            for bp in net.bp_nodes
        ],
        "edges": [[b, f] for b, f in net.edges],
    }
    if net.edge_amounts:
        doc["edge_amounts"] = [str(a) for a in net.edge_amounts]
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def network_from_json(data: bytes) -> FinancialStatementsNetwork:
    """Load and validate a network, returning it in canonical node order."""
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise NetworkFormatError(f"not a network JSON document: {e}") from e
    if not isinstance(doc, dict):
        raise NetworkFormatError("network JSON must be an object")

    schema = doc.get("schema")
    if schema != SCHEMA_VERSION:
        raise NetworkFormatError(
            f"schema version mismatch: expected {SCHEMA_VERSION}, got {schema!r}"
        )

    try:
        fa_nodes = [FinancialAccount(str(item["id"]), item.get("name")) for item in doc["fa"]]
        bp_nodes = [
            BusinessProcess(
                Pattern(
                    debit_accounts=tuple(str(a) for a in item["pattern"].get("debit", [])),
                    credit_accounts=tuple(str(a) for a in item["pattern"].get("credit", [])),
                ),
                int(item.get("count", 1)),
            )
            for item in doc["bp"]
        ]
        raw_edges = doc.get("edges", [])
        pattern_mode = PatternMode(doc.get("pattern_mode", PatternMode.DIRECTED.value))
        entries = doc.get("entries", {})
        amounts = [Decimal(str(a)) for a in doc.get("edge_amounts", [])]
    except (KeyError, TypeError, ValueError, AttributeError, InvalidOperation) as e:
        raise NetworkFormatError(f"malformed network JSON: {e}") from e

    if len({fa.account_id for fa in fa_nodes}) != len(fa_nodes):
        raise NetworkFormatError("duplicate financial account ids")
    if len({bp.pattern for bp in bp_nodes}) != len(bp_nodes):
        raise NetworkFormatError("duplicate business process patterns")
    if any(bp.count < 1 for bp in bp_nodes):
        raise NetworkFormatError("business process counts must be >= 1")

    edges = [_parse_edge(e, len(bp_nodes), len(fa_nodes)) for e in raw_edges]
    if amounts and len(amounts) != len(edges):
        raise NetworkFormatError("edge_amounts must align with edges")

    # canonical order: FA by id, BP by pattern
    fa_order = sorted(range(len(fa_nodes)), key=lambda i: fa_nodes[i].account_id)
    bp_order = sorted(range(len(bp_nodes)), key=lambda i: bp_nodes[i].pattern)
    fa_map = {old: new for new, old in enumerate(fa_order)}
    bp_map = {old: new for new, old in enumerate(bp_order)}

    merged: dict[tuple[int, int], Decimal] = {}
    for i, (b, f) in enumerate(edges):
        key = (bp_map[b], fa_map[f])
        if key in merged:
            logger.warning("duplicate edge (%d, %d) dropped", b, f)
            continue
        merged[key] = amounts[i] if amounts else Decimal(0)
    ordered = sorted(merged.items())

    return FinancialStatementsNetwork(
        company_id=str(doc.get("company", "")),
        fa_nodes=tuple(fa_nodes[i] for i in fa_order),
        bp_nodes=tuple(bp_nodes[i] for i in bp_order),
        edges=tuple(edge for edge, _ in ordered),
        edge_amounts=tuple(amount for _, amount in ordered) if amounts else (),
        entry_count=int(entries.get("total", sum(bp.count for bp in bp_nodes))),
        unbalanced_count=int(entries.get("unbalanced", 0)),
        pattern_mode=pattern_mode,
    )


def save_network(net: FinancialStatementsNetwork, path: Path) -> None:
    """Write a network JSON file."""
    path.write_bytes(network_to_json(net))


def load_network(path: Path) -> FinancialStatementsNetwork:
    """Read a network JSON file."""
    return network_from_json(path.read_bytes())


def _fa_to_dict(fa: FinancialAccount) -> dict[str, str]:
    """FA node entry; name only when known."""
    item = {"id": fa.account_id}
    if fa.name:
        item["name"] = fa.name
    return item


def _parse_edge(edge: Any, n_bp: int, n_fa: int) -> tuple[int, int]:
    """Validate one edge.

    Endpoints are either plain indices ([bp_idx, fa_idx]) or tagged refs such as "bp:0" / "fa:3"
    in any order. Two endpoints in the same partition violate bipartiteness.
    """
    if not isinstance(edge, list) or len(edge) != 2:
        raise NetworkFormatError(f"edge must be a two-element list, got {edge!r}")

    if all(isinstance(x, int) and not isinstance(x, bool) for x in edge):
        b, f = edge
    else:
        refs = [_parse_ref(x) for x in edge]
        kinds = {kind for kind, _ in refs}
        if kinds != {"bp", "fa"}:
            raise NetworkFormatError(
                f"bipartiteness violation: edge {edge!r} joins two {refs[0][0]} nodes"
            )
        b = next(i for kind, i in refs if kind == "bp")
        f = next(i for kind, i in refs if kind == "fa")

    if not 0 <= b < n_bp:
        raise NetworkFormatError(f"edge {edge!r}: business process index {b} out of range")
    if not 0 <= f < n_fa:
        raise NetworkFormatError(f"edge {edge!r}: financial account index {f} out of range")
    return b, f


def _parse_ref(ref: Any) -> tuple[str, int]:
    """Parse a tagged node reference like 'fa:3'."""
    if not isinstance(ref, str) or ":" not in ref:
        raise NetworkFormatError(f"edge endpoint must be an index or 'bp:N'/'fa:N', got {ref!r}")
    kind, _, index = ref.partition(":")
    kind = kind.strip().lower()
    if kind not in ("bp", "fa"):
        raise NetworkFormatError(f"unknown partition tag {kind!r} in edge endpoint {ref!r}")
    try:
        return kind, int(index)
    except ValueError as e:
        raise NetworkFormatError(f"bad node index in edge endpoint {ref!r}") from e
