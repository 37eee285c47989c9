"""Tests for the fsn/1 network JSON codec."""

import json
from decimal import Decimal
from pathlib import Path
from typing import Any

import pytest

from ledgergraph.models import FinancialStatementsNetwork
from ledgergraph.services.graph import BipartiteAdjacency, GraphError, diameter
from ledgergraph.services.serialization import (
    NetworkFormatError,
    load_network,
    network_from_json,
    network_to_json,
    save_network,
)


def _make_doc(**overrides: Any) -> bytes:
    doc: dict[str, Any] = {
        "schema": "fsn/1",
        "company": "C1",
        "fa": [{"id": "A"}, {"id": "B"}],
        "bp": [{"pattern": {"debit": ["A"], "credit": ["B"]}, "count": 1}],
        "edges": [[0, 0], [0, 1]],
    }
    doc.update(overrides)
    return json.dumps(doc).encode("utf-8")


def test_round_trip_is_byte_identical(network_12: FinancialStatementsNetwork) -> None:
    data = network_to_json(network_12)
    again = network_from_json(data)

    assert again == network_12
    assert network_to_json(again) == data


def test_file_round_trip(network_12: FinancialStatementsNetwork, tmp_path: Path) -> None:
    path = tmp_path / "net.json"
    save_network(network_12, path)

    assert load_network(path) == network_12


def test_document_layout(network_12: FinancialStatementsNetwork) -> None:
    doc = json.loads(network_to_json(network_12))

    assert doc["schema"] == "fsn/1"
    assert doc["company"] == "ACME"
    assert doc["entries"] == {"total": 12, "unbalanced": 0}
    assert [fa["id"] for fa in doc["fa"]] == ["1100", "1300", "1500", "1600", "8000"]
    assert len(doc["bp"]) == 3
    assert len(doc["edges"]) == len(doc["edge_amounts"]) == 7


def test_minimal_document_loads() -> None:
    net = network_from_json(_make_doc())

    assert net.n_fa == 2
    assert net.n_bp == 1
    assert net.edges == ((0, 0), (0, 1))
    assert net.edge_amounts == ()


def test_schema_mismatch() -> None:
    with pytest.raises(NetworkFormatError, match="schema version mismatch"):
        network_from_json(_make_doc(schema="fsn/2"))


def test_same_partition_edge_is_a_bipartiteness_violation() -> None:
    with pytest.raises(NetworkFormatError, match="bipartiteness violation"):
        network_from_json(_make_doc(edges=[["fa:0", "fa:1"]]))


def test_tagged_edges_in_any_order() -> None:
    net = network_from_json(_make_doc(edges=[["fa:1", "bp:0"], ["bp:0", "fa:0"]]))

    assert net.edges == ((0, 0), (0, 1))


@pytest.mark.parametrize(
    "edges",
    [[[0, 2]], [[1, 0]], [[0]], [["xx:0", "fa:0"]], [["bp:zero", "fa:0"]]],
)
def test_invalid_edges(edges: list[list[Any]]) -> None:
    with pytest.raises(NetworkFormatError):
        network_from_json(_make_doc(edges=edges))


def test_duplicate_edges_are_dropped(caplog: pytest.LogCaptureFixture) -> None:
    net = network_from_json(_make_doc(edges=[[0, 0], [0, 1], [0, 0]]))

    assert net.edges == ((0, 0), (0, 1))
    assert "duplicate edge" in caplog.text


def test_duplicate_nodes_are_rejected() -> None:
    with pytest.raises(NetworkFormatError, match="duplicate financial account"):
        network_from_json(_make_doc(fa=[{"id": "A"}, {"id": "A"}]))


def test_not_json() -> None:
    with pytest.raises(NetworkFormatError, match="not a network JSON"):
        network_from_json(b"{nope")


def test_loading_canonicalises_node_order() -> None:
    data = _make_doc(
        fa=[{"id": "B"}, {"id": "A"}],
        bp=[
            {"pattern": {"debit": ["B"], "credit": []}, "count": 1},
            {"pattern": {"debit": ["A"], "credit": []}, "count": 2},
        ],
        edges=[[0, 0], [1, 1]],
        edge_amounts=["5", "7.50"],
    )
    net = network_from_json(data)

    assert [fa.account_id for fa in net.fa_nodes] == ["A", "B"]
    assert [bp.pattern.debit_accounts for bp in net.bp_nodes] == [("A",), ("B",)]
    assert net.edges == ((0, 0), (1, 1))
    assert net.edge_amounts == (Decimal("7.50"), Decimal("5"))


def test_edgeless_network_loads_but_has_no_diameter() -> None:
    net = network_from_json(
        _make_doc(fa=[{"id": "A"}], bp=[{"pattern": {"debit": ["A"]}, "count": 1}], edges=[])
    )
    graph = BipartiteAdjacency.from_network(net)

    assert graph.n_edges == 0
    with pytest.raises(GraphError, match="diameter undefined"):
        diameter(graph)
