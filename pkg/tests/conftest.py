"""Shared fixtures: the 12-entry journal and small hand-built bipartite graphs."""

import logging
from pathlib import Path

import pytest

from ledgergraph.models import FinancialStatementsNetwork
from ledgergraph.services.builder import build_network
from ledgergraph.services.graph import BipartiteAdjacency
from ledgergraph.services.ingest import IngestResult, read_journal_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _reset_package_logger() -> None:
    """CLI runs install a handler and level on the package logger; start each test clean."""
    logger = logging.getLogger("ledgergraph")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def journal_12_path() -> Path:
    return FIXTURES / "journal_12.csv"


@pytest.fixture
def journal_12(journal_12_path: Path) -> IngestResult:
    return read_journal_file(journal_12_path)


@pytest.fixture
def network_12(journal_12: IngestResult) -> FinancialStatementsNetwork:
    return build_network(journal_12.entries)


@pytest.fixture
def path_graph() -> BipartiteAdjacency:
    """U1 - V1 - U2."""
    return BipartiteAdjacency.from_edges(2, 1, [(0, 0), (1, 0)])


@pytest.fixture
def four_cycle() -> BipartiteAdjacency:
    """U1 - V1 - U2 - V2 - U1."""
    return BipartiteAdjacency.from_edges(2, 2, [(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def star_graph() -> BipartiteAdjacency:
    """One business process joined to five accounts."""
    return BipartiteAdjacency.from_edges(1, 5, [(0, f) for f in range(5)])
