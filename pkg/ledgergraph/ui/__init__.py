"""Command-line front end for ledgergraph."""

from ledgergraph.ui.app import App

__all__ = ["App"]
