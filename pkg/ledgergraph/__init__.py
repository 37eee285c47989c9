"""ledgergraph - financial statements network analysis for journal-entry data."""

__version__ = "0.1.0"
