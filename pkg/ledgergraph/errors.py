"""Base exception types for ledgergraph."""


class LedgerGraphError(Exception):
    """Data-level failure in any pipeline stage."""

    pass


class ConfigError(Exception):
    """Invalid option value or option combination."""

    pass
