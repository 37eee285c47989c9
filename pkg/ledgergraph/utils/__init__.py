"""Utility functions."""

from ledgergraph.utils.formatting import (
    format_count,
    format_duration,
    format_float,
    format_percent,
)

__all__ = ["format_count", "format_duration", "format_float", "format_percent"]
