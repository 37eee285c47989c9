"""Formatting utilities."""

import math


def format_count(value: int) -> str:
    """Format a count with thousands separators."""
    return f"{value:,}"


def format_float(value: float | None) -> str:
    """Stable text form of a float for CSV output; None and NaN become empty."""
    if value is None or math.isnan(value):
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def format_duration(seconds: float) -> str:
    """Format duration as human-readable string."""
    if seconds < 60:
        return f"{seconds:.1f}s"

    whole = int(seconds)
    minutes = whole // 60
    if minutes < 60:
        secs = whole % 60
        return f"{minutes}m {secs}s"

    hours = minutes // 60
    mins = minutes % 60
    return f"{hours}h {mins}m"


def format_percent(value: float | None) -> str:
    """Format percentage value."""
    if value is None:
        return "n/a"
    return f"{value:.1f}%"
