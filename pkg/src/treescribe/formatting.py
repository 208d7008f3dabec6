"""Locale-independent value formatting shared by node ids and token text."""

from __future__ import annotations

from datetime import datetime
from typing import Any

# Fixed English month names; strftime %b would follow the process locale.
MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun",
          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]


def format_number(value: float) -> str:
    """Render with at most 2 decimal places, trailing zeros trimmed."""
    text = f"{value:.2f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text == "-0":
        text = "0"
    return text


def format_datetime(dt: datetime, granularity: str | None = None) -> str:
    """Render "Jan 1 2010" style, widened only as far as the value needs.

    `granularity` (a bin-step unit like "year" or "hour") collapses bin-edge
    labels: year-aligned edges read "2000", month-aligned "Jan 2000".
    """
    if granularity == "year":
        return str(dt.year)
    if granularity == "month":
        return f"{MONTHS[dt.month - 1]} {dt.year}"
    base = f"{MONTHS[dt.month - 1]} {dt.day} {dt.year}"
    if granularity == "day":
        return base
    if granularity in ("hour", "minute") or (
        granularity is None and (dt.hour or dt.minute) and not dt.second
    ):
        return f"{base} {dt.hour:02d}:{dt.minute:02d}"
    if granularity == "second" or dt.second:
        return f"{base} {dt.hour:02d}:{dt.minute:02d}:{dt.second:02d}"
    return base


def format_value(value: Any, granularity: str | None = None) -> str:
    if isinstance(value, datetime):
        return format_datetime(value, granularity)
    if isinstance(value, float) or isinstance(value, int):
        return format_number(float(value))
    return str(value)


def id_label(value: Any) -> str:
    """Compact stable label for node ids."""
    if isinstance(value, datetime):
        return dt_id(value)
    if isinstance(value, (int, float)):
        return format_number(float(value))
    return str(value)


def dt_id(dt: datetime) -> str:
    if dt.hour or dt.minute or dt.second:
        return dt.strftime("%Y-%m-%dT%H:%M:%S")
    return dt.strftime("%Y-%m-%d")
