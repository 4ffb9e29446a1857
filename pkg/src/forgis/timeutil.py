"""UTC timestamp parsing and formatting.

All evidence timestamps in the system are timezone-aware UTC instants.
Inputs without an explicit offset are rejected: ambiguous evidence time is
worse than no import.
"""

from __future__ import annotations

from datetime import datetime, timezone


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 timestamp with mandatory timezone into UTC.

    Accepts a trailing ``Z`` as well as numeric offsets. Raises ValueError
    for unparsable input or input lacking a timezone.
    """
    t = text.strip()
    if t.endswith(("Z", "z")):
        t = t[:-1] + "+00:00"
    dt = datetime.fromisoformat(t)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no timezone")
    return dt.astimezone(timezone.utc)


def iso_utc(dt: datetime) -> str:
    """Format a timezone-aware datetime as ISO-8601 UTC with a ``Z`` suffix."""
    if dt.tzinfo is None:
        raise ValueError("naive datetime cannot be formatted as evidence time")
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
