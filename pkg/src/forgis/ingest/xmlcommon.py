"""Shared helpers for the XML-based geodata parsers."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from ..errors import InvalidCoordinate, MalformedDocument
from ..spatial import GeoPoint


def parse_xml_root(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise MalformedDocument(f"XML parse error at line {line}, column {col}: {exc.msg}") from exc
    except (LookupError, ValueError) as exc:
        # expat raises these for bogus encoding declarations
        raise MalformedDocument(f"XML parse error: {exc}") from exc


def local_name(tag) -> str:
    """Element tag without its namespace prefix."""
    if isinstance(tag, str):
        return tag.rsplit("}", 1)[-1]
    return ""


def coordinate_pair(lat_text: str, lon_text: str, element: str) -> GeoPoint:
    """Build a GeoPoint from raw text, naming ``element`` on failure.

    Values are validated against the raw WGS84 ranges (lat [-90, 90],
    lon [-180, 180]) before normalization: out-of-range evidence
    coordinates are rejected rather than silently wrapped.
    """
    try:
        lat = float(lat_text)
        lon = float(lon_text)
    except (TypeError, ValueError) as exc:
        raise MalformedDocument(f"<{element}> has unparsable coordinates ({lat_text!r}, {lon_text!r})") from exc
    if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
        raise InvalidCoordinate(f"<{element}> coordinates ({lat}, {lon}) out of range")
    return GeoPoint(lat, lon)
