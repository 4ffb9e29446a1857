"""Normalized geometry model shared by every ingest format."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Union

from ..spatial import GeoPoint

SOURCE_FORMATS = ("GPX", "KML", "GML", "GeoJSON", "CSV")


@dataclass(frozen=True)
class PointGeometry:
    point: GeoPoint


@dataclass(frozen=True)
class LineStringGeometry:
    points: tuple[GeoPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("LineString needs at least 2 points")


Geometry = Union[PointGeometry, LineStringGeometry]


@dataclass
class Feature:
    """One displayable map feature: a point or a line, with free-form
    string properties and an optional UTC timestamp."""

    geometry: Geometry
    properties: dict[str, str] = field(default_factory=dict)
    timestamp: datetime | None = None


@dataclass
class Provenance:
    """Where a FeatureSet came from; always populated on import.

    ``content_sha256`` is the hash of the raw imported bytes, recorded so
    evidence can be tied back to the original file. ``skipped_count``
    counts features dropped as unsupported (e.g. polygons in open
    geodata), preserving auditability of partial imports.
    """

    source_name: str
    source_format: str
    import_time: datetime
    content_sha256: str | None = None
    skipped_count: int = 0

    def __post_init__(self):
        if self.source_format not in SOURCE_FORMATS:
            raise ValueError(f"unknown source format {self.source_format!r}")


@dataclass
class FeatureSet:
    """An ordered feature collection plus its provenance; the unit of
    import, storage, and display. Feature order preserves source order."""

    features: list[Feature]
    provenance: Provenance


def make_provenance(source_name: str, source_format: str, data: bytes, skipped: int = 0) -> Provenance:
    return Provenance(
        source_name=source_name,
        source_format=source_format,
        import_time=datetime.now(timezone.utc),
        content_sha256=hashlib.sha256(data).hexdigest(),
        skipped_count=skipped,
    )
