"""Coordinate types, great-circle distance, slippy-map tile math, and a
uniform-grid spatial index.

Distances use the haversine formula on a sphere of radius 6,371,000 m;
the sub-0.5% error versus an ellipsoid is irrelevant for metre-scale
crime-scene radii. Tiles follow the OpenStreetMap z/x/y Web-Mercator
scheme with y increasing southward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import InvalidCoordinate, LatitudeOutOfProjection

EARTH_RADIUS_M = 6_371_000.0

# Web-Mercator latitude cutoff; atan(sinh(pi)) rounded up at the 5th decimal.
MAX_MERCATOR_LAT = 85.05113

_METERS_PER_DEG_LAT = math.pi * EARTH_RADIUS_M / 180.0


def normalize_longitude(lon: float) -> float:
    """Wrap a longitude in degrees into [-180, 180).

    Values already in range are returned untouched: the modulo round trip
    would cost precision, and parsers must keep coordinates exact.
    """
    if -180.0 <= lon < 180.0:
        return lon
    wrapped = ((lon + 180.0) % 360.0) - 180.0
    # float modulo can land exactly on 360 for tiny negative inputs
    if wrapped >= 180.0:
        wrapped -= 360.0
    return wrapped


@dataclass(frozen=True, order=True)
class GeoPoint:
    """A WGS84 position. Longitude is normalized into [-180, 180) on
    construction; latitude outside [-90, 90] is rejected."""

    lat: float
    lon: float

    def __post_init__(self):
        if not math.isfinite(self.lat) or not math.isfinite(self.lon):
            raise InvalidCoordinate(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise InvalidCoordinate(f"latitude {self.lat} outside [-90, 90]")
        object.__setattr__(self, "lon", normalize_longitude(self.lon))


@dataclass(frozen=True)
class TileCoord:
    """Slippy-map tile address: zoom, column, row."""

    z: int
    x: int
    y: int

    def __post_init__(self):
        if self.z < 0:
            raise ValueError(f"zoom {self.z} is negative")
        n = 1 << self.z
        if not (0 <= self.x < n and 0 <= self.y < n):
            raise ValueError(f"tile ({self.x}, {self.y}) outside the {n}x{n} grid at z={self.z}")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned lat/lon box. Never crosses the antimeridian; ``east``
    may be exactly +180 for boxes touching it (GeoPoint cannot hold +180,
    so edges are stored as raw degrees)."""

    south: float
    west: float
    north: float
    east: float

    def __post_init__(self):
        if self.south > self.north:
            raise InvalidCoordinate(f"south {self.south} above north {self.north}")
        if not (-90.0 <= self.south and self.north <= 90.0):
            raise InvalidCoordinate("latitude bounds outside [-90, 90]")
        if self.west > self.east:
            raise InvalidCoordinate(
                f"west {self.west} east of east {self.east}; split antimeridian boxes before construction"
            )
        if not (-180.0 <= self.west and self.east <= 180.0):
            raise InvalidCoordinate("longitude bounds outside [-180, 180]")

    def contains(self, p: GeoPoint) -> bool:
        return self.south <= p.lat <= self.north and self.west <= p.lon <= self.east

    def intersects(self, other: "BoundingBox") -> bool:
        return not (
            other.west > self.east
            or other.east < self.west
            or other.south > self.north
            or other.north < self.south
        )

    def center(self) -> GeoPoint:
        return GeoPoint((self.south + self.north) / 2.0, (self.west + self.east) / 2.0)


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters between two points.

    Symmetric, non-negative, and exactly 0.0 for identical normalized
    points; never exceeds pi * EARTH_RADIUS_M.
    """
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlambda = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlambda / 2.0) ** 2
    return EARTH_RADIUS_M * 2.0 * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def point_to_tile(p: GeoPoint, z: int) -> TileCoord:
    """Map a point to the tile containing it at zoom ``z``.

    Raises LatitudeOutOfProjection for |lat| > 85.05113 (outside the
    Web-Mercator square).
    """
    if abs(p.lat) > MAX_MERCATOR_LAT:
        raise LatitudeOutOfProjection(f"latitude {p.lat} outside Web-Mercator limit ±{MAX_MERCATOR_LAT}")
    if z < 0:
        raise ValueError(f"zoom {z} is negative")
    n = 1 << z
    x = math.floor((p.lon + 180.0) / 360.0 * n)
    phi = math.radians(p.lat)
    y = math.floor((1.0 - math.log(math.tan(phi) + 1.0 / math.cos(phi)) / math.pi) / 2.0 * n)
    # clamp edge latitudes that round just past the grid
    x = min(max(x, 0), n - 1)
    y = min(max(y, 0), n - 1)
    return TileCoord(z, x, y)


def tile_to_bbox(t: TileCoord) -> BoundingBox:
    """Geographic extent of a tile. Adjacent tiles share edges exactly
    because both evaluate the same expression for the shared edge."""
    n = 1 << t.z
    west = t.x / n * 360.0 - 180.0
    east = (t.x + 1) / n * 360.0 - 180.0
    north = math.degrees(math.atan(math.sinh(math.pi * (1.0 - 2.0 * t.y / n))))
    south = math.degrees(math.atan(math.sinh(math.pi * (1.0 - 2.0 * (t.y + 1) / n))))
    return BoundingBox(south=south, west=west, north=north, east=east)


@dataclass
class GridIndex:
    """Uniform lat/lon grid accelerating radius queries.

    Pure accelerator: a radius query prefilters grid cells covering the
    circle's bounding box (split at the antimeridian when needed) and then
    refines every candidate with an exact haversine test, so results equal
    a brute-force scan. Build with :meth:`insert`, then treat as read-only;
    concurrent queries of a built index are safe.
    """

    cell_size: float = 0.01
    _cells: dict[tuple[int, int], list[tuple[Hashable, GeoPoint]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")

    def _cell_of(self, p: GeoPoint) -> tuple[int, int]:
        return (math.floor(p.lat / self.cell_size), math.floor(p.lon / self.cell_size))

    def insert(self, item_id: Hashable, p: GeoPoint) -> None:
        self._cells.setdefault(self._cell_of(p), []).append((item_id, p))

    def extend(self, items: Iterable[tuple[Hashable, GeoPoint]]) -> None:
        for item_id, p in items:
            self.insert(item_id, p)

    def __len__(self) -> int:
        return sum(len(v) for v in self._cells.values())

    def query_radius(self, center: GeoPoint, radius_m: float) -> list:
        """All item ids within ``radius_m`` meters of ``center`` (inclusive
        boundary), sorted ascending by id."""
        if radius_m < 0:
            raise ValueError("radius must be non-negative")
        ang = radius_m / EARTH_RADIUS_M
        dlat = math.degrees(ang) + 1e-9
        lat_lo = center.lat - dlat
        lat_hi = center.lat + dlat

        full_lon = False
        if lat_lo <= -90.0 or lat_hi >= 90.0:
            full_lon = True
            lat_lo = max(lat_lo, -90.0)
            lat_hi = min(lat_hi, 90.0)
        else:
            # narrowest parallel the circle touches bounds the lon extent
            cos_min = min(math.cos(math.radians(lat_lo)), math.cos(math.radians(lat_hi)))
            sin_ang = math.sin(min(ang, math.pi / 2.0))
            if sin_ang >= cos_min:
                full_lon = True

        if full_lon:
            lon_ranges = [(-180.0, 180.0)]
        else:
            dlon = math.degrees(math.asin(min(1.0, sin_ang / cos_min))) + 1e-9
            lon_lo = center.lon - dlon
            lon_hi = center.lon + dlon
            if lon_hi - lon_lo >= 360.0:
                lon_ranges = [(-180.0, 180.0)]
            elif lon_lo < -180.0:
                lon_ranges = [(-180.0, lon_hi), (lon_lo + 360.0, 180.0)]
            elif lon_hi > 180.0:
                lon_ranges = [(lon_lo, 180.0), (-180.0, lon_hi - 360.0)]
            else:
                lon_ranges = [(lon_lo, lon_hi)]

        cs = self.cell_size
        row_lo = math.floor(lat_lo / cs)
        row_hi = math.floor(lat_hi / cs)
        col_spans = [(math.floor(lo / cs), math.floor(hi / cs)) for lo, hi in lon_ranges]

        candidate_cells = (row_hi - row_lo + 1) * sum(hi - lo + 1 for lo, hi in col_spans)
        hits = set()
        if candidate_cells <= len(self._cells):
            for col_lo, col_hi in col_spans:
                for row in range(row_lo, row_hi + 1):
                    for col in range(col_lo, col_hi + 1):
                        self._refine(self._cells.get((row, col), ()), center, radius_m, hits)
        else:
            # wide query: walking the occupied cells beats enumerating the range
            for (row, col), bucket in self._cells.items():
                if row_lo <= row <= row_hi and any(lo <= col <= hi for lo, hi in col_spans):
                    self._refine(bucket, center, radius_m, hits)
        return sorted(hits)

    @staticmethod
    def _refine(bucket, center: GeoPoint, radius_m: float, hits: set) -> None:
        for item_id, p in bucket:
            if item_id not in hits and haversine_distance(center, p) <= radius_m:
                hits.add(item_id)
