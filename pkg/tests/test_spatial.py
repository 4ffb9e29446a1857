from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forgis.errors import InvalidCoordinate, LatitudeOutOfProjection
from forgis.spatial import (
    EARTH_RADIUS_M,
    BoundingBox,
    GeoPoint,
    GridIndex,
    TileCoord,
    haversine_distance,
    normalize_longitude,
    point_to_tile,
    tile_to_bbox,
)

# frozen from an independent evaluation of the haversine formula (R = 6,371,000)
EQUATOR_DEGREE_M = 111194.92664455874
ANTIPODAL_M = 20015086.79602057

lats = st.floats(min_value=-90.0, max_value=90.0, allow_nan=False)
lons = st.floats(min_value=-180.0, max_value=179.999999, allow_nan=False)
points = st.builds(GeoPoint, lats, lons)

# 1e-7 degree quantization (the system's coordinate resolution): quantized
# points sit either exactly on a tile edge (containment holds by the shared
# boundary) or ~1e5 ulps away from it, so float noise cannot flip the tile.
q_lats = st.integers(min_value=-850_500_000, max_value=850_500_000).map(lambda n: n / 1e7)
q_lons = st.integers(min_value=-1_800_000_000, max_value=1_799_999_999).map(lambda n: n / 1e7)
mercator_points = st.builds(GeoPoint, q_lats, q_lons)


class TestGeoPoint:
    def test_rejects_out_of_range_latitude(self):
        with pytest.raises(InvalidCoordinate):
            GeoPoint(90.5, 0.0)
        with pytest.raises(InvalidCoordinate):
            GeoPoint(-91.0, 0.0)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidCoordinate):
            GeoPoint(float("nan"), 0.0)
        with pytest.raises(InvalidCoordinate):
            GeoPoint(0.0, float("inf"))

    def test_normalizes_longitude(self):
        assert GeoPoint(0.0, 190.0).lon == -170.0
        assert GeoPoint(0.0, 180.0).lon == -180.0
        assert GeoPoint(0.0, 540.0).lon == -180.0
        assert GeoPoint(0.0, -180.0).lon == -180.0
        assert GeoPoint(0.0, 4.325).lon == 4.325

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_normalization_idempotent(self, lon):
        once = normalize_longitude(lon)
        assert normalize_longitude(once) == once
        assert -180.0 <= once < 180.0


class TestHaversine:
    def test_identity_is_zero(self):
        p = GeoPoint(52.0, 4.0)
        assert haversine_distance(p, p) == 0.0

    def test_antipodal(self):
        d = haversine_distance(GeoPoint(0, 0), GeoPoint(0, 180))
        assert abs(d - 20015087) <= 1.0
        assert d == pytest.approx(ANTIPODAL_M)
        assert d == pytest.approx(math.pi * EARTH_RADIUS_M)

    def test_one_equator_degree(self):
        d = haversine_distance(GeoPoint(0, 0), GeoPoint(0, 1))
        assert abs(d - 111195) <= 1.0
        assert d == pytest.approx(EQUATOR_DEGREE_M)

    @given(points, points)
    def test_symmetric_exactly(self, a, b):
        assert haversine_distance(a, b) == haversine_distance(b, a)

    @given(points, points)
    def test_bounded(self, a, b):
        d = haversine_distance(a, b)
        assert 0.0 <= d <= math.pi * EARTH_RADIUS_M + 1e-6


class TestTiles:
    def test_whole_world_is_tile_zero(self):
        for lat, lon in [(37.5, -122.1), (-85.0, 179.9), (85.0, -180.0), (0.0, 0.0)]:
            assert point_to_tile(GeoPoint(lat, lon), 0) == TileCoord(0, 0, 0)

    def test_origin_at_zoom_one(self):
        assert point_to_tile(GeoPoint(0.0, 0.0), 1) == TileCoord(1, 1, 1)

    def test_the_hague_zoom_twelve(self):
        # frozen from an independent evaluation of the slippy-map formulas
        assert point_to_tile(GeoPoint(52.0800, 4.3250), 12) == TileCoord(12, 2097, 1351)

    def test_latitude_beyond_projection(self):
        with pytest.raises(LatitudeOutOfProjection):
            point_to_tile(GeoPoint(86.0, 0.0), 4)
        with pytest.raises(LatitudeOutOfProjection):
            point_to_tile(GeoPoint(-89.9, 0.0), 4)

    def test_tile_coord_grid_invariant(self):
        with pytest.raises(ValueError):
            TileCoord(1, 2, 0)
        with pytest.raises(ValueError):
            TileCoord(3, 0, -1)
        with pytest.raises(ValueError):
            TileCoord(-1, 0, 0)

    def test_world_tile_bbox(self):
        bb = tile_to_bbox(TileCoord(0, 0, 0))
        assert bb.west == -180.0 and bb.east == 180.0
        assert bb.south == pytest.approx(-85.05113, abs=1e-4)
        assert bb.north == pytest.approx(85.05113, abs=1e-4)

    def test_zoom_one_grid_symmetry(self):
        bb = tile_to_bbox(TileCoord(1, 1, 1))
        # nw corner of the se quadrant tile is the origin
        assert bb.west == 0.0 and bb.north == 0.0

    def test_the_hague_tile_contains_point(self):
        bb = tile_to_bbox(TileCoord(12, 2097, 1351))
        assert bb.contains(GeoPoint(52.0800, 4.3250))

    def test_adjacent_tiles_share_edges_exactly(self):
        t = TileCoord(12, 2097, 1351)
        east = tile_to_bbox(TileCoord(12, 2098, 1351))
        south = tile_to_bbox(TileCoord(12, 2097, 1352))
        bb = tile_to_bbox(t)
        assert bb.east == east.west
        assert bb.south == south.north

    def test_bbox_center_round_trips(self):
        for z, x, y in [(0, 0, 0), (5, 17, 11), (12, 2097, 1351), (14, 0, 16383)]:
            t = TileCoord(z, x, y)
            assert point_to_tile(tile_to_bbox(t).center(), z) == t

    @settings(max_examples=300)
    @given(mercator_points, st.integers(min_value=0, max_value=14))
    def test_round_trip_containment(self, p, z):
        assert tile_to_bbox(point_to_tile(p, z)).contains(p)


class TestBoundingBox:
    def test_rejects_inverted_boxes(self):
        with pytest.raises(InvalidCoordinate):
            BoundingBox(south=10.0, west=0.0, north=5.0, east=1.0)
        with pytest.raises(InvalidCoordinate):
            BoundingBox(south=0.0, west=10.0, north=5.0, east=1.0)

    def test_contains_and_intersects(self):
        bb = BoundingBox(south=50.0, west=4.0, north=53.0, east=5.0)
        assert bb.contains(GeoPoint(52.0, 4.5))
        assert not bb.contains(GeoPoint(49.0, 4.5))
        assert bb.intersects(BoundingBox(south=52.0, west=4.9, north=60.0, east=30.0))
        assert not bb.intersects(BoundingBox(south=52.0, west=5.1, north=60.0, east=30.0))


def brute_force_radius(items, center, radius_m):
    return sorted(i for i, p in items if haversine_distance(center, p) <= radius_m)


class TestGridIndex:
    def test_radius_zero_far_items(self):
        idx = GridIndex()
        idx.insert("a", GeoPoint(52.0, 4.0))
        assert idx.query_radius(GeoPoint(51.0, 4.0), 0.0) == []

    def test_radius_zero_item_at_center(self):
        idx = GridIndex()
        idx.insert("a", GeoPoint(52.0, 4.0))
        idx.insert("b", GeoPoint(52.0, 4.1))
        assert idx.query_radius(GeoPoint(52.0, 4.0), 0.0) == ["a"]

    def test_inclusive_boundary(self):
        idx = GridIndex()
        idx.insert("edge", GeoPoint(0.0, 1.0))
        d = haversine_distance(GeoPoint(0, 0), GeoPoint(0, 1))
        assert idx.query_radius(GeoPoint(0.0, 0.0), d) == ["edge"]

    def test_matches_brute_force_randomized(self):
        rng = random.Random(20160501)
        items = [
            (f"i{n:05d}", GeoPoint(rng.uniform(-89.9, 89.9), rng.uniform(-180.0, 179.999)))
            for n in range(2000)
        ]
        idx = GridIndex()
        idx.extend(items)
        for _ in range(1000):
            center = GeoPoint(rng.uniform(-89.9, 89.9), rng.uniform(-180.0, 179.999))
            radius = rng.choice([0.0, 50.0, 2_000.0, 100_000.0, 1_500_000.0])
            assert idx.query_radius(center, radius) == brute_force_radius(items, center, radius)

    def test_antimeridian_and_pole_queries(self):
        rng = random.Random(7)
        items = []
        for n in range(500):
            items.append((f"w{n}", GeoPoint(rng.uniform(-10, 10), rng.uniform(179.0, 180.0) * rng.choice([1, -1]))))
        for n in range(200):
            items.append((f"p{n}", GeoPoint(rng.uniform(84.0, 90.0), rng.uniform(-180.0, 179.9))))
        idx = GridIndex()
        idx.extend(items)
        for center, radius in [
            (GeoPoint(0.0, 179.95), 150_000.0),
            (GeoPoint(0.0, -179.95), 150_000.0),
            (GeoPoint(89.0, 10.0), 400_000.0),
            (GeoPoint(89.9, 0.0), 50_000.0),
        ]:
            assert idx.query_radius(center, radius) == brute_force_radius(items, center, radius)
