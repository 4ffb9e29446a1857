from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from forgis.api import create_app
from forgis.config import ServiceConfig

FIXTURES = Path(__file__).parent / "data"

WORLD_BOUNDS = {"south": -85.05113, "west": -180.0, "north": 85.05113, "east": 180.0}


def tiny_png(r: int = 0, g: int = 0, b: int = 0) -> bytes:
    """A valid 1x1 RGB PNG with the given pixel color."""

    def chunk(tag: bytes, data: bytes) -> bytes:
        return (
            struct.pack(">I", len(data))
            + tag
            + data
            + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)
        )

    ihdr = struct.pack(">IIBBBBB", 1, 1, 8, 2, 0, 0, 0)
    idat = zlib.compress(b"\x00" + bytes([r, g, b]))
    return b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr) + chunk(b"IDAT", idat) + chunk(b"IEND", b"")


def make_archive(
    root: Path,
    tiles: dict[tuple[int, int, int], bytes] | None = None,
    min_zoom: int = 0,
    max_zoom: int = 2,
    bounds: dict | None = None,
    tile_count: int | None = None,
) -> Path:
    """Lay out a tile archive directory with a manifest."""
    if tiles is None:
        tiles = {
            (0, 0, 0): tiny_png(10, 20, 30),
            (1, 1, 1): tiny_png(40, 50, 60),
            (2, 2, 1): tiny_png(70, 80, 90),
        }
    root.mkdir(parents=True, exist_ok=True)
    for (z, x, y), data in tiles.items():
        path = root / str(z) / str(x) / f"{y}.png"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    manifest = {
        "name": "fixture archive",
        "attribution": "test data",
        "min_zoom": min_zoom,
        "max_zoom": max_zoom,
        "bounds": bounds or dict(WORLD_BOUNDS),
        "tile_format": "png",
        "tile_count": len(tiles) if tile_count is None else tile_count,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return root


@pytest.fixture
def archive_dir(tmp_path: Path) -> Path:
    return make_archive(tmp_path / "tiles")


@pytest.fixture
def service_config(tmp_path: Path, archive_dir: Path) -> ServiceConfig:
    return ServiceConfig(
        tile_archive_path=archive_dir,
        case_root_path=tmp_path / "cases-root",
        cache_capacity=64,
    )


@pytest.fixture
def client(service_config: ServiceConfig) -> TestClient:
    app = create_app(service_config)
    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture
def case_id(client: TestClient) -> str:
    response = client.post("/cases", json={"name": "test case"})
    assert response.status_code == 201
    return response.json()["case_id"]
