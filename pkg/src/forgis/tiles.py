"""Offline slippy-map tile archive.

An archive is a directory of pre-rendered ``{z}/{x}/{y}.png`` files plus a
``manifest.json`` declaring the zoom range, bounds, and tile count. Tiles
are served byte-verbatim; a bounded LRU keeps hot tiles in memory. The
archive replaces a render pipeline entirely: raster generation happens
off-site, this side only validates and serves.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorruptManifest, MissingManifest, TileNotFound, ZoomOutOfRange
from .spatial import BoundingBox, TileCoord, tile_to_bbox

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"

DEFAULT_CACHE_CAPACITY = 1024


@dataclass(frozen=True)
class TileManifest:
    name: str
    attribution: str
    min_zoom: int
    max_zoom: int
    bounds: BoundingBox
    tile_format: str
    tile_count: int


def _manifest_field(raw: dict, key: str, kind) -> object:
    if key not in raw:
        raise CorruptManifest(f"manifest lacks field {key!r}")
    value = raw[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise CorruptManifest(f"manifest field {key!r} has wrong type")
    return value


def load_manifest(path: Path) -> TileManifest:
    if not path.exists():
        raise MissingManifest("no manifest.json in tile archive")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptManifest(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise CorruptManifest("manifest root must be an object")

    name = _manifest_field(raw, "name", str)
    attribution = _manifest_field(raw, "attribution", str)
    min_zoom = _manifest_field(raw, "min_zoom", int)
    max_zoom = _manifest_field(raw, "max_zoom", int)
    tile_format = _manifest_field(raw, "tile_format", str)
    tile_count = _manifest_field(raw, "tile_count", int)
    bounds_raw = _manifest_field(raw, "bounds", dict)

    if min_zoom < 0:
        raise CorruptManifest("min_zoom must be >= 0")
    if min_zoom > max_zoom:
        raise CorruptManifest(f"min_zoom {min_zoom} exceeds max_zoom {max_zoom}")
    if tile_format != "png":
        raise CorruptManifest(f"tile_format {tile_format!r} unsupported (only png)")
    if tile_count < 0:
        raise CorruptManifest("tile_count must be >= 0")
    try:
        bounds = BoundingBox(
            south=float(bounds_raw["south"]),
            west=float(bounds_raw["west"]),
            north=float(bounds_raw["north"]),
            east=float(bounds_raw["east"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptManifest(f"bounds: {exc}") from exc

    return TileManifest(
        name=name,
        attribution=attribution,
        min_zoom=min_zoom,
        max_zoom=max_zoom,
        bounds=bounds,
        tile_format=tile_format,
        tile_count=tile_count,
    )


class _TileCache:
    """Bounded, internally synchronized LRU of tile bytes."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._entries: OrderedDict[tuple[int, int, int], bytes] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: tuple[int, int, int]) -> bytes | None:
        if self.capacity <= 0:
            return None
        with self._lock:
            data = self._entries.get(key)
            if data is not None:
                self._entries.move_to_end(key)
            return data

    def put(self, key: tuple[int, int, int], data: bytes) -> None:
        if self.capacity <= 0:
            return
        with self._lock:
            self._entries[key] = data
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


class TileArchive:
    """An opened archive: validated manifest plus verbatim tile reads."""

    def __init__(self, root: Path, manifest: TileManifest, cache_capacity: int):
        self.root = root
        self.manifest = manifest
        self._cache = _TileCache(cache_capacity)

    @property
    def cached_tile_count(self) -> int:
        return len(self._cache)

    def _tile_path(self, t: TileCoord) -> Path:
        return self.root / str(t.z) / str(t.x) / f"{t.y}.png"

    def get_tile(self, t: TileCoord) -> bytes:
        """The stored PNG bytes, bit-exact. Raises ZoomOutOfRange outside
        the manifest's zoom range, TileNotFound for absent tiles."""
        if not self.manifest.min_zoom <= t.z <= self.manifest.max_zoom:
            raise ZoomOutOfRange(
                f"zoom {t.z} outside [{self.manifest.min_zoom}, {self.manifest.max_zoom}]"
            )
        key = (t.z, t.x, t.y)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        try:
            data = self._tile_path(t).read_bytes()
        except FileNotFoundError:
            raise TileNotFound(f"no tile {t.z}/{t.x}/{t.y}") from None
        self._cache.put(key, data)
        return data


def open_archive(path: Path | str, cache_capacity: int = DEFAULT_CACHE_CAPACITY) -> TileArchive:
    """Open and validate a tile archive directory."""
    root = Path(path)
    if not root.is_dir():
        raise MissingManifest("tile archive directory does not exist")
    manifest = load_manifest(root / "manifest.json")
    return TileArchive(root=root, manifest=manifest, cache_capacity=cache_capacity)


@dataclass
class ArchiveReport:
    """verify_archive findings; clean means deployable."""

    violations: list[str] = field(default_factory=list)
    tiles_found: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations


def verify_archive(archive: TileArchive) -> ArchiveReport:
    """Deployment QA sweep: finds tiles outside the manifest envelope,
    non-PNG payloads, stray files, and tile-count mismatches."""
    report = ArchiveReport()
    manifest = archive.manifest
    for path in sorted(archive.root.rglob("*")):
        if path.is_dir():
            continue
        rel = path.relative_to(archive.root)
        if str(rel) == "manifest.json":
            continue
        parts = rel.parts
        if len(parts) != 3 or not parts[2].endswith(".png"):
            report.violations.append(f"{rel}: not a {{z}}/{{x}}/{{y}}.png tile path")
            continue
        try:
            z, x, y = int(parts[0]), int(parts[1]), int(parts[2][:-4])
            coord = TileCoord(z, x, y)
        except ValueError as exc:
            report.violations.append(f"{rel}: {exc}")
            continue
        report.tiles_found += 1
        if not manifest.min_zoom <= z <= manifest.max_zoom:
            report.violations.append(
                f"{rel}: zoom {z} outside manifest range [{manifest.min_zoom}, {manifest.max_zoom}]"
            )
        elif not tile_to_bbox(coord).intersects(manifest.bounds):
            report.violations.append(f"{rel}: tile lies outside the manifest bounds")
        with path.open("rb") as fh:
            if fh.read(len(PNG_SIGNATURE)) != PNG_SIGNATURE:
                report.violations.append(f"{rel}: not a PNG file")
    if report.tiles_found != manifest.tile_count:
        report.violations.append(
            f"tile count mismatch: manifest declares {manifest.tile_count}, found {report.tiles_found}"
        )
    return report
