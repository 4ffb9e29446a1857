"""Service configuration: a single JSON file plus flag overrides.

The bind address must be loopback or an RFC-1918 private address unless
``allow_public_bind`` is set explicitly — the service is built for an
isolated intranet and refuses to face anything wider by accident.
"""

from __future__ import annotations

import ipaddress
import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError

_PRIVATE_V4 = (
    ipaddress.ip_network("10.0.0.0/8"),
    ipaddress.ip_network("172.16.0.0/12"),
    ipaddress.ip_network("192.168.0.0/16"),
)
_PRIVATE_V6 = (ipaddress.ip_network("fc00::/7"),)


@dataclass
class ServiceConfig:
    tile_archive_path: Path
    case_root_path: Path
    bind_address: str = "127.0.0.1"
    port: int = 8080
    cache_capacity: int = 1024
    lenient_import: bool = False
    allow_public_bind: bool = False
    ui_dist_path: Path | None = None


def is_private_bind(address: str) -> bool:
    """True for loopback or private-range IP literals."""
    try:
        ip = ipaddress.ip_address(address)
    except ValueError:
        return False
    if ip.is_loopback:
        return True
    if ip.is_unspecified:  # 0.0.0.0 / :: expose every interface
        return False
    nets = _PRIVATE_V4 if ip.version == 4 else _PRIVATE_V6
    return any(ip in net for net in nets)


def load_config(path: Path | str) -> ServiceConfig:
    """Read a JSON config file; unknown keys are rejected so typos fail
    loudly at startup rather than silently using defaults."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {p} does not exist")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")

    known = {
        "tile_archive_path",
        "case_root_path",
        "bind_address",
        "port",
        "cache_capacity",
        "lenient_import",
        "allow_public_bind",
        "ui_dist_path",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    for required in ("tile_archive_path", "case_root_path"):
        if required not in raw:
            raise ConfigError(f"config lacks required field {required!r}")

    try:
        return ServiceConfig(
            tile_archive_path=Path(raw["tile_archive_path"]),
            case_root_path=Path(raw["case_root_path"]),
            bind_address=str(raw.get("bind_address", "127.0.0.1")),
            port=int(raw.get("port", 8080)),
            cache_capacity=int(raw.get("cache_capacity", 1024)),
            lenient_import=bool(raw.get("lenient_import", False)),
            allow_public_bind=bool(raw.get("allow_public_bind", False)),
            ui_dist_path=Path(raw["ui_dist_path"]) if raw.get("ui_dist_path") else None,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc


def apply_overrides(cfg: ServiceConfig, **overrides) -> ServiceConfig:
    """Overlay non-None flag values onto a loaded config."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **changes)


def validate_config(cfg: ServiceConfig) -> None:
    """Startup checks; raises ConfigError naming the offending field."""
    if not Path(cfg.tile_archive_path).is_dir():
        raise ConfigError(f"tile_archive_path: {cfg.tile_archive_path} is not a readable directory")
    if cfg.ui_dist_path is not None and not Path(cfg.ui_dist_path).is_dir():
        raise ConfigError(f"ui_dist_path: {cfg.ui_dist_path} is not a readable directory")
    if not 0 < cfg.port < 65536:
        raise ConfigError(f"port: {cfg.port} out of range")
    if cfg.cache_capacity < 0:
        raise ConfigError("cache_capacity: must be >= 0")
    if not cfg.allow_public_bind and not is_private_bind(cfg.bind_address):
        raise ConfigError(
            f"bind_address: {cfg.bind_address!r} is not loopback or RFC-1918 private; "
            "the service is intranet-only (pass allow_public_bind to override)"
        )
    case_root = Path(cfg.case_root_path)
    case_root.mkdir(parents=True, exist_ok=True)
