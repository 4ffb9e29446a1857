"""HTTP service binding tiles, evidence store, and analysis into one origin."""

from .app import create_app

__all__ = ["create_app"]
