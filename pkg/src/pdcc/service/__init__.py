"""HTTP service wrapping the pdcc core."""

from .app import app

__all__ = ["app"]
