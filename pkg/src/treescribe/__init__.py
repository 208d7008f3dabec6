"""Navigable, customizable text hierarchies for charts."""

from importlib import resources


def asset_path(name: str):
    """Filesystem path of a bundled sample asset (CSV or chart spec)."""
    return resources.files(__name__) / "assets" / name


__all__ = ["asset_path"]
__version__ = "0.1.0"
