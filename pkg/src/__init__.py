"""hilbloc package (src)."""

__all__ = ["cli", "core", "services", "utils"]
