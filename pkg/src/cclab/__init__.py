"""Cluster characters of quiver representations, computed exactly."""

__version__ = "0.1.0"
