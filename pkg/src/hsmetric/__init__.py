"""hsmetric: conservative Hunter–Saxton solutions and their Lipschitz metric."""

from .__about__ import __version__

__all__ = ["__version__"]
