"""Version information for hsmetric."""

__version__ = "0.1.0"
