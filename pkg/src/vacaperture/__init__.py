"""Binocular viewing geometry, VAC depth compression and affordance-ratio analysis."""

__version__ = "0.1.0"
