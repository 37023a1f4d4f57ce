"""Compatibility conditions, resolutions and Spencer cohomology for
constant-coefficient linear PDE operators, in exact rational arithmetic."""

__version__ = "0.1.0"
