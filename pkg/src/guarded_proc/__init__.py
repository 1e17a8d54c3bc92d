"""Guarded labelled transition systems in the step-indexed model."""

__version__ = "0.1.0"
