"""Exact calculi for divisorial contractions to compound Du Val points."""

__version__ = "0.1.0"
