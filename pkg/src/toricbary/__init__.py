"""Exact barycenter profiles and loop invariants of Delzant polytopes."""

__version__ = "0.1.0"
