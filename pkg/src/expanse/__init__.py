"""Expansion sets for generalized Thompson groups: links, stars and checks."""

__version__ = "0.1.0"
