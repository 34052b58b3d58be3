"""Genus-2 CM curves over prime fields via the CRT method for Igusa class polynomials."""

__version__ = "0.1.0"
