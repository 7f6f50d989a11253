"""Verification toolkit for overpartitions into nonmultiples of two integers."""

__version__ = "0.1.0"
