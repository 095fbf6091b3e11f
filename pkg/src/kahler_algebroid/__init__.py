"""Exact-arithmetic engine for finite-dimensional Kähler Lie algebroid models."""

__version__ = "0.1.0"
