"""Compile assume-guarantee contracts into executable observer programs."""

__version__ = "0.1.0"
