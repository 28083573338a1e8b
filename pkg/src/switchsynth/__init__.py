"""Exact symbolic controller synthesis for linear hybrid automata."""

__version__ = "0.1.0"
