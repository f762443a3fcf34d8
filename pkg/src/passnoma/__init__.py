"""Closed-form and Monte Carlo performance analysis of pinching-antenna NOMA downlinks."""

__version__ = "0.1.0"
