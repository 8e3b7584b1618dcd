"""Exact q-series verification of theta-function identities behind anomaly cancellation."""

__version__ = "0.1.0"
