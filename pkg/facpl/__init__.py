"""FACPL policy evaluation engine and property verifier."""

__version__ = "0.1.0"
