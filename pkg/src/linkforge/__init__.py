"""Constructive machinery for intrinsic linking with divisibility constraints."""

__version__ = "0.1.0"
