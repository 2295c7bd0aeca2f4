"""Exact computer algebra for principal W-algebras of sl_n and gl_n."""

__version__ = "0.1.0"
