"""Exact arithmetic toolkit for elliptic reduction types, genus-2 split
Jacobians, and machine-checked symbol relations over finite fields.

Everything here is integer/rational exact; no floating point is used in any
mathematical path.
"""

__version__ = "0.1.0"
