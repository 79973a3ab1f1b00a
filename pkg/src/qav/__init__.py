"""Exact symbolic verification of R-matrix identities for quantum affine
algebras of the orthogonal series (types B and D)."""

__version__ = "0.1.0"
