"""Exact verification toolkit for the mod-2 permutation module of Sym(2n) on its
fixed-point-free involutions."""

__version__ = "0.1.0"
