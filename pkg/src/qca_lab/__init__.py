"""Clifford QCAs as pseudo-unitary matrices over F2 Laurent polynomials."""

from .fpoly import LaurentPoly, format_poly, parse_poly
from .symplectic import ModuleVector, PolyMatrix

__all__ = ["LaurentPoly", "ModuleVector", "PolyMatrix", "format_poly", "parse_poly"]
