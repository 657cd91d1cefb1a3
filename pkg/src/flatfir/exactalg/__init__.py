"""Exact arithmetic kernel: rationals, polynomials, matrices, root isolation."""

from fractions import Fraction as Rational

from .intervals import RatInterval, eval_poly_interval
from .multipoly import MultiPoly
from .polymatrix import PolyMatrix
from .roots import RootInterval, refine_interval, sturm_real_roots
from .unipoly import UniPoly, poly_gcd, squarefree_decomposition, squarefree_part

__all__ = [
    "Rational",
    "UniPoly",
    "MultiPoly",
    "PolyMatrix",
    "RatInterval",
    "RootInterval",
    "poly_gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "sturm_real_roots",
    "refine_interval",
    "eval_poly_interval",
]
