"""Approximate Groebner bases for ideals of perturbed points."""

__version__ = "0.1.0"

from .bm import AbmResult, abm, buchberger_moller, residual_table
from .kernels import BACKEND
from .poly import PointSet, Polynomial, evaluate, evaluate_poly, evaluation_matrix
from .preprocess import preprocess
from .terms import NormalSet, OrderKind, PowerProduct, TermOrdering, compare, corner_set
from .threshold import select_threshold

__all__ = [
    "__version__",
    "BACKEND",
    "AbmResult",
    "NormalSet",
    "OrderKind",
    "PointSet",
    "Polynomial",
    "PowerProduct",
    "TermOrdering",
    "abm",
    "buchberger_moller",
    "compare",
    "corner_set",
    "evaluate",
    "evaluate_poly",
    "evaluation_matrix",
    "preprocess",
    "residual_table",
    "select_threshold",
]
