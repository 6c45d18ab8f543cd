"""Exact and threshold-based Buchberger-Moeller algorithms for points."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import least_squares
from .poly import PointSet, Polynomial, monomial_matrix
from .terms import DEGLEX, CandidatePool, NormalSet, PowerProduct, TermOrdering, corner_set

__all__ = [
    "Classification",
    "ResidualRecord",
    "AbmResult",
    "abm",
    "buchberger_moller",
    "residual_table",
    "EXACT_TOL",
    "ROUNDOFF_FLOOR",
    "DuplicatePointsError",
]

# "exact" dependence test of the floating-point BM algorithm
EXACT_TOL = 1e-10
# relative residuals at or below this are rounding noise and recorded as 0
ROUNDOFF_FLOOR = 1e-13


class DuplicatePointsError(ValueError):
    pass


class Classification(str, Enum):
    NORMAL = "normal"
    LEADING = "leading"


@dataclass(frozen=True, eq=False)
class ResidualRecord:
    term: PowerProduct
    relative_residual: float
    classification: Classification
    span_terms: tuple[PowerProduct, ...]
    coefficients: np.ndarray | None = None
    residual: np.ndarray | None = None

    @property
    def is_normal(self) -> bool:
        return self.classification is Classification.NORMAL


@dataclass(frozen=True, eq=False)
class AbmResult:
    basis: tuple[Polynomial, ...]
    normal_set: NormalSet
    log: tuple[ResidualRecord, ...]
    epsilon: float
    points: PointSet

    @property
    def ordering(self) -> TermOrdering:
        return self.normal_set.ordering

    @property
    def leading_terms(self) -> list[PowerProduct]:
        return [g.leading_term for g in self.basis]

    def record(self, term: PowerProduct) -> ResidualRecord:
        for rec in self.log:
            if rec.term == term:
                return rec
        raise KeyError(term)

    def basis_record(self, i: int) -> ResidualRecord:
        return self.record(self.basis[i].leading_term)


def abm(P: PointSet, ordering: TermOrdering = DEGLEX, epsilon: float = 0.0) -> AbmResult:
    """Approximate Buchberger-Moeller algorithm with threshold ``epsilon``.

    Candidate terms are visited in sigma-ascending order.  The evaluation
    vector of each term is fitted in the least-squares sense by the columns
    of the current normal terms; a relative residual above ``epsilon`` makes
    the term normal, otherwise ``t - sum c_i t_i`` joins the basis.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    pts = P.points
    m, s = pts.shape
    pool = CandidatePool(s, ordering)
    normal: list[PowerProduct] = []
    columns = np.zeros((m, 0))
    basis: list[Polynomial] = []
    log: list[ResidualRecord] = []

    while (t := pool.pop()) is not None:
        v = monomial_matrix([t], pts)[:, 0]
        span = tuple(normal)
        if not normal:
            rel, sol = 1.0, None
        else:
            sol = least_squares(columns, v)
            # m normal terms span all of R^m: any further term is dependent
            rel = 0.0 if len(normal) == m else sol.relative_residual
            if rel <= ROUNDOFF_FLOOR:
                rel = 0.0
        if sol is None or rel > epsilon:
            normal.append(t)
            columns = np.column_stack([columns, v])
            pool.mark_normal(t)
            log.append(ResidualRecord(t, rel, Classification.NORMAL, span))
        else:
            coeffs = sol.coefficients if sol is not None else np.zeros(0)
            resid = sol.residual if sol is not None else v.copy()
            basis.append(Polynomial.from_tail(t, span, coeffs, ordering))
            pool.mark_leading(t)
            log.append(ResidualRecord(t, rel, Classification.LEADING, span, coeffs, resid))

    return AbmResult(tuple(basis), NormalSet(tuple(normal), ordering), tuple(log), float(epsilon), P)


def _check_distinct(P: PointSet) -> None:
    rows = {tuple(r) for r in P.points.tolist()}
    if len(rows) != P.m:
        raise DuplicatePointsError("point set contains duplicate points")


def buchberger_moller(P: PointSet, ordering: TermOrdering = DEGLEX) -> AbmResult:
    """Floating-point BM: dependence means relative residual <= ``EXACT_TOL``."""
    _check_distinct(P)
    return abm(P, ordering, EXACT_TOL)


def residual_table(P: PointSet, ordering: TermOrdering = DEGLEX) -> list[ResidualRecord]:
    """Relative residual of every term processed by the exact BM run."""
    return list(buchberger_moller(P, ordering).log)


def check_structure(result: AbmResult) -> None:
    """Raise AssertionError unless the basis has the expected shape."""
    N = result.normal_set
    corners = corner_set(N)
    assert result.leading_terms == corners, (result.leading_terms, corners)
    allowed = set(N.terms) | set(corners)
    for g in result.basis:
        assert set(g.support) <= allowed
    assert len(N) <= result.points.m
