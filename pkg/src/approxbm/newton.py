"""Gauss-Newton refinement of points against a polynomial system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .linalg import least_squares
from .poly import PointSet, RawPolynomial, differentiate
from .terms import PowerProduct

__all__ = ["PolySystem", "PointRefinement", "RefinementOutcome", "gauss_newton", "merge_distinct"]

MAX_HALVINGS = 20


class PolySystem:
    """Polynomials g_1..g_n in s variables together with their Jacobian.

    All polynomials and partial derivatives are evaluated through one shared
    monomial list, so a point costs a single kernel call.
    """

    def __init__(self, polynomials: Sequence):
        if not polynomials:
            raise ValueError("a polynomial system needs at least one polynomial")
        self.polynomials = tuple(polynomials)
        s = {_nvars(g) for g in self.polynomials}
        if len(s) != 1:
            raise ValueError("polynomials of a system must share the number of variables")
        self.s = s.pop()
        self.n = len(self.polynomials)
        self.jacobian = tuple(
            tuple(differentiate(g, j) for j in range(self.s)) for g in self.polynomials
        )
        monos: dict[PowerProduct, int] = {}
        for g in self.polynomials:
            for t in g.support:
                monos.setdefault(t, len(monos))
        for row in self.jacobian:
            for d in row:
                for t in d.support:
                    monos.setdefault(t, len(monos))
        self._exponents = np.array([t.exponents for t in monos], dtype=np.int64).reshape(-1, self.s)
        K = len(monos)
        self._cf = np.zeros((self.n, K))
        self._cj = np.zeros((self.n * self.s, K))
        for i, g in enumerate(self.polynomials):
            for t, c in g.support.items():
                self._cf[i, monos[t]] += c
            for j, d in enumerate(self.jacobian[i]):
                for t, c in d.support.items():
                    self._cj[i * self.s + j, monos[t]] += c

    def _monomials(self, p: np.ndarray) -> np.ndarray:
        return kernels.monomial_values(np.ascontiguousarray(p.reshape(1, -1)), self._exponents)[0]

    def value(self, p) -> np.ndarray:
        return self._cf @ self._monomials(np.asarray(p, dtype=np.float64))

    def value_and_jacobian(self, p) -> tuple[np.ndarray, np.ndarray]:
        mono = self._monomials(np.asarray(p, dtype=np.float64))
        return self._cf @ mono, (self._cj @ mono).reshape(self.n, self.s)


def _nvars(g) -> int:
    return g.s


@dataclass(frozen=True, eq=False)
class PointRefinement:
    start: np.ndarray
    point: np.ndarray
    iterations: int
    final_residual_norm: float
    step_norm: float
    converged: bool
    rank_deficient: bool
    residual_history: tuple[float, ...]
    step_history: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class RefinementOutcome:
    refined_points: PointSet
    per_point: tuple[PointRefinement, ...]
    distinct_count: int
    merge_tol: float

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.per_point)

    def max_shift(self) -> float:
        return max(float(np.max(np.abs(r.point - r.start))) for r in self.per_point)


def _refine(system: PolySystem, p0: np.ndarray, max_iter: int, step_tol: float) -> PointRefinement:
    p = p0.copy()
    F, J = system.value_and_jacobian(p)
    fnorm = float(np.linalg.norm(F))
    res_hist = [fnorm]
    step_hist: list[float] = []
    converged = False
    deficient = False
    dnorm = 0.0
    it = 0
    while it < max_iter:
        sol = least_squares(J, -F)
        deficient = sol.rank_deficient
        d = sol.coefficients
        dnorm = float(np.linalg.norm(d))
        if dnorm <= step_tol * (1.0 + float(np.linalg.norm(p))):
            p = p + d
            F, J = system.value_and_jacobian(p)
            fnorm = float(np.linalg.norm(F))
            converged = not deficient
            break
        lam = 1.0
        for _ in range(MAX_HALVINGS + 1):
            q = p + lam * d
            Fq, Jq = system.value_and_jacobian(q)
            fq = float(np.linalg.norm(Fq))
            if fq <= fnorm:
                break
            lam *= 0.5
        else:
            break
        p, F, J, fnorm = q, Fq, Jq, fq
        it += 1
        res_hist.append(fnorm)
        step_hist.append(lam * dnorm)
    return PointRefinement(
        start=p0,
        point=p,
        iterations=it,
        final_residual_norm=fnorm,
        step_norm=dnorm,
        converged=converged,
        rank_deficient=deficient,
        residual_history=tuple(res_hist),
        step_history=tuple(step_hist),
    )


def default_merge_tol(points: np.ndarray) -> float:
    return 1e-6 * (1.0 + float(np.max(np.abs(points)))) if points.size else 1e-6


def merge_distinct(points, tol: float) -> int:
    """Clusters under 'componentwise distance <= tol', transitively closed."""
    pts = points.points if isinstance(points, PointSet) else np.asarray(points, dtype=np.float64)
    n = len(pts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.max(np.abs(pts[i] - pts[j])) <= tol:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


def gauss_newton(
    system: PolySystem | Sequence,
    start: PointSet,
    max_iter: int = 50,
    step_tol: float = 1e-10,
    merge_tol: float | None = None,
) -> RefinementOutcome:
    """Refine every start point independently towards a zero of the system.

    Each step solves ``J(p) d = -F(p)`` in the least-squares sense and is
    halved until ``||F||`` does not increase.  A point counts as converged
    when the step criterion is met at a full-rank Jacobian; only converged
    points enter ``distinct_count``.
    """
    if not isinstance(system, PolySystem):
        system = PolySystem(system)
    runs = tuple(_refine(system, p.copy(), max_iter, step_tol) for p in start.points)
    refined = np.array([r.point for r in runs])
    tol = default_merge_tol(refined) if merge_tol is None else merge_tol
    conv = [r.point for r in runs if r.converged]
    distinct = merge_distinct(np.array(conv), tol) if conv else 0
    return RefinementOutcome(start.with_points(refined), runs, distinct, tol)
