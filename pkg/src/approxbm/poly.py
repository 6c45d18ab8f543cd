"""Real polynomials over power products, point sets and evaluation matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .terms import DEGLEX, DimensionError, PowerProduct, TermOrdering, variable_names

__all__ = [
    "PointSet",
    "Polynomial",
    "RawPolynomial",
    "EvaluationMatrix",
    "evaluate",
    "evaluate_poly",
    "evaluation_matrix",
    "differentiate",
    "format_coefficients",
]


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered points in R^s with a common coordinate uncertainty ``s0``."""

    points: np.ndarray
    s0: float = 0.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1 and pts.size:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("a point set needs at least one point with s >= 1 coordinates")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        if self.s0 < 0:
            raise ValueError("uncertainty s0 must be non-negative")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "s0", float(self.s0))

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return (
            self.s0 == other.s0
            and self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
        )

    def with_points(self, points) -> PointSet:
        return PointSet(points, self.s0)

    def tolist(self) -> list[list[float]]:
        return self.points.tolist()


def format_coefficients(
    items: Sequence[tuple[PowerProduct, float]], digits: int | None = 5, names=None
) -> str:
    """Render ``sum c*t`` in the given term order, e.g. ``y^3 - 6y^2 + 11y - 6``."""

    def num(c: float) -> str:
        if digits is None:
            return repr(c)
        text = f"{c:.{digits}f}".rstrip("0").rstrip(".")
        return text if text not in ("", "-0") else "0"

    out = []
    for t, c in items:
        mag = num(abs(c))
        if mag == "0":
            continue
        sign = "-" if c < 0 else "+"
        body = t.format(names)
        if body == "1":
            text = mag
        elif mag == "1":
            text = body
        else:
            text = mag + body
        out.append((sign, text))
    if not out:
        return "0"
    first_sign, first = out[0]
    parts = [("-" if first_sign == "-" else "") + first]
    parts += [f"{sg} {tx}" for sg, tx in out[1:]]
    return " ".join(parts)


@dataclass(frozen=True, eq=False)
class RawPolynomial:
    """Unconstrained term -> coefficient map (derivatives, extended-basis forms)."""

    support: Mapping[PowerProduct, float]
    s: int

    def __post_init__(self):
        clean = {t: float(c) for t, c in self.support.items() if c != 0.0}
        object.__setattr__(self, "support", clean)

    def is_zero(self) -> bool:
        return not self.support

    def format(self, ordering: TermOrdering = DEGLEX, digits: int | None = 5) -> str:
        terms = ordering.sorted(self.support, reverse=True)
        return format_coefficients([(t, self.support[t]) for t in terms], digits, variable_names(self.s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RawPolynomial):
            return NotImplemented
        return self.s == other.s and dict(self.support) == dict(other.support)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Monic polynomial ``t - sum c_i t_i`` with every t_i sigma-below t."""

    support: Mapping[PowerProduct, float]
    leading_term: PowerProduct
    ordering: TermOrdering = field(default=DEGLEX)

    def __post_init__(self):
        clean = {t: float(c) for t, c in self.support.items() if c != 0.0}
        lt = self.leading_term
        if clean.get(lt) != 1.0:
            raise ValueError(f"leading term {lt} must have coefficient exactly 1")
        key = self.ordering.key(lt)
        for t in clean:
            if t.s != lt.s:
                raise ValueError("mixed number of variables in polynomial support")
            if t != lt and self.ordering.key(t) >= key:
                raise ValueError(f"support term {t} is not below the leading term {lt}")
        object.__setattr__(self, "support", clean)

    @classmethod
    def from_tail(
        cls,
        leading_term: PowerProduct,
        tail_terms: Sequence[PowerProduct],
        coefficients: Sequence[float],
        ordering: TermOrdering = DEGLEX,
    ) -> Polynomial:
        """Build ``t - sum c_i t_i`` from the tail terms and their c_i."""
        support = {leading_term: 1.0}
        for t, c in zip(tail_terms, coefficients):
            support[t] = support.get(t, 0.0) - float(c)
        return cls(support, leading_term, ordering)

    @property
    def s(self) -> int:
        return self.leading_term.s

    def terms(self) -> list[PowerProduct]:
        """Support in sigma-descending order (leading term first)."""
        return self.ordering.sorted(self.support, reverse=True)

    def tail_coefficients(self, terms: Sequence[PowerProduct]) -> np.ndarray:
        """The c_i of ``t - sum c_i t_i`` for the given tail terms."""
        return np.array([-self.support.get(t, 0.0) for t in terms])

    def as_raw(self) -> RawPolynomial:
        return RawPolynomial(dict(self.support), self.s)

    def format(self, digits: int | None = 5) -> str:
        return format_coefficients(
            [(t, self.support[t]) for t in self.terms()], digits, variable_names(self.s)
        )

    def __str__(self) -> str:
        return self.format()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.leading_term == other.leading_term and dict(self.support) == dict(other.support)


@dataclass(frozen=True, eq=False)
class EvaluationMatrix:
    entries: np.ndarray
    column_terms: tuple[PowerProduct, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def _exponent_array(terms: Sequence[PowerProduct], s: int) -> np.ndarray:
    arr = np.zeros((len(terms), s), dtype=np.int64)
    for j, t in enumerate(terms):
        if t.s != s:
            raise DimensionError(f"term {t} has {t.s} variables, points have {s}")
        arr[j] = t.exponents
    return arr


def _as_points(P) -> np.ndarray:
    if isinstance(P, PointSet):
        return P.points
    pts = np.asarray(P, dtype=np.float64)
    return pts.reshape(1, -1) if pts.ndim == 1 else pts


def monomial_matrix(terms: Sequence[PowerProduct], P) -> np.ndarray:
    pts = _as_points(P)
    exps = _exponent_array(terms, pts.shape[1])
    if not len(terms):
        return np.zeros((pts.shape[0], 0))
    return kernels.monomial_values(np.ascontiguousarray(pts), exps)


def evaluate(t: PowerProduct, p) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(1, -1)
    return float(monomial_matrix([t], p)[0, 0])


def evaluation_matrix(terms: Sequence[PowerProduct], P) -> EvaluationMatrix:
    return EvaluationMatrix(monomial_matrix(list(terms), P), tuple(terms))


def evaluate_poly(g, P) -> np.ndarray:
    """Vector of g evaluated at each point of ``P``."""
    pts = _as_points(P)
    terms = list(g.support)
    if not terms:
        return np.zeros(pts.shape[0])
    coeffs = np.array([g.support[t] for t in terms])
    return monomial_matrix(terms, pts) @ coeffs


def differentiate(g, var: int) -> RawPolynomial:
    """Formal partial derivative d g / d x_var."""
    s = g.leading_term.s if isinstance(g, Polynomial) else g.s
    if not 0 <= var < s:
        raise ValueError(f"variable index {var} out of range for s={s}")
    out: dict[PowerProduct, float] = {}
    for t, c in g.support.items():
        e = t.exponents[var]
        if e == 0:
            continue
        d = list(t.exponents)
        d[var] -= 1
        u = PowerProduct(tuple(d))
        out[u] = out.get(u, 0.0) + e * c
    return RawPolynomial(out, s)
