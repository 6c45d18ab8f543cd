"""Power products, term orderings, order ideals and the candidate pool."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

__all__ = [
    "PowerProduct",
    "OrderKind",
    "TermOrdering",
    "NormalSet",
    "CandidatePool",
    "compare",
    "is_closed",
    "corner_set",
    "next_candidate",
    "variable_names",
]


class DimensionError(ValueError):
    pass


class ClosednessError(ValueError):
    pass


def variable_names(s: int) -> list[str]:
    if s <= 3:
        return ["x", "y", "z"][:s]
    return [f"x{i + 1}" for i in range(s)]


@dataclass(frozen=True, slots=True)
class PowerProduct:
    """Monomial x_1^e_1 ... x_s^e_s stored as its exponent tuple."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def one(cls, s: int) -> PowerProduct:
        return cls((0,) * s)

    @classmethod
    def var(cls, i: int, s: int) -> PowerProduct:
        e = [0] * s
        e[i] = 1
        return cls(tuple(e))

    @property
    def s(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_one(self) -> bool:
        return not any(self.exponents)

    def __mul__(self, other: PowerProduct) -> PowerProduct:
        _check_dims(self, other)
        return PowerProduct(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def times_var(self, i: int) -> PowerProduct:
        e = list(self.exponents)
        e[i] += 1
        return PowerProduct(tuple(e))

    def divides(self, other: PowerProduct) -> bool:
        _check_dims(self, other)
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def divisors_by_var(self) -> list[PowerProduct]:
        """t / x_i for every variable x_i dividing t."""
        out = []
        for i, e in enumerate(self.exponents):
            if e:
                d = list(self.exponents)
                d[i] -= 1
                out.append(PowerProduct(tuple(d)))
        return out

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or variable_names(self.s)
        parts = []
        for name, e in zip(names, self.exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "".join(parts) or "1"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"PowerProduct({self.format()})"


def _check_dims(t1: PowerProduct, t2: PowerProduct) -> None:
    if t1.s != t2.s:
        raise DimensionError(f"power products in {t1.s} and {t2.s} variables")


class OrderKind(str, Enum):
    DEGLEX = "deglex"
    LEX = "lex"
    DEGREVLEX = "degrevlex"


@dataclass(frozen=True)
class TermOrdering:
    """A term ordering on power products in ``s`` variables.

    ``precedence`` lists variable indices from most to least significant;
    by default x_1 > x_2 > ... > x_s.
    """

    kind: OrderKind = OrderKind.DEGLEX
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", OrderKind(self.kind))
        if self.precedence is not None:
            prec = tuple(int(i) for i in self.precedence)
            if sorted(prec) != list(range(len(prec))):
                raise ValueError(f"precedence {prec} is not a permutation")
            object.__setattr__(self, "precedence", prec)

    def _perm(self, s: int) -> tuple[int, ...]:
        if self.precedence is None:
            return tuple(range(s))
        if len(self.precedence) != s:
            raise DimensionError(f"ordering defined for {len(self.precedence)} variables, got {s}")
        return self.precedence

    def key(self, t: PowerProduct) -> tuple:
        """Sort key: ``key(a) < key(b)`` iff a <_sigma b."""
        e = [t.exponents[i] for i in self._perm(t.s)]
        if self.kind is OrderKind.LEX:
            return tuple(e)
        if self.kind is OrderKind.DEGLEX:
            return (t.degree, *e)
        return (t.degree, *(-x for x in reversed(e)))

    def sorted(self, terms: Iterable[PowerProduct], reverse: bool = False) -> list[PowerProduct]:
        return sorted(terms, key=self.key, reverse=reverse)


DEGLEX = TermOrdering()


def compare(t1: PowerProduct, t2: PowerProduct, ordering: TermOrdering = DEGLEX) -> int:
    """Three-way comparison: -1 if t1 < t2, 0 if equal, 1 if t1 > t2."""
    _check_dims(t1, t2)
    k1, k2 = ordering.key(t1), ordering.key(t2)
    return (k1 > k2) - (k1 < k2)


def is_closed(terms: Iterable[PowerProduct]) -> bool:
    members = set(terms)
    return all(d in members for t in members for d in t.divisors_by_var())


@dataclass(frozen=True)
class NormalSet:
    """A sigma-ascending order ideal of power products."""

    terms: tuple[PowerProduct, ...]
    ordering: TermOrdering = field(default=DEGLEX)

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        keys = [self.ordering.key(t) for t in terms]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("normal set terms must be strictly sigma-ascending")
        if terms and not terms[0].is_one():
            raise ClosednessError("non-empty normal set must start with 1")
        if not is_closed(terms):
            raise ClosednessError("normal set is not closed under division")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __contains__(self, t) -> bool:
        return t in set(self.terms)

    def format(self) -> str:
        return "{" + ", ".join(t.format() for t in self.terms) + "}"


def corner_set(N: NormalSet | Sequence[PowerProduct], ordering: TermOrdering | None = None) -> list[PowerProduct]:
    """Minimal power products outside the order ideal ``N``, sigma-ascending."""
    if isinstance(N, NormalSet):
        ordering = ordering or N.ordering
        terms = N.terms
    else:
        terms = tuple(N)
        ordering = ordering or DEGLEX
        if not is_closed(terms):
            raise ClosednessError("corner set requested for a non-closed set")
    if not terms:
        return []
    members = set(terms)
    s = terms[0].s
    out = set()
    for t in terms:
        for i in range(s):
            u = t.times_var(i)
            if u not in members and all(d in members for d in u.divisors_by_var()):
                out.add(u)
    return ordering.sorted(out)


class CandidatePool:
    """Sigma-ordered pool of pending terms for Buchberger-Moeller style loops.

    Multiples of already found leading terms are discarded lazily when they
    reach the front of the heap.
    """

    def __init__(self, s: int, ordering: TermOrdering = DEGLEX):
        self.s = s
        self.ordering = ordering
        self._heap: list[tuple[tuple, PowerProduct]] = []
        self._seen: set[PowerProduct] = set()
        self.leading: list[PowerProduct] = []
        self.push(PowerProduct.one(s))

    def push(self, t: PowerProduct) -> None:
        if t not in self._seen:
            self._seen.add(t)
            heapq.heappush(self._heap, (self.ordering.key(t), t))

    def mark_normal(self, t: PowerProduct) -> None:
        for i in range(self.s):
            self.push(t.times_var(i))

    def mark_leading(self, t: PowerProduct) -> None:
        self.leading.append(t)

    def pending(self) -> list[PowerProduct]:
        return [t for _, t in sorted(self._heap)]

    def pop(self) -> PowerProduct | None:
        while self._heap:
            _, t = heapq.heappop(self._heap)
            if not any(lt.divides(t) for lt in self.leading):
                return t
        return None


def next_candidate(pool: CandidatePool) -> PowerProduct | None:
    """Smallest pending term that is no multiple of a found leading term.

    Returns ``None`` once the pool is exhausted.
    """
    return pool.pop()
