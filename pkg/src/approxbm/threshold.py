"""Threshold heuristics and the acceptance checks on an ABM output."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .bm import EXACT_TOL, AbmResult, ResidualRecord, abm, residual_table
from .newton import RefinementOutcome, gauss_newton
from .poly import PointSet, evaluate_poly, monomial_matrix
from .terms import DEGLEX, TermOrdering

__all__ = [
    "P3Status",
    "Verdict",
    "P3Outcome",
    "ThresholdReport",
    "ThresholdSelection",
    "candidate_thresholds",
    "check_p1",
    "check_p2",
    "check_p3",
    "evaluate_threshold",
    "select_threshold",
]

VANISH_RTOL = 1e-10
DEFAULT_GAMMA = 2.0
MAX_RUNS = 50


class P3Status(str, Enum):
    EXACT_VANISH = "exact_vanish"
    NEWTON_VERIFIED = "newton_verified"
    FAILED = "failed"


class Verdict(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    DEGENERATE_SUSPECTED = "degenerate_suspected"


@dataclass(frozen=True, eq=False)
class P3Outcome:
    status: P3Status
    refinement: RefinementOutcome | None = None
    max_shift: float = 0.0


@dataclass(frozen=True, eq=False)
class ThresholdReport:
    epsilon: float
    gamma: float
    p1: bool
    p2: bool
    p3: P3Outcome
    normal_margin: float
    leading_margin: float
    verdict: Verdict


@dataclass(frozen=True, eq=False)
class ThresholdSelection:
    verdict: Verdict
    result: AbmResult | None
    report: ThresholdReport | None
    reports: tuple[ThresholdReport, ...] = field(default=())
    results: tuple[AbmResult, ...] = field(default=())


def _residual_values(table: Iterable) -> list[float]:
    vals = []
    for rec in table:
        if isinstance(rec, ResidualRecord):
            if not rec.span_terms:
                continue  # constant term: conventional residual, no fit
            vals.append(rec.relative_residual)
        else:
            vals.append(float(rec))
    return vals


def candidate_thresholds(table: Iterable) -> list[float]:
    """Geometric means of consecutive residuals, widest relative gap first.

    ``table`` holds residual records (or bare residual values).  Only
    distinct positive residuals count.  With a single residual r the only
    candidate is r/10; with none the list is empty.
    """
    r = sorted({v for v in _residual_values(table) if v > 0.0})
    if not r:
        return []
    if len(r) == 1:
        return [r[0] / 10.0]
    pairs = [(r[i + 1] / r[i], -i, math.sqrt(r[i] * r[i + 1])) for i in range(len(r) - 1)]
    pairs.sort(reverse=True)
    return [c for _, _, c in pairs]


def check_p1(result: AbmResult, m: int | None = None) -> bool:
    m = result.points.m if m is None else m
    return len(result.normal_set) == m


def _margins(result: AbmResult) -> tuple[float, float]:
    eps = result.epsilon
    normal = [r.relative_residual for r in result.log if r.is_normal]
    leading = [r.relative_residual for r in result.log if not r.is_normal]
    nm = min((v / eps if eps > 0 else math.inf) for v in normal) if normal else math.inf
    lm = min((eps / v if v > 0 else math.inf) for v in leading) if leading else math.inf
    return nm, lm


def check_p2(result: AbmResult, gamma: float = DEFAULT_GAMMA) -> bool:
    """Every residual sits a factor ``gamma`` away from the threshold."""
    if gamma <= 1.0:
        raise ValueError("gamma must exceed 1")
    eps = result.epsilon
    for rec in result.log:
        if rec.is_normal and rec.relative_residual < gamma * eps:
            return False
        if not rec.is_normal and rec.relative_residual > eps / gamma:
            return False
    return True


def check_p3(
    result: AbmResult,
    Pbar: PointSet | None = None,
    max_iter: int = 50,
    step_tol: float = 1e-10,
) -> P3Outcome:
    """Does the normal set belong to a basis of some admissible point set?

    If the basis vanishes on the points the answer is immediate.  Otherwise
    the points are refined with Gauss-Newton on the basis polynomials and
    must stay distinct, converge, and move at most ``s0`` per coordinate.
    """
    Pbar = result.points if Pbar is None else Pbar
    if not result.basis:
        return P3Outcome(P3Status.EXACT_VANISH)
    vanish = True
    for g in result.basis:
        lead = monomial_matrix([g.leading_term], Pbar)[:, 0]
        if np.linalg.norm(evaluate_poly(g, Pbar)) > VANISH_RTOL * np.linalg.norm(lead):
            vanish = False
            break
    if vanish:
        return P3Outcome(P3Status.EXACT_VANISH)
    out = gauss_newton(list(result.basis), Pbar, max_iter=max_iter, step_tol=step_tol)
    shift = out.max_shift()
    ok = out.all_converged and out.distinct_count == Pbar.m and shift <= Pbar.s0
    return P3Outcome(P3Status.NEWTON_VERIFIED if ok else P3Status.FAILED, out, shift)


def evaluate_threshold(
    Pbar: PointSet,
    epsilon: float,
    ordering: TermOrdering = DEGLEX,
    gamma: float = DEFAULT_GAMMA,
    max_iter: int = 50,
    step_tol: float = 1e-10,
) -> tuple[AbmResult, ThresholdReport]:
    result = abm(Pbar, ordering, epsilon)
    p1 = check_p1(result, Pbar.m)
    p2 = check_p2(result, gamma)
    p3 = check_p3(result, Pbar, max_iter, step_tol) if p1 else P3Outcome(P3Status.FAILED)
    nm, lm = _margins(result)
    ok = p1 and p2 and p3.status is not P3Status.FAILED
    report = ThresholdReport(
        float(epsilon), float(gamma), p1, p2, p3, nm, lm, Verdict.ACCEPTED if ok else Verdict.REJECTED
    )
    return result, report


def select_threshold(
    Pbar: PointSet,
    ordering: TermOrdering = DEGLEX,
    gamma: float = DEFAULT_GAMMA,
    max_iter: int = 50,
    step_tol: float = 1e-10,
    table: Sequence[ResidualRecord] | None = None,
    max_runs: int = MAX_RUNS,
) -> ThresholdSelection:
    """Try candidate thresholds until one passes P1, P2 and P3.

    Candidates start from the exact BM residuals.  Each rejected run adds
    the residuals it met to the pool, and the next candidate is the widest
    untried gap of the enlarged pool.  When the gaps are used up, a
    threshold a decade below the smallest residual is tried last.
    """
    pool = set(_residual_values(table if table is not None else residual_table(Pbar, ordering)))
    tried: list[float] = []
    reports: list[ThresholdReport] = []
    results: list[AbmResult] = []
    while len(tried) < max_runs:
        cands = [c for c in candidate_thresholds(pool) if c not in tried]
        if not cands:
            # last resort: below every residual, i.e. exact BM behaviour
            positive = [v for v in pool if v > 0.0]
            low = min(positive) / 10.0 if positive else EXACT_TOL
            if low in tried:
                break
            cands = [low]
        eps = cands[0]
        tried.append(eps)
        result, report = evaluate_threshold(Pbar, eps, ordering, gamma, max_iter, step_tol)
        reports.append(report)
        results.append(result)
        if report.verdict is Verdict.ACCEPTED:
            return ThresholdSelection(Verdict.ACCEPTED, result, report, tuple(reports), tuple(results))
        pool |= set(_residual_values(result.log))
    return ThresholdSelection(Verdict.DEGENERATE_SUSPECTED, None, None, tuple(reports), tuple(results))
