"""Extended basis over the full normal set, pseudozero tolerances and
first-order perturbation diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bm import AbmResult
from .linalg import SpectrumSummary, least_squares, singular_values
from .poly import PointSet, Polynomial, RawPolynomial, evaluate_poly, monomial_matrix
from .terms import NormalSet, PowerProduct, corner_set

__all__ = [
    "SingularNormalSetError",
    "ExtendedBasisElement",
    "CoefficientGap",
    "PseudozeroEntry",
    "PseudozeroCertificate",
    "PerturbationDiagnostics",
    "extended_basis",
    "coefficient_gap",
    "pseudozero_certificate",
    "perturbation_diagnostics",
    "sensitivity_bound",
    "max_relative_error",
]

SINGULAR_RTOL = 1e-12


class SingularNormalSetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ExtendedBasisElement:
    corner_term: PowerProduct
    normal_terms: tuple[PowerProduct, ...]
    coefficients: np.ndarray
    polynomial: RawPolynomial


@dataclass(frozen=True)
class CoefficientGap:
    delta_c_norm: float
    ratio: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.ratio <= self.bound


@dataclass(frozen=True, eq=False)
class PseudozeroEntry:
    index: int
    delta: float
    max_deviation: float
    witness: ExtendedBasisElement


@dataclass(frozen=True, eq=False)
class PseudozeroCertificate:
    entries: tuple[PseudozeroEntry, ...]
    support_set: tuple[PowerProduct, ...]
    sigma_min: float
    spectrum: SpectrumSummary


@dataclass(frozen=True)
class PerturbationDiagnostics:
    epsilon_t: float
    epsilon_M: float
    k2: float
    delta_R: float
    degree: int
    k: int
    d_M: int
    bound_eps_t: float
    bound_eps_M: float
    sensitivity_bound: float | None


def _square_matrix(Pbar: PointSet, N: Sequence[PowerProduct]) -> tuple[np.ndarray, SpectrumSummary]:
    if len(N) != Pbar.m:
        raise SingularNormalSetError(
            f"N is not a normal set for P: {len(N)} terms for {Pbar.m} points"
        )
    M = monomial_matrix(list(N), Pbar)
    spectrum = singular_values(M)
    if not spectrum.sigma_min > SINGULAR_RTOL * spectrum.sigma_max:
        raise SingularNormalSetError("N is not a normal set for P: evaluation matrix is singular")
    return M, spectrum


def _element(t: PowerProduct, N: tuple[PowerProduct, ...], c: np.ndarray) -> ExtendedBasisElement:
    support = {t: 1.0}
    for u, cj in zip(N, c):
        support[u] = support.get(u, 0.0) - float(cj)
    return ExtendedBasisElement(t, N, c, RawPolynomial(support, t.s))


def extended_basis(Pbar: PointSet, N: NormalSet) -> list[ExtendedBasisElement]:
    """One polynomial per corner term, fitted exactly over all of ``N``."""
    terms = tuple(N.terms)
    M, _ = _square_matrix(Pbar, terms)
    out = []
    for t in corner_set(N):
        rhs = monomial_matrix([t], Pbar)[:, 0]
        out.append(_element(t, terms, least_squares(M, rhs).coefficients))
    return out


def _padded(g: Polynomial, N: Sequence[PowerProduct]) -> np.ndarray:
    return g.tail_coefficients(N)


def coefficient_gap(
    abm_poly: Polynomial, ext: ExtendedBasisElement, spectrum: SpectrumSummary, epsilon: float
) -> CoefficientGap:
    """Distance between an ABM polynomial and its extended-basis partner."""
    if abm_poly.leading_term != ext.corner_term:
        raise ValueError("polynomials belong to different corner terms")
    dc = ext.coefficients - _padded(abm_poly, ext.normal_terms)
    dn = float(np.linalg.norm(dc))
    ce = float(np.linalg.norm(ext.coefficients))
    ratio = dn / ce if ce > 0 else (0.0 if dn == 0 else math.inf)
    return CoefficientGap(dn, ratio, float(epsilon) * spectrum.condition_2)


def pseudozero_certificate(result: AbmResult, Pbar: PointSet | None = None) -> PseudozeroCertificate:
    """Tolerances under which the points are exact zeros of nearby polynomials.

    For basis polynomial g_i the tolerance is ``||g_i(P)|| / sigma_min`` and
    the witness is the extended-basis polynomial obtained by correcting the
    coefficients of g_i with ``M^-1 g_i(P)``.
    """
    Pbar = result.points if Pbar is None else Pbar
    N = tuple(result.normal_set.terms)
    M, spectrum = _square_matrix(Pbar, N)
    entries = []
    for i, g in enumerate(result.basis):
        defect = evaluate_poly(g, Pbar)
        delta = float(np.linalg.norm(defect)) / spectrum.sigma_min
        cbar = _padded(g, N)
        dc = least_squares(M, defect).coefficients
        witness = _element(g.leading_term, N, cbar + dc)
        dev = float(np.max(np.abs(witness.coefficients - cbar))) if N else 0.0
        entries.append(PseudozeroEntry(i, delta, dev, witness))
    support = tuple(N) + tuple(corner_set(result.normal_set))
    return PseudozeroCertificate(tuple(entries), support, spectrum.sigma_min, spectrum)


def sensitivity_bound(k2: float, eps_t: float, eps_M: float) -> float | None:
    """First-order bound on the relative coefficient change, if defined."""
    if not eps_M * k2 < 1.0:
        return None
    return k2 / (1.0 - eps_M * k2) * (eps_t + eps_M)


def max_relative_error(Pbar: PointSet, Pref: PointSet) -> float:
    """Largest componentwise |pbar - p| / |p|, with a floor at zero coordinates."""
    a, b = Pbar.points, Pref.points
    if a.shape != b.shape:
        raise ValueError("point sets differ in size or dimension")
    scale = float(np.max(np.abs(b))) if b.size else 0.0
    floor = 1e-8 * scale if scale > 0 else 1e-300
    denom = np.maximum(np.abs(b), floor)
    return float(np.max(np.abs(a - b) / denom))


def perturbation_diagnostics(
    Pbar: PointSet, Pref: PointSet, term: PowerProduct, normal_terms: Sequence[PowerProduct]
) -> PerturbationDiagnostics:
    """Measured and bounded sensitivity of one least-squares fit.

    ``Pref`` plays the unperturbed points; ``Pbar`` is the perturbed copy.
    """
    if Pbar.points.shape != Pref.points.shape:
        raise ValueError("point sets differ in size or dimension")
    dR = max_relative_error(Pbar, Pref)
    tb = monomial_matrix([term], Pbar)[:, 0]
    tr = monomial_matrix([term], Pref)[:, 0]
    eps_t = float(np.linalg.norm(tb - tr) / np.linalg.norm(tr))
    terms = list(normal_terms)
    k = len(terms)
    d_M = max((t.degree for t in terms), default=0)
    if k:
        Mb = monomial_matrix(terms, Pbar)
        Mr = monomial_matrix(terms, Pref)
        dM = Mb - Mr
        norm_dM = singular_values(dM).sigma_max if np.any(dM) else 0.0
        eps_M = norm_dM / singular_values(Mr).sigma_max
        k2 = singular_values(Mb).condition_2
    else:
        eps_M, k2 = 0.0, 1.0
    return PerturbationDiagnostics(
        epsilon_t=eps_t,
        epsilon_M=float(eps_M),
        k2=float(k2),
        delta_R=dR,
        degree=term.degree,
        k=k,
        d_M=d_M,
        bound_eps_t=term.degree * dR,
        bound_eps_M=math.sqrt(k) * d_M * dR,
        sensitivity_bound=sensitivity_bound(k2, eps_t, eps_M),
    )
