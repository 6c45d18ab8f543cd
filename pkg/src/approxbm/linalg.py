"""Dense least squares and singular values for small matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = ["LeastSquaresSolution", "SpectrumSummary", "least_squares", "singular_values", "RANK_RTOL"]

RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class LeastSquaresSolution:
    coefficients: np.ndarray
    residual: np.ndarray
    relative_residual: float
    rank: int

    @property
    def rank_deficient(self) -> bool:
        return self.rank < self.coefficients.shape[0]


@dataclass(frozen=True, eq=False)
class SpectrumSummary:
    singular_values: np.ndarray

    @property
    def sigma_max(self) -> float:
        return float(self.singular_values[0])

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    @property
    def condition_2(self) -> float:
        if self.sigma_min == 0.0:
            return math.inf
        return self.sigma_max / self.sigma_min


def least_squares(A, b) -> LeastSquaresSolution:
    """Minimise ``||b - A x||_2`` with Householder QR (column pivoting).

    A pivot below ``RANK_RTOL * ||A||_F`` marks the matrix rank deficient; the
    corresponding free components of ``x`` are zero.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).ravel()
    m = b.shape[0]
    if A.ndim != 2 or A.shape[0] != m:
        A = A.reshape(m, -1)
    k = A.shape[1]
    bnorm = math.sqrt(float(b @ b))
    if k == 0:
        x = np.zeros(0)
        rank = 0
    else:
        tol = RANK_RTOL * math.sqrt(float(np.sum(A * A)))
        x, rank = kernels.householder_lstsq(np.ascontiguousarray(A), b, tol)
    r = b - A @ x if k else b.copy()
    rel = math.sqrt(float(r @ r)) / bnorm if bnorm > 0.0 else 0.0
    return LeastSquaresSolution(x, r, rel, int(rank))


def singular_values(A) -> SpectrumSummary:
    """Singular values (non-increasing) via one-sided Jacobi rotations."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or min(A.shape) < 1:
        raise ValueError("singular_values needs a non-empty 2-d matrix")
    return SpectrumSummary(kernels.jacobi_singular_values(np.ascontiguousarray(A)))
