"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names (``monomial_values``, ``householder_lstsq``,
``jacobi_singular_values``) dispatch to the numba versions unless numba is
missing or disabled through ``APPROXBM_DISABLE_NUMBA``.  Both flavours run
the same algorithm in the same operation order, so they agree to rounding
(the monomial kernel agrees bit for bit).
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "BACKEND",
    "monomial_values",
    "householder_lstsq",
    "jacobi_singular_values",
]

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


# --------------------------------------------------------------------------
# monomial evaluation


def _numpy_monomial_values(points, exponents):
    """Evaluate every power product at every point.

    ``points`` is (m, s) float, ``exponents`` is (k, s) int; returns (m, k).
    Powers use repeated squaring per variable; 0**0 == 1.
    """
    m, s = points.shape
    k = exponents.shape[0]
    if k <= 4:
        return _numpy_monomial_columns(points, exponents)
    out = np.ones((m, k))
    for v in range(s):
        e = exponents[:, v].astype(np.int64)
        if not e.any():
            continue
        pw = np.ones((m, k))
        base = np.repeat(points[:, v : v + 1], k, axis=1)
        while e.any():
            odd = (e & 1).astype(bool)
            pw[:, odd] *= base[:, odd]
            e = e >> 1
            live = e > 0
            base[:, live] = base[:, live] * base[:, live]
        out *= pw
    return out


def _numpy_monomial_columns(points, exponents):
    # few terms: one column at a time is cheaper than masked updates
    m, s = points.shape
    out = np.ones((m, exponents.shape[0]))
    for j, row in enumerate(exponents.tolist()):
        acc = None
        for v, e in enumerate(row):
            if e == 0:
                continue
            base = points[:, v]
            pw = None
            while e > 0:
                if e & 1:
                    pw = base if pw is None else pw * base
                e >>= 1
                if e > 0:
                    base = base * base
            acc = pw if acc is None else acc * pw
        if acc is not None:
            out[:, j] = acc
    return out


@njit(cache=True)
def _numba_monomial_values(points, exponents):
    m, s = points.shape
    k = exponents.shape[0]
    out = np.ones((m, k))
    for i in range(m):
        for j in range(k):
            acc = 1.0
            for v in range(s):
                e = exponents[j, v]
                if e == 0:
                    continue
                base = points[i, v]
                pw = 1.0
                while e > 0:
                    if e & 1:
                        pw *= base
                    e >>= 1
                    if e > 0:
                        base *= base
                acc *= pw
            out[i, j] = acc
    return out


# --------------------------------------------------------------------------
# Householder least squares with column pivoting


def _numpy_householder_lstsq(A, b, rank_tol):
    """Solve min ||b - A x||_2 by Householder QR with column pivoting.

    Returns ``(x, rank)``.  Columns whose pivot falls below ``rank_tol`` are
    treated as dependent and their components of ``x`` are set to zero.
    """
    m, k = A.shape
    R = A.astype(np.float64).copy()
    y = b.astype(np.float64).copy()
    perm = np.arange(k)
    rank = min(m, k)
    for j in range(min(m, k)):
        sub = R[j:, j:]
        norms = np.sqrt(np.einsum("ij,ij->j", sub, sub))
        q = int(np.argmax(norms))
        if q:
            p = j + q
            R[:, [j, p]] = R[:, [p, j]]
            perm[j], perm[p] = perm[p], perm[j]
        alpha = float(norms[q])
        if alpha <= rank_tol:
            rank = j
            break
        v = R[j:, j].copy()
        v[0] += alpha if v[0] >= 0.0 else -alpha
        vv = float(v @ v)
        sub -= v[:, None] * ((2.0 / vv) * (v @ sub))
        y[j:] -= (2.0 * float(v @ y[j:]) / vv) * v
    z = np.zeros(k)
    for i in range(rank - 1, -1, -1):
        z[i] = (y[i] - R[i, i + 1 : rank] @ z[i + 1 : rank]) / R[i, i]
    x = np.zeros(k)
    x[perm] = z
    return x, rank


@njit(cache=True)
def _numba_householder_lstsq(A, b, rank_tol):
    m, k = A.shape
    R = A.astype(np.float64).copy()
    y = b.astype(np.float64).copy()
    perm = np.arange(k)
    kk = min(m, k)
    rank = kk
    v = np.empty(m)
    for j in range(kk):
        best = -1.0
        p = j
        for c in range(j, k):
            acc = 0.0
            for i in range(j, m):
                acc += R[i, c] * R[i, c]
            nrm = np.sqrt(acc)
            if nrm > best:
                best = nrm
                p = c
        if p != j:
            for i in range(m):
                tmp = R[i, j]
                R[i, j] = R[i, p]
                R[i, p] = tmp
            t = perm[j]
            perm[j] = perm[p]
            perm[p] = t
        alpha = best
        if alpha <= rank_tol:
            rank = j
            break
        vv = 0.0
        for i in range(j, m):
            v[i] = R[i, j]
        if v[j] >= 0.0:
            v[j] += alpha
        else:
            v[j] -= alpha
        for i in range(j, m):
            vv += v[i] * v[i]
        for c in range(j, k):
            acc = 0.0
            for i in range(j, m):
                acc += v[i] * R[i, c]
            f = 2.0 * acc / vv
            for i in range(j, m):
                R[i, c] -= f * v[i]
        acc = 0.0
        for i in range(j, m):
            acc += v[i] * y[i]
        f = 2.0 * acc / vv
        for i in range(j, m):
            y[i] -= f * v[i]
    z = np.zeros(k)
    for i in range(rank - 1, -1, -1):
        acc = y[i]
        for c in range(i + 1, rank):
            acc -= R[i, c] * z[c]
        z[i] = acc / R[i, i]
    x = np.zeros(k)
    for c in range(k):
        x[perm[c]] = z[c]
    return x, rank


# --------------------------------------------------------------------------
# one-sided Jacobi singular values


def _numpy_jacobi_singular_values(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Singular values of ``A`` (non-increasing) by one-sided Jacobi."""
    U = A.astype(np.float64).copy()
    if U.shape[0] < U.shape[1]:
        U = U.T.copy()
    n = U.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = U[:, i] @ U[:, i]
                beta = U[:, j] @ U[:, j]
                gamma = U[:, i] @ U[:, j]
                if alpha == 0.0 or beta == 0.0:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                ui = U[:, i].copy()
                U[:, i] = c * ui - s * U[:, j]
                U[:, j] = s * ui + c * U[:, j]
        if not rotated:
            break
    sv = np.sqrt(np.sum(U * U, axis=0))
    return np.sort(sv)[::-1]


@njit(cache=True)
def _numba_jacobi_singular_values(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    if A.shape[0] < A.shape[1]:
        U = A.T.astype(np.float64).copy()
    else:
        U = A.astype(np.float64).copy()
    m, n = U.shape
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for r in range(m):
                    alpha += U[r, i] * U[r, i]
                    beta += U[r, j] * U[r, j]
                    gamma += U[r, i] * U[r, j]
                if alpha == 0.0 or beta == 0.0:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for r in range(m):
                    ui = U[r, i]
                    uj = U[r, j]
                    U[r, i] = c * ui - s * uj
                    U[r, j] = s * ui + c * uj
        if not rotated:
            break
    sv = np.empty(n)
    for c in range(n):
        acc = 0.0
        for r in range(m):
            acc += U[r, c] * U[r, c]
        sv[c] = np.sqrt(acc)
    return np.sort(sv)[::-1]


if USE_NUMBA:
    BACKEND = "numba"
    monomial_values = _numba_monomial_values
    householder_lstsq = _numba_householder_lstsq
    jacobi_singular_values = _numba_jacobi_singular_values
else:
    BACKEND = "numpy"
    monomial_values = _numpy_monomial_values
    householder_lstsq = _numpy_householder_lstsq
    jacobi_singular_values = _numpy_jacobi_singular_values
