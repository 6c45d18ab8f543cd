"""Both kernel backends must agree; the compiled one is skipped without numba."""

import numpy as np
import pytest

from approxbm import kernels
from approxbm._accel import HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_monomials_bit_identical(rng):
    pts = rng.uniform(-3, 3, size=(8, 3))
    E = rng.integers(0, 7, size=(20, 3)).astype(np.int64)
    for cols in (E, E[:3], E[:1]):
        a = kernels._numpy_monomial_values(pts, cols)
        b = kernels._numba_monomial_values(pts, cols)
        assert np.array_equal(a, b)


@needs_numba
def test_lstsq_backends_agree(rng):
    for i in range(12):
        A = rng.normal(size=(7, 4))
        deficient = i % 3 == 0
        if deficient:
            A[:, 3] = A[:, 0] + A[:, 1]
        b = rng.normal(size=7)
        tol = 1e-12 * np.linalg.norm(A)
        x1, r1 = kernels._numpy_householder_lstsq(A, b, tol)
        x2, r2 = kernels._numba_householder_lstsq(A, b, tol)
        assert r1 == r2 == (3 if deficient else 4)
        if deficient:
            # pivot ties may pick different basic columns; the fit is the same
            np.testing.assert_allclose(A @ x1, A @ x2, atol=1e-12)
        else:
            np.testing.assert_allclose(x1, x2, rtol=1e-12, atol=1e-12)


@needs_numba
def test_jacobi_backends_agree(rng):
    for shape in [(8, 8), (5, 2), (2, 6)]:
        A = rng.normal(size=shape)
        np.testing.assert_allclose(
            kernels._numpy_jacobi_singular_values(A),
            kernels._numba_jacobi_singular_values(A),
            rtol=1e-13,
        )


def test_backend_flag_consistent():
    assert kernels.BACKEND in ("numba", "numpy")
    if not HAVE_NUMBA:
        assert kernels.BACKEND == "numpy"


def test_numpy_fallback_selected_by_env(tmp_path):
    import os
    import subprocess
    import sys

    env = dict(os.environ, APPROXBM_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import approxbm; print(approxbm.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
