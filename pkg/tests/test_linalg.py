import numpy as np
import pytest

from approxbm.linalg import least_squares, singular_values
from oracles import singular_values as svd_ref


def test_least_squares_matches_reference(rng):
    for _ in range(20):
        m, k = rng.integers(2, 9), rng.integers(1, 6)
        k = min(k, m)
        A = rng.normal(size=(m, k))
        b = rng.normal(size=m)
        sol = least_squares(A, b)
        ref, *_ = np.linalg.lstsq(A, b, rcond=None)
        np.testing.assert_allclose(sol.coefficients, ref, atol=1e-10)
        np.testing.assert_allclose(sol.residual, b - A @ ref, atol=1e-10)
        assert sol.relative_residual == pytest.approx(np.linalg.norm(b - A @ ref) / np.linalg.norm(b))
        assert not sol.rank_deficient


def test_exact_fit_has_zero_residual():
    A = np.array([[1.0, 1.0], [1.0, 2.0], [1.0, 3.0]])
    sol = least_squares(A, A @ [2.0, -1.0])
    np.testing.assert_allclose(sol.coefficients, [2, -1], atol=1e-14)
    assert sol.relative_residual < 1e-14


def test_rank_deficiency_flagged():
    A = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    sol = least_squares(A, np.array([1.0, 0.0, 0.0]))
    assert sol.rank == 1 and sol.rank_deficient
    assert np.all(np.isfinite(sol.coefficients))


def test_empty_columns_and_zero_rhs():
    sol = least_squares(np.zeros((3, 0)), np.array([3.0, 4.0, 0.0]))
    assert sol.coefficients.shape == (0,) and sol.relative_residual == 1.0
    assert least_squares(np.eye(3)[:, :2], np.zeros(3)).relative_residual == 0.0


def test_singular_values_match_svd(rng):
    for shape in [(8, 8), (8, 3), (2, 5), (1, 1)]:
        A = rng.normal(size=shape)
        spectrum = singular_values(A)
        ref = svd_ref(A)
        np.testing.assert_allclose(spectrum.singular_values, ref, rtol=1e-12)
        assert spectrum.condition_2 == pytest.approx(ref[0] / ref[-1], rel=1e-10)


def test_condition_of_singular_matrix_is_infinite():
    spectrum = singular_values(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert spectrum.sigma_min == pytest.approx(0, abs=1e-15) or spectrum.condition_2 > 1e15
