import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from approxbm.poly import (
    PointSet,
    Polynomial,
    RawPolynomial,
    differentiate,
    evaluate,
    evaluate_poly,
    evaluation_matrix,
    format_coefficients,
    monomial_matrix,
)
from approxbm.terms import DimensionError
from conftest import T
from oracles import eval_monomial


def test_pointset_is_readonly_and_validates():
    P = PointSet([[1, 2], [3, 4]], 0.1)
    assert (P.m, P.s, P.s0) == (2, 2, 0.1)
    with pytest.raises(ValueError):
        P.points[0, 0] = 5
    with pytest.raises(ValueError):
        PointSet([[1, 2]], -1.0)
    with pytest.raises(ValueError):
        PointSet([[1, np.nan]])


def test_evaluate_single():
    assert evaluate(T(2, 1), [3, 2]) == 18.0
    assert evaluate(T(0, 0), [7, 9]) == 1.0
    with pytest.raises(DimensionError):
        evaluate(T(1, 1), [1, 2, 3])


def test_evaluation_matrix_matches_direct_products(rng):
    pts = rng.uniform(-3, 3, size=(6, 3))
    terms = [T(0, 0, 0), T(0, 0, 1), T(2, 1, 0), T(3, 0, 4), T(1, 1, 1)]
    M = evaluation_matrix(terms, PointSet(pts))
    ref = np.array([[eval_monomial(t.exponents, p) for t in terms] for p in pts])
    assert M.shape == (6, 5)
    np.testing.assert_allclose(M.entries, ref, rtol=1e-14)


def test_polynomial_from_tail_and_format():
    g = Polynomial.from_tail(T(0, 3), [T(0, 0), T(0, 1), T(0, 2)], [6.0, -11.0, 6.0])
    assert g.format() == "y^3 - 6y^2 + 11y - 6"
    np.testing.assert_allclose(g.tail_coefficients([T(0, 0), T(0, 1), T(0, 2)]), [6, -11, 6])
    np.testing.assert_allclose(evaluate_poly(g, [[0, 1], [0, 2], [0, 3]]), 0, atol=1e-13)


def test_polynomial_must_be_monic_with_lower_tail():
    with pytest.raises(ValueError):
        Polynomial({T(0, 1): 2.0, T(0, 0): 1.0}, T(0, 1))
    with pytest.raises(ValueError):
        Polynomial({T(0, 1): 1.0, T(1, 0): 1.0}, T(0, 1))


def test_format_trims_and_signs():
    assert format_coefficients([(T(1, 0), 1.0), (T(0, 1), -2.05), (T(0, 0), 1.0666667)]) == (
        "x - 2.05y + 1.06667"
    )
    assert RawPolynomial({}, 2).format() == "0"


def test_differentiate():
    g = RawPolynomial({T(2, 1): 3.0, T(0, 1): -1.0, T(0, 0): 4.0}, 2)
    dx = differentiate(g, 0)
    dy = differentiate(g, 1)
    assert dx.support == {T(1, 1): 6.0}
    assert dy.support == {T(2, 0): 3.0, T(0, 0): -1.0}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.integers(0, 5), st.integers(0, 5))
def test_monomial_multiplicativity(p, a, b):
    t1, t2 = T(a, b), T(b, a)
    v = monomial_matrix([t1, t2, t1 * t2], [p])[0]
    assert v[2] == pytest.approx(v[0] * v[1], rel=1e-12, abs=1e-300)
