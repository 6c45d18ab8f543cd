import numpy as np
import pytest

from approxbm.bm import (
    Classification,
    DuplicatePointsError,
    abm,
    buchberger_moller,
    check_structure,
    residual_table,
)
from approxbm.poly import PointSet, evaluate_poly
from approxbm.terms import corner_set
from conftest import T, assert_coeffs
from oracles import exact_normal_set


def test_exact_collinear_basis(collinear):
    res = buchberger_moller(collinear)
    assert list(res.normal_set) == [T(0, 0), T(0, 1), T(0, 2)]
    assert len(res.basis) == 2
    assert_coeffs(res.basis[0], {(1, 0): 1, (0, 1): -2, (0, 0): 1}, 1e-9)
    assert_coeffs(res.basis[1], {(0, 3): 1, (0, 2): -6, (0, 1): 11, (0, 0): -6}, 1e-9)


def test_perturbed_collinear_basis(collinear_perturbed):
    res = buchberger_moller(collinear_perturbed)
    assert list(res.normal_set) == [T(0, 0), T(0, 1), T(1, 0)]
    expected = [
        {(0, 2): 1, (1, 0): -20, (0, 1): 37, (0, 0): -18},
        {(1, 1): 1, (1, 0): -43, (0, 1): 81, (0, 0): -39},
        {(2, 0): 1, (1, 0): -90.1, (0, 1): 172.2, (0, 0): -83.1},
    ]
    for g, e in zip(res.basis, expected):
        assert_coeffs(g, e, 1e-9)


def test_raw_near_line_basis(near_line_raw):
    res = buchberger_moller(near_line_raw)
    expected = [
        {(1, 1): 1, (0, 2): -0.97550, (1, 0): 1.45450, (0, 1): -2.48031, (0, 0): -1.54307},
        {(2, 0): 1, (0, 2): -0.95161, (1, 0): 0.89208, (0, 1): -2.94110, (0, 0): -2.07192},
        {(0, 3): 1, (0, 2): 0.64549, (1, 0): 91.31103, (0, 1): -98.56564, (0, 0): -92.83385},
    ]
    assert len(res.basis) == 3
    for g, e in zip(res.basis, expected):
        assert_coeffs(g, e, 1e-4)


def test_raw_symmetric_basis(symmetric_raw):
    res = buchberger_moller(symmetric_raw)
    lead = {g.leading_term.exponents: g for g in res.basis}
    assert set(lead) == {(2, 1), (3, 0), (0, 4), (1, 3)}
    assert_coeffs(lead[(2, 1)], {
        (2, 1): 1, (1, 2): -0.00164, (0, 3): 0.52911, (2, 0): 0.15329, (1, 1): -0.01032,
        (0, 2): 0.05231, (1, 0): -0.02767, (0, 1): -8.75015, (0, 0): -1.47114}, 1e-4)
    assert_coeffs(lead[(0, 4)], {
        (0, 4): 1, (1, 2): -2.50589, (0, 3): -0.34459, (2, 0): -178.88212, (1, 1): 1.01537,
        (0, 2): -117.12255, (1, 0): 17.87987, (0, 1): 11.35992, (0, 0): 1663.42803}, 1e-3)


def test_reference_symmetric_points_basis():
    r = 2.4
    P = PointSet([[0, 4], [0, -4], [3, 0], [-3, 0], [r, r], [-r, -r], [r, -r], [-r, r]])
    res = buchberger_moller(P)
    assert [t.exponents for t in res.normal_set] == [
        (0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (0, 3), (1, 2), (0, 4)]
    assert_coeffs(res.basis[0], {(2, 0): 1, (0, 2): 0.5625, (0, 0): -9}, 1e-9)
    assert_coeffs(res.basis[1], {(1, 3): 1, (1, 1): -5.76}, 1e-9)
    assert_coeffs(res.basis[2], {(0, 5): 1, (0, 3): -21.76, (0, 1): 92.16}, 1e-9)


def test_zero_threshold_equals_exact(collinear, collinear_perturbed):
    for P in (collinear, collinear_perturbed):
        a, b = abm(P, epsilon=0.0), buchberger_moller(P)
        assert list(a.normal_set) == list(b.normal_set)
        for g, h in zip(a.basis, b.basis):
            assert g.leading_term == h.leading_term


def test_threshold_branches_on_perturbed_collinear(collinear_perturbed):
    two = abm(collinear_perturbed, epsilon=0.05)
    one = abm(collinear_perturbed, epsilon=0.2)
    line = {(1, 0): 1, (0, 1): -2.05, (0, 0): 1.0 + 1 / 15}
    assert_coeffs(two.basis[0], line, 1e-3)
    assert_coeffs(two.basis[1], {(0, 3): 1, (0, 2): -6, (0, 1): 11, (0, 0): -6}, 1e-3)
    assert_coeffs(one.basis[0], line, 1e-3)
    assert_coeffs(one.basis[1], {(0, 2): 1, (0, 1): -4, (0, 0): 10 / 3}, 1e-3)


def test_near_line_abm(near_line):
    res = abm(near_line, epsilon=0.1)
    assert [t.exponents for t in res.normal_set] == [(0, 0), (0, 1), (0, 2), (0, 3)]
    assert_coeffs(res.basis[0], {(1, 0): 1, (0, 1): -0.99979, (0, 0): -1.02989}, 1e-4)
    assert_coeffs(res.basis[1], {
        (0, 4): 1, (0, 3): 2.06, (0, 2): -8.45012, (0, 1): -9.43141, (0, 0): 6.35026}, 1e-4)


def test_structure_invariants(symmetric):
    for eps in (0.0, 0.05, 0.1, 0.3):
        res = abm(symmetric, epsilon=eps)
        check_structure(res)
        assert res.leading_terms == corner_set(res.normal_set)
        assert len(res.normal_set) <= symmetric.m


def test_normal_set_shrinks_with_threshold(symmetric):
    sizes = [len(abm(symmetric, epsilon=e).normal_set) for e in (0.0, 0.05, 0.1, 0.5, 0.9)]
    assert sizes == sorted(sizes, reverse=True)


def test_log_records_every_candidate(collinear_perturbed):
    res = abm(collinear_perturbed, epsilon=0.05)
    log = {r.term.exponents: r for r in res.log}
    assert log[(0, 0)].classification is Classification.NORMAL
    assert log[(1, 0)].classification is Classification.LEADING
    assert log[(1, 0)].relative_residual == pytest.approx(0.0068032, abs=1e-6)


def test_residual_table_values(collinear_perturbed):
    table = {r.term.exponents: r.relative_residual for r in residual_table(collinear_perturbed)}
    assert table[(0, 1)] == pytest.approx(np.sqrt(1 / 7), rel=1e-12)
    assert table[(1, 0)] == pytest.approx(0.0068032, abs=1e-6)
    # y^2 is only tested once x has become a leading term
    log = {r.term.exponents: r.relative_residual for r in abm(collinear_perturbed, epsilon=0.05).log}
    assert log[(0, 2)] == pytest.approx(0.0824786, abs=1e-6)


def test_duplicates_rejected():
    with pytest.raises(DuplicatePointsError):
        buchberger_moller(PointSet([[1, 2], [1, 2]]))


def test_bm_basis_vanishes(symmetric_raw):
    res = buchberger_moller(symmetric_raw)
    for g in res.basis:
        lead = np.abs(evaluate_poly(g.as_raw(), symmetric_raw)).max()
        assert lead < 1e-9 * sum(abs(c) for c in g.support.values())


def test_exact_oracle_on_small_sets(rng):
    for _ in range(10):
        pts = rng.integers(-3, 4, size=(5, 2)).astype(float)
        if len({tuple(p) for p in pts}) < 5:
            continue
        res = buchberger_moller(PointSet(pts))
        assert [t.exponents for t in res.normal_set] == exact_normal_set(pts.tolist())
