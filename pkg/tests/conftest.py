import numpy as np
import pytest

from approxbm.poly import PointSet
from approxbm.preprocess import preprocess
from approxbm.terms import PowerProduct

COLLINEAR = [[1.0, 1.0], [3.0, 2.0], [5.0, 3.0]]
COLLINEAR_PERTURBED = [[1.0, 1.0], [3.0, 2.0], [5.1, 3.0]]
NEAR_LINE = [[-2.45, -3.6], [-0.53, -1.45], [1.5, 0.45], [3.5, 2.5]]
SYMMETRIC_EIGHT = [
    [0.0, 4.1],
    [0.05, -4.03],
    [3.1, 0.1],
    [-3.0, 0.03],
    [2.37, 2.5],
    [-2.4, -2.33],
    [2.31, -2.486],
    [-2.4, 2.4],
]


def T(*e):
    return PowerProduct(tuple(e))


def coeff_map(g):
    """{exponents: coefficient} for a polynomial's support."""
    return {t.exponents: float(c) for t, c in g.support.items()}


def assert_coeffs(g, expected, atol):
    """Coefficients match ``expected``; terms absent there must be ~0."""
    got = coeff_map(g)
    for e in set(got) | set(expected):
        a, b = got.get(e, 0.0), expected.get(e, 0.0)
        assert abs(a - b) <= atol, (e, a, b)


@pytest.fixture
def collinear():
    return PointSet(COLLINEAR)


@pytest.fixture
def collinear_perturbed():
    return PointSet(COLLINEAR_PERTURBED, 0.1)


@pytest.fixture
def near_line_raw():
    return PointSet(NEAR_LINE, 0.1)


@pytest.fixture
def near_line(near_line_raw):
    return preprocess(near_line_raw)[0]


@pytest.fixture
def symmetric_raw():
    return PointSet(SYMMETRIC_EIGHT, 0.1)


@pytest.fixture
def symmetric(symmetric_raw):
    return preprocess(symmetric_raw)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


def pytest_configure(config):
    import time

    config._approxbm_t0 = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the acceptance gate runs last so its runtime check sees the whole suite
    items.sort(key=lambda it: it.module.__name__ == "test_acceptance")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, format_line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, (ok, detail) in RESULTS.items():
        terminalreporter.write_line(format_line(label, ok, detail))
