import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from debtflow import simplex
from debtflow.errors import SolverError


def test_textbook():
    # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    res = simplex.solve([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x, [2, 6])
    assert res.fun == pytest.approx(-36)


def test_equality_and_negative_rhs():
    # min x + y s.t. x + y = 2, -x <= -0.5
    res = simplex.solve([1, 2], [[-1, 0]], [-0.5], [[1, 1]], [2])
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x, [2, 0], atol=1e-12)


def test_infeasible():
    res = simplex.solve([1, 1], [[1, 1]], [1], [[1, 1]], [2])
    assert res.status == "infeasible" and res.x is None


def test_unbounded():
    res = simplex.solve([-1, 0], [[0, 1]], [1])
    assert res.status == "unbounded"


def test_redundant_equalities():
    res = simplex.solve([1, 2, 3], A_eq=[[1, 1, 1], [2, 2, 2]], b_eq=[1, 2])
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x, [1, 0, 0], atol=1e-12)


def test_degenerate_cycling_example():
    # Beale's classic cycling instance; Dantzig alone cycles on it.
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    res = simplex.solve(c, A, [0, 0, 1], degenerate_limit=2)
    assert res.status == "optimal"
    assert res.fun == pytest.approx(-0.05)


def test_iteration_cap():
    with pytest.raises(SolverError):
        simplex.solve([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], max_iter=1)


def test_deterministic():
    c = np.ones(4)
    A_eq = np.ones((1, 4))
    a = simplex.solve(c, A_eq=A_eq, b_eq=[1])
    b = simplex.solve(c, A_eq=A_eq, b_eq=[1])
    np.testing.assert_array_equal(a.x, b.x)
    assert a.x[0] == 1.0  # lowest index wins ties


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 7), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_matches_scipy(n, m, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n)
    A = rng.normal(size=(m, n))
    b = rng.uniform(-0.5, 1.0, size=m)
    A_eq = np.ones((1, n))
    b_eq = [1.0]
    ours = simplex.solve(c, A, b, A_eq, b_eq)
    ref = linprog(c, A, b, A_eq, b_eq, bounds=(0, None), method="highs")
    if ref.status == 2:
        assert ours.status == "infeasible"
    else:
        assert ref.status == 0
        assert ours.status == "optimal"
        assert ours.fun == pytest.approx(ref.fun, abs=1e-8)
        assert np.all(A @ ours.x <= b + 1e-8)
        assert abs(ours.x.sum() - 1) < 1e-9
