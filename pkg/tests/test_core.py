import math

import numpy as np
import pytest

from debtflow import (
    Assumptions,
    GrowthAssumption,
    PolicyWindow,
    RateCurve,
    Strategy,
    TenorGrid,
    default_assumptions,
    rate_at,
    validate_strategy,
)
from debtflow.errors import (
    EmptyCurve,
    InvalidAssumption,
    InvalidGrid,
    InvalidWindow,
    NegativeFraction,
    SumFarFromOne,
    UnknownTenor,
)

from conftest import FY2016


class TestTenorGrid:
    def test_default(self):
        g = TenorGrid.default()
        assert g.tenors == (1, 2, 3, 5, 7, 10, 30)
        assert g.max_tenor == 30
        assert g.index(10) == 5
        assert 7 in g and 4 not in g

    def test_full(self):
        g = TenorGrid.full(10)
        assert g.tenors == tuple(range(1, 11))

    @pytest.mark.parametrize(
        "tenors",
        [(), (2, 3), (1, 3, 2), (1, 1, 2), (0, 1), (1, 2.5)],
    )
    def test_rejects(self, tenors):
        with pytest.raises(InvalidGrid):
            TenorGrid(tenors)

    def test_unknown_index(self):
        with pytest.raises(UnknownTenor):
            TenorGrid.default().index(4)

    def test_dense_roundtrip(self):
        g = TenorGrid.default()
        v = np.arange(1.0, 8.0)
        d = g.dense(v)
        assert d.shape == (30,)
        assert d[3] == 0 and d[29] == 7
        np.testing.assert_array_equal(g.to_grid(d), v)


class TestValidateStrategy:
    def test_identity(self):
        f = validate_strategy({1: 1.0})
        assert f[1] == 1.0 and f.fractions.sum() == 1.0

    def test_symmetric(self):
        f = validate_strategy({1: 0.5, 5: 0.5})
        assert f[5] == 0.5

    def test_fy2016_renormalized(self):
        f = validate_strategy(FY2016)
        assert math.isclose(f.fractions.sum(), 1.0, abs_tol=1e-15)
        assert math.isclose(f[1], 0.423 / 1.001, rel_tol=1e-12)

    def test_negative(self):
        with pytest.raises(NegativeFraction):
            validate_strategy({1: 1.1, 2: -0.1})

    def test_nan(self):
        with pytest.raises(NegativeFraction):
            validate_strategy({1: float("nan")})

    def test_sum(self):
        with pytest.raises(SumFarFromOne):
            validate_strategy({1: 0.5, 2: 0.4})

    def test_unknown_tenor(self):
        with pytest.raises(UnknownTenor):
            validate_strategy({1: 0.5, 4: 0.5})

    def test_zero_off_grid_dropped(self):
        f = validate_strategy({1: 1.0, 4: 0.0})
        assert f[1] == 1.0

    def test_fractions_readonly(self):
        f = Strategy.single(5)
        with pytest.raises(ValueError):
            f.fractions[0] = 1.0

    def test_single_and_dict(self):
        f = Strategy.single(7)
        assert f.as_dict()[7] == 1.0
        assert f.dense()[6] == 1.0


class TestGrowth:
    def test_gamma(self):
        assert GrowthAssumption(0.08).gamma == 1.08

    @pytest.mark.parametrize("g", [-0.01, float("inf"), float("nan")])
    def test_invalid(self, g):
        with pytest.raises(InvalidAssumption):
            GrowthAssumption(g)


class TestRateCurve:
    def test_knots(self, curve):
        assert rate_at(curve, 10) == 0.0479
        assert rate_at(curve, 1) == 0.0324

    def test_interpolated(self, curve):
        assert math.isclose(rate_at(curve, 15), 0.04835, abs_tol=1e-15)

    def test_flat_extrapolation(self):
        c = RateCurve.from_mapping({2: 0.02, 5: 0.03})
        assert c(1) == 0.02 and c(30) == 0.03

    def test_empty(self):
        with pytest.raises(EmptyCurve):
            RateCurve(())

    def test_nonfinite(self):
        with pytest.raises(EmptyCurve.__mro__[1]):
            RateCurve(((1, float("nan")),))

    def test_on_grid(self, curve, grid):
        r = curve.on_grid(grid)
        assert r.shape == (7,) and r[-1] == 0.0539

    def test_shift_scale(self, curve):
        assert math.isclose(curve.shifted(0.01)(5), 0.0522)
        assert math.isclose(curve.scaled(2.0)(5), 0.0844)


class TestPolicyWindow:
    def test_from_bounds_defaults(self, grid):
        w = PolicyWindow.from_bounds(grid, {5: 0.1}, {30: 0.0})
        assert w.lower[grid.index(5)] == 0.1
        assert w.upper[grid.index(30)] == 0.0
        assert w.upper[0] == 1.0

    def test_off_grid_zero_ok(self, grid):
        PolicyWindow.from_bounds(grid, upper={20: 0.0})
        with pytest.raises(UnknownTenor):
            PolicyWindow.from_bounds(grid, lower={20: 0.1})

    def test_bad_bounds(self, grid):
        with pytest.raises(InvalidWindow):
            PolicyWindow.from_bounds(grid, {1: 0.6}, {1: 0.5})

    def test_empty(self, grid):
        assert PolicyWindow.from_bounds(grid, {1: 0.6, 2: 0.6}).is_empty
        assert PolicyWindow.from_bounds(grid, upper={t: 0.1 for t in grid.tenors}).is_empty
        assert not PolicyWindow.full(grid).is_empty

    def test_contains(self, fy2016):
        w = PolicyWindow.around(fy2016, 0.05)
        assert w.contains(fy2016)
        assert not w.contains(Strategy.single(1))
        assert PolicyWindow.pinned(fy2016).contains(fy2016)


def test_assumptions_overrides():
    a = default_assumptions()
    assert a.g == 0.08
    b = a.with_overrides(g=0.04, rates={1: 0.01, 30: 0.05})
    assert b.g == 0.04 and b.curve(30) == 0.05
    assert a.curve(30) == 0.0539
    assert isinstance(b, Assumptions)
