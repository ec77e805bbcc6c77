import numpy as np
import pytest
from hypothesis import strategies as st

from debtflow import RateCurve, Strategy, TenorGrid, validate_strategy

FY2016 = {1: 0.423, 2: 0.134, 3: 0.077, 5: 0.131, 7: 0.098, 10: 0.089, 30: 0.049}
GRID = TenorGrid.default()


@pytest.fixture
def curve():
    return RateCurve.baseline()


@pytest.fixture
def grid():
    return GRID


@pytest.fixture
def fy2016():
    return validate_strategy(FY2016)


def random_strategies(n, seed, grid=GRID):
    rng = np.random.default_rng(seed)
    return [Strategy(grid, x) for x in rng.dirichlet(np.ones(len(grid)), size=n)]


@st.composite
def simplex_strategies(draw, grid=GRID, allow_zeros=True):
    lo = 0.0 if allow_zeros else 1e-3
    raw = draw(
        st.lists(
            st.floats(min_value=lo, max_value=1.0, allow_nan=False),
            min_size=len(grid),
            max_size=len(grid),
        )
    )
    x = np.asarray(raw)
    if x.sum() <= 1e-6:
        x = np.ones(len(grid))
    return Strategy(grid, x / x.sum())


growth_rates = st.floats(min_value=0.0, max_value=0.3, allow_nan=False)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
