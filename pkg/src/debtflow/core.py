"""Tenor grid, strategies, growth and rate assumptions, policy windows.

Vectors indexed by tenor are stored in *grid order*: position ``k`` holds the
value for ``grid.tenors[k]``.  ``dense`` views (length ``max_tenor``, position
``j - 1`` for tenor ``j``) are used where the remaining-maturity structure
matters, i.e. in the simulator and the equilibrium distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    EmptyCurve,
    InvalidAssumption,
    InvalidGrid,
    InvalidWindow,
    NegativeFraction,
    SumFarFromOne,
    UnknownTenor,
)

# Regular nominal issuance tenors (bills lumped into the 1y bucket).
DEFAULT_TENORS = (1, 2, 3, 5, 7, 10, 30)

# Average H15 yields 1981-2016, in decimal.
BASELINE_KNOTS = (
    (1, 0.0324),
    (2, 0.0356),
    (3, 0.0379),
    (5, 0.0422),
    (7, 0.0454),
    (10, 0.0479),
    (20, 0.0488),
    (30, 0.0539),
)

BASE_GROWTH = 0.08

# Accepts tables of fractions rounded to 0.1pp (seven buckets can drift 0.35pp).
SUM_TOLERANCE = 5e-3


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TenorGrid:
    """Ordered set of integer issuance tenors inside ``[1, max_tenor]``."""

    tenors: tuple[int, ...]
    max_tenor: int = 0

    def __post_init__(self):
        if any(int(t) != t for t in self.tenors):
            raise InvalidGrid(f"tenors must be whole years: {self.tenors}")
        tenors = tuple(int(t) for t in self.tenors)
        if not tenors:
            raise InvalidGrid("tenor grid is empty")
        if any(b <= a for a, b in zip(tenors, tenors[1:])):
            raise InvalidGrid(f"tenors must be strictly increasing: {tenors}")
        if tenors[0] != 1:
            raise InvalidGrid("tenor 1 (bills bucket) must be present")
        max_tenor = int(self.max_tenor) or tenors[-1]
        if tenors[-1] > max_tenor:
            raise InvalidGrid(f"tenor {tenors[-1]} exceeds max_tenor {max_tenor}")
        object.__setattr__(self, "tenors", tenors)
        object.__setattr__(self, "max_tenor", max_tenor)

    @classmethod
    def default(cls) -> "TenorGrid":
        return cls(DEFAULT_TENORS, 30)

    @classmethod
    def full(cls, max_tenor: int) -> "TenorGrid":
        return cls(tuple(range(1, max_tenor + 1)), max_tenor)

    def __len__(self) -> int:
        return len(self.tenors)

    def __iter__(self):
        return iter(self.tenors)

    def __contains__(self, tenor) -> bool:
        return tenor in self.tenors

    @property
    def array(self) -> np.ndarray:
        return np.array(self.tenors, dtype=float)

    def index(self, tenor: int) -> int:
        try:
            return self.tenors.index(int(tenor))
        except ValueError:
            raise UnknownTenor(f"tenor {tenor} not in grid {self.tenors}") from None

    def dense(self, values) -> np.ndarray:
        """Scatter grid-ordered ``values`` into a length-``max_tenor`` vector."""
        out = np.zeros(self.max_tenor)
        out[np.asarray(self.tenors) - 1] = values
        return out

    def to_grid(self, dense) -> np.ndarray:
        return np.asarray(dense, dtype=float)[np.asarray(self.tenors) - 1]


@dataclass(frozen=True, eq=False)
class Strategy:
    """Issuance fractions over a tenor grid (grid order, sums to one)."""

    grid: TenorGrid
    fractions: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "fractions", _readonly(self.fractions))

    @classmethod
    def single(cls, tenor: int, grid: TenorGrid | None = None) -> "Strategy":
        """Concentrated issuance ``e_j``."""
        grid = grid or TenorGrid.default()
        f = np.zeros(len(grid))
        f[grid.index(tenor)] = 1.0
        return cls(grid, f)

    @classmethod
    def from_weights(cls, grid: TenorGrid, values) -> "Strategy":
        """Wrap a grid-ordered nonnegative vector, renormalizing it to sum one."""
        values = np.clip(np.asarray(values, dtype=float), 0.0, None)
        return cls(grid, values / values.sum())

    def as_dict(self) -> dict[int, float]:
        return {t: float(v) for t, v in zip(self.grid.tenors, self.fractions)}

    def dense(self) -> np.ndarray:
        return self.grid.dense(self.fractions)

    def __getitem__(self, tenor: int) -> float:
        return float(self.fractions[self.grid.index(tenor)])

    def __repr__(self):
        body = ", ".join(f"{t}: {v:.4g}" for t, v in self.as_dict().items() if v)
        return f"Strategy({{{body}}})"


def validate_strategy(
    fractions: Mapping[int, float],
    grid: TenorGrid | None = None,
    tol: float = SUM_TOLERANCE,
) -> Strategy:
    """Check a ``{tenor: fraction}`` mapping and renormalize it onto ``grid``.

    Fractions must be nonnegative, live on grid tenors, and sum to one within
    ``tol``; the result is rescaled so the sum is one to machine precision.
    Zero entries for tenors outside the grid are tolerated and dropped.
    """
    grid = grid or TenorGrid.default()
    values = np.zeros(len(grid))
    for tenor, frac in fractions.items():
        frac = float(frac)
        if not math.isfinite(frac) or frac < 0:
            raise NegativeFraction(f"fraction for tenor {tenor} is {frac}")
        if int(tenor) not in grid:
            if frac == 0:
                continue
            raise UnknownTenor(f"tenor {tenor} not in grid {grid.tenors}")
        values[grid.index(tenor)] += frac
    total = values.sum()
    if abs(total - 1.0) > tol:
        raise SumFarFromOne(f"fractions sum to {total:.6g}, tolerance {tol:g}")
    return Strategy(grid, values / total)


@dataclass(frozen=True)
class GrowthAssumption:
    """Per-year deficit growth ``g``; ``gamma = 1 + g``."""

    g: float

    def __post_init__(self):
        g = float(self.g)
        if not math.isfinite(g) or g < 0:
            raise InvalidAssumption(f"growth rate must be finite and >= 0, got {g}")
        object.__setattr__(self, "g", g)

    @property
    def gamma(self) -> float:
        return 1.0 + self.g


def growth_rate(g) -> float:
    """Accept a float or a :class:`GrowthAssumption`; return the validated rate."""
    if isinstance(g, GrowthAssumption):
        return g.g
    return GrowthAssumption(g).g


@dataclass(frozen=True)
class RateCurve:
    """Static yield curve given at integer knots, linear in between.

    Flat beyond the first and last knots.
    """

    knots: tuple[tuple[int, float], ...]

    def __post_init__(self):
        knots = tuple(sorted((int(t), float(r)) for t, r in self.knots))
        if not knots:
            raise EmptyCurve("rate curve has no knots")
        tenors = [t for t, _ in knots]
        if len(set(tenors)) != len(tenors):
            raise InvalidAssumption(f"duplicate curve knots: {tenors}")
        if not all(math.isfinite(r) for _, r in knots):
            raise InvalidAssumption("rate curve contains non-finite rates")
        object.__setattr__(self, "knots", knots)

    @classmethod
    def from_mapping(cls, rates: Mapping[int, float]) -> "RateCurve":
        return cls(tuple(rates.items()))

    @classmethod
    def baseline(cls) -> "RateCurve":
        return cls(BASELINE_KNOTS)

    @property
    def knot_tenors(self) -> np.ndarray:
        return np.array([t for t, _ in self.knots], dtype=float)

    @property
    def knot_rates(self) -> np.ndarray:
        return np.array([r for _, r in self.knots])

    def __call__(self, tenor):
        return np.interp(tenor, self.knot_tenors, self.knot_rates)

    def on_grid(self, grid: TenorGrid) -> np.ndarray:
        return self(grid.array)

    def dense(self, max_tenor: int) -> np.ndarray:
        return self(np.arange(1, max_tenor + 1, dtype=float))

    def shifted(self, dr: float) -> "RateCurve":
        return RateCurve(tuple((t, r + dr) for t, r in self.knots))

    def scaled(self, c: float) -> "RateCurve":
        return RateCurve(tuple((t, r * c) for t, r in self.knots))


def rate_at(curve: RateCurve, tenor: int) -> float:
    if not curve.knots:
        raise EmptyCurve("rate curve has no knots")
    return float(curve(tenor))


@dataclass(frozen=True, eq=False)
class PolicyWindow:
    """Box bounds ``L <= f <= U`` on issuance fractions (grid order)."""

    grid: TenorGrid
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo, hi = _readonly(self.lower), _readonly(self.upper)
        if lo.shape != (len(self.grid),) or hi.shape != lo.shape:
            raise InvalidWindow("window bounds must match the grid length")
        if np.any(lo < 0) or np.any(hi > 1) or np.any(lo > hi):
            raise InvalidWindow("window bounds must satisfy 0 <= L <= U <= 1")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_bounds(
        cls,
        grid: TenorGrid,
        lower: Mapping[int, float] | None = None,
        upper: Mapping[int, float] | None = None,
    ) -> "PolicyWindow":
        """Build from sparse mappings; missing tenors default to ``[0, 1]``.

        Bounds for tenors outside the grid are accepted only if they force the
        tenor to zero.
        """
        lo, hi = np.zeros(len(grid)), np.ones(len(grid))
        for src, dst in ((lower or {}, lo), (upper or {}, hi)):
            for tenor, v in src.items():
                if int(tenor) in grid:
                    dst[grid.index(tenor)] = float(v)
                elif float(v) != 0.0:
                    raise UnknownTenor(f"bound on tenor {tenor} outside grid {grid.tenors}")
        return cls(grid, lo, hi)

    @classmethod
    def full(cls, grid: TenorGrid) -> "PolicyWindow":
        return cls(grid, np.zeros(len(grid)), np.ones(len(grid)))

    @classmethod
    def pinned(cls, f: Strategy) -> "PolicyWindow":
        return cls(f.grid, f.fractions, f.fractions)

    @classmethod
    def around(cls, f: Strategy, width: float) -> "PolicyWindow":
        """``f +/- width`` per tenor, clipped to ``[0, 1]``."""
        return cls(
            f.grid,
            np.clip(f.fractions - width, 0.0, 1.0),
            np.clip(f.fractions + width, 0.0, 1.0),
        )

    @property
    def is_empty(self) -> bool:
        return self.lower.sum() > 1.0 + 1e-12 or self.upper.sum() < 1.0 - 1e-12

    def contains(self, f: Strategy, tol: float = 1e-8) -> bool:
        x = f.fractions
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


@dataclass(frozen=True)
class Assumptions:
    """Environment for the metrics: growth, curve and the tenor grid."""

    growth: GrowthAssumption
    curve: RateCurve
    grid: TenorGrid

    @property
    def g(self) -> float:
        return self.growth.g

    def with_overrides(
        self, g: float | None = None, rates: Mapping[int, float] | None = None
    ) -> "Assumptions":
        return Assumptions(
            GrowthAssumption(self.g if g is None else g),
            self.curve if rates is None else RateCurve.from_mapping(rates),
            self.grid,
        )


def default_assumptions() -> Assumptions:
    return Assumptions(GrowthAssumption(BASE_GROWTH), RateCurve.baseline(), TenorGrid.default())
