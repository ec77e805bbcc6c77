"""Closed-form steady-state metrics of a constant-fraction issuance strategy.

Under geometric deficit growth ``g`` and a static curve ``r`` the rolling
portfolio becomes self-similar.  Its cost is ``WAC* = w . r`` and its yearly
rollover is ``RR* = tau . w``, where ``w`` are growth-adjusted issuance
weights.  Both formulas require ``g > WAC*``; when that fails the portfolio
grows at an interest-driven rate instead, see :func:`effective_growth`.

All tenor-indexed vectors returned here are numpy arrays in grid order, except
the equilibrium distribution, which is dense over remaining tenors
``1..max_tenor``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .core import RateCurve, Strategy, TenorGrid, growth_rate


def growth_factors(tenors, g) -> np.ndarray:
    """Per-tenor factor ``c_j`` with ``w_j ∝ f_j c_j``.

    ``c_j = (1 - (1+g)^-j) / g``, i.e. the textbook factor divided by ``g`` so
    that it tends to ``j`` as ``g -> 0`` (the ``g = 0`` branch uses ``j``
    directly).  The common scale cancels in every normalized quantity.
    """
    g = growth_rate(g)
    j = np.asarray(tenors, dtype=float)
    if g == 0:
        return j.copy()
    return -np.expm1(-j * np.log1p(g)) / g


def issue_scaling(tenors, g) -> np.ndarray:
    """Diagonal of ``D_gamma`` (up to scale): maps weights back to fractions."""
    return 1.0 / growth_factors(tenors, g)


def tau(s, g):
    """Rollover kernel ``g / ((1+g)^s - 1)``, or ``1/s`` at ``g = 0``.

    Accepts continuous ``s``; ``tau(1, g) == 1`` exactly.
    """
    g = growth_rate(g)
    s = np.asarray(s, dtype=float)
    if g == 0:
        out = 1.0 / s
    else:
        out = g / np.expm1(s * np.log1p(g))
        out = np.where(s == 1, 1.0, out)
    return out if out.ndim else float(out)


def tau_second_derivative(s, g):
    g = growth_rate(g)
    s = np.asarray(s, dtype=float)
    if g == 0:
        return 2.0 / s**3
    a = np.log1p(g)
    em1 = np.expm1(a * s)
    e = em1 + 1.0
    return g * a * a * e * (e + 1.0) / em1**3


def rollover_kernel(grid: TenorGrid, g) -> np.ndarray:
    """``tau_j`` for every tenor of the grid."""
    return np.atleast_1d(tau(grid.array, g))


def cost_weights(f: Strategy, g) -> np.ndarray:
    """Growth-adjusted weights ``w`` (nonnegative, sum to one)."""
    w = f.fractions * growth_factors(f.grid.tenors, g)
    return w / w.sum()


def weights_to_fractions(grid: TenorGrid, w, g) -> np.ndarray:
    """Inverse of :func:`cost_weights`: ``f = D w / |D w|_1``."""
    x = issue_scaling(grid.tenors, g) * np.clip(np.asarray(w, dtype=float), 0.0, None)
    return x / x.sum()


@dataclass(frozen=True)
class StrategyMetrics:
    rr_star: float
    wac_star: float
    t_wac: float
    nwam: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def metrics(f: Strategy, g, curve: RateCurve) -> StrategyMetrics:
    """Map a strategy to its (risk, cost) image.

    >>> from debtflow.core import Strategy, RateCurve
    >>> m = metrics(Strategy.single(1), 0.08, RateCurve.baseline())
    >>> m.rr_star, m.t_wac, m.wac_star
    (1.0, 1.0, 0.0324)
    """
    w = cost_weights(f, g)
    tenors = f.grid.array
    return StrategyMetrics(
        rr_star=float(rollover_kernel(f.grid, g) @ w),
        wac_star=float(curve.on_grid(f.grid) @ w),
        t_wac=float(tenors @ w),
        nwam=float(tenors @ f.fractions - 0.5),
    )


def equilibrium_distribution(f: Strategy, g) -> np.ndarray:
    """Steady-state shares of the stock by remaining tenor ``1..max_tenor``.

    Solves ``(gamma I - S) y = f`` by back-substitution from the longest
    tenor (``S`` shifts remaining maturity down by one year) and normalizes.
    ``g = 0`` needs no special case: the recurrence is exact at ``gamma = 1``.
    """
    gamma = 1.0 + growth_rate(g)
    fd = f.dense()
    y = np.empty_like(fd)
    acc = 0.0
    for i in range(len(fd) - 1, -1, -1):
        acc = (fd[i] + acc) / gamma
        y[i] = acc
    return y / y.sum()


def equilibrium_wam(theta) -> float:
    """Mid-year weighted average remaining maturity, ``sum (i - 1/2) theta_i``."""
    theta = np.asarray(theta, dtype=float)
    return float((np.arange(1, len(theta) + 1) - 0.5) @ theta)


def check_growth_dominance(m: StrategyMetrics, g) -> bool:
    """True iff ``g > WAC*``, the condition under which the closed forms hold."""
    return growth_rate(g) > m.wac_star


def effective_growth(f: Strategy, g, curve: RateCurve) -> float:
    """Asymptotic stock growth rate actually realized by a rolling portfolio.

    Equals ``g`` when ``g > WAC*(f; g)``.  Otherwise interest, not deficits,
    drives debt growth and the portfolio settles at the unique ``x`` with
    ``x = WAC*(f; x)``; the closed forms then hold with ``g`` replaced by ``x``.
    """
    g = growth_rate(g)
    rates = curve.on_grid(f.grid)

    def excess(x):
        return float(rates @ cost_weights(f, x)) - x

    if excess(g) < 0:
        return g
    hi = max(float(rates.max()), g) + 1.0
    return brentq(excess, g, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def implicit_metrics(f: Strategy, g, curve: RateCurve) -> StrategyMetrics:
    """:func:`metrics` evaluated at :func:`effective_growth`."""
    return metrics(f, effective_growth(f, g, curve), curve)
