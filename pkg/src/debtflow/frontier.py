"""Cost-risk frontier and policy-window optimization.

Both metrics are linear in the growth-adjusted weights ``w``: cost is
``r . w`` and rollover is ``tau . w``.  Frontier blends and the constrained
program are therefore solved in ``w`` space and mapped back to fractions with
``f = D w / |D w|_1``.  Box bounds on ``f`` stay linear there because every
entry of ``D`` is positive:

    L_j (d . w) <= d_j w_j <= U_j (d . w)
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import simplex
from .asymptotics import (
    StrategyMetrics,
    issue_scaling,
    metrics,
    rollover_kernel,
    tau,
    tau_second_derivative,
    weights_to_fractions,
)
from .core import PolicyWindow, RateCurve, Strategy, TenorGrid, growth_rate
from .errors import (
    Infeasible,
    InvalidWindow,
    RiskBelowLongestTenor,
    RiskOutOfRange,
    SolverError,
)

CONSTRAINT_TOL = 1e-8
BINDING_TOL = 1e-9


def sweet_spot_tenor(R: float, g) -> float:
    """Continuous tenor whose rollover kernel equals ``R``."""
    g = growth_rate(g)
    if not 0 < R <= 1:
        raise RiskOutOfRange(f"risk budget must lie in (0, 1], got {R}")
    if g == 0:
        return 1.0 / R
    return math.log1p(g / R) / math.log1p(g)


@dataclass
class FrontierPoint:
    risk_budget: float
    lower_tenor: int
    upper_tenor: int
    blend_alpha: float  # weight on lower_tenor in w-space
    weights: np.ndarray
    strategy: Strategy
    metrics: StrategyMetrics


def frontier_point(R: float, g, curve: RateCurve, grid: TenorGrid | None = None) -> FrontierPoint:
    """Cheapest strategy with ``RR* = R``: a single tenor or two adjacent ones.

    Between kernel values ``tau_j > R > tau_k`` of neighbouring grid tenors the
    blend ``alpha e_j + (1 - alpha) e_k`` is formed in weight space, so the
    fractions put growth-adjusted (not equal-alpha) shares on the two tenors.
    """
    grid = grid or TenorGrid.default()
    g = growth_rate(g)
    if not 0 < R <= 1:
        raise RiskOutOfRange(f"risk budget must lie in (0, 1], got {R}")
    taus = rollover_kernel(grid, g)
    if R < taus[-1] and not math.isclose(R, taus[-1], rel_tol=1e-12):
        raise RiskBelowLongestTenor(
            f"R = {R:.6g} is below tau_{grid.tenors[-1]} = {taus[-1]:.6g}; no strategy on the grid"
        )
    w = np.zeros(len(grid))
    exact = [k for k, t in enumerate(taus) if math.isclose(R, t, rel_tol=1e-12)]
    if exact:
        k = exact[0]
        w[k] = 1.0
        lo = hi = k
        alpha = 1.0
    else:
        lo = int(np.flatnonzero(taus > R)[-1])
        hi = lo + 1
        alpha = (R - taus[hi]) / (taus[lo] - taus[hi])
        w[lo], w[hi] = alpha, 1.0 - alpha
    f = Strategy(grid, weights_to_fractions(grid, w, g))
    return FrontierPoint(
        risk_budget=R,
        lower_tenor=grid.tenors[lo],
        upper_tenor=grid.tenors[hi],
        blend_alpha=float(alpha),
        weights=w,
        strategy=f,
        metrics=metrics(f, g, curve),
    )


def frontier_sweep(
    budgets: Iterable[float], g, curve: RateCurve, grid: TenorGrid | None = None
) -> list[FrontierPoint]:
    return [frontier_point(R, g, curve, grid) for R in budgets]


def write_frontier_csv(points: list[FrontierPoint], fh: TextIO, g=None) -> None:
    if not points:
        return
    T = points[0].strategy.grid.max_tenor
    w = csv.writer(fh, lineterminator="\n")
    header = ["R", "j_lower", "alpha", "t_wac", "wac_star"]
    w.writerow(header + [f"f_{j}" for j in range(1, T + 1)] + ["j_star"])
    for p in points:
        row = [f"{p.risk_budget:.10g}", p.lower_tenor, f"{p.blend_alpha:.10g}"]
        row += [f"{p.metrics.t_wac:.10g}", f"{p.metrics.wac_star:.10g}"]
        row += [f"{v:.10g}" for v in p.strategy.dense()]
        row.append("" if g is None else f"{sweet_spot_tenor(p.risk_budget, g):.10g}")
        w.writerow(row)


@dataclass
class ConvexityReport:
    """Outcome of the yield-curve regularity check.

    ``worst_margin`` is the smallest value of ``r''(s) + K tau''(s)`` over the
    checked ``(j, t_wac, s)`` triples, with ``K = (r(t) - r_j)/(tau_j - tau(t))``.
    A nonnegative margin is the sufficient condition under which no strategy
    beats single-tenor issuance at its own risk level.  ``hull_margin`` is the
    exact discrete test on the grid: how far each tenor's ``(tau_j, r_j)``
    lies below the cheapest mix of other tenors with no more rollover.
    """

    worst_margin: float
    worst_tenor: int
    worst_t_wac: float
    worst_s: float
    hull_margin: float
    hull_worst_tenor: int
    margins: dict[int, float] = field(default_factory=dict, repr=False)

    @property
    def bound_holds(self) -> bool:
        return self.worst_margin >= -1e-12

    @property
    def single_tenor_optimal(self) -> bool:
        return self.hull_margin >= -1e-12

    @property
    def flagged(self) -> bool:
        """Single-tenor optimality is not guaranteed by the curvature bound."""
        return not self.bound_holds


def _smooth_curve(curve: RateCurve):
    x, y = curve.knot_tenors, curve.knot_rates
    if len(x) < 2:
        return (lambda s: np.full_like(np.asarray(s, float), y[0])), (
            lambda s: np.zeros_like(np.asarray(s, float))
        )
    p = PchipInterpolator(x, y, extrapolate=True)
    d2 = p.derivative(2)

    def r(s):
        return p(np.clip(s, x[0], x[-1]))

    def r2(s):
        s = np.asarray(s, float)
        return np.where((s < x[0]) | (s > x[-1]), 0.0, d2(np.clip(s, x[0], x[-1])))

    return r, r2


def hull_margins(grid: TenorGrid, g, curve: RateCurve) -> dict[int, float]:
    """Per tenor: cheapest cost of any other one- or two-tenor mix with
    ``RR* <= tau_j``, minus ``r_j``.  Two tenors suffice (LP vertex)."""
    taus = rollover_kernel(grid, g)
    rates = curve.on_grid(grid)
    n = len(grid)
    out = {}
    for j in range(n):
        best = math.inf
        for a in range(n):
            if a == j:
                continue
            if taus[a] <= taus[j]:
                best = min(best, rates[a])
            for b in range(n):
                if b in (a, j) or not taus[a] > taus[j] > taus[b]:
                    continue
                lam = (taus[j] - taus[b]) / (taus[a] - taus[b])
                best = min(best, lam * rates[a] + (1 - lam) * rates[b])
        out[grid.tenors[j]] = best - rates[j]
    return out


def verify_convexity_condition(
    curve: RateCurve, g, grid: TenorGrid | None = None, step: float = 0.1
) -> ConvexityReport:
    """Check the curvature bound for single-tenor optimality.

    The curve is made smooth with monotone piecewise-cubic interpolation of
    its knots.  For each grid tenor ``j`` and each ``t_wac > j`` on a
    ``step``-spaced grid, the bound must hold at every ``s`` of that grid over
    ``[1, max_tenor]``: weights may sit anywhere on the curve.
    """
    grid = grid or TenorGrid.default()
    g = growth_rate(g)
    r, r2 = _smooth_curve(curve)
    s = np.round(np.arange(1.0, grid.max_tenor + step / 2, step), 10)
    tau2_s = tau_second_derivative(s, g)
    r2_s = r2(s)
    worst = (math.inf, grid.tenors[0], math.nan, math.nan)
    for j in grid.tenors:
        t = s[s > j + 1e-9]
        if t.size == 0:
            continue
        K = (r(t) - r(j)) / (tau(j, g) - tau(t, g))
        m = r2_s[None, :] + K[:, None] * tau2_s[None, :]
        k, i = np.unravel_index(np.argmin(m), m.shape)
        if m[k, i] < worst[0]:
            worst = (float(m[k, i]), j, float(t[k]), float(s[i]))
    margins = hull_margins(grid, g, curve)
    hull_tenor = min(margins, key=margins.get)
    return ConvexityReport(
        worst_margin=worst[0],
        worst_tenor=worst[1],
        worst_t_wac=worst[2],
        worst_s=worst[3],
        hull_margin=margins[hull_tenor],
        hull_worst_tenor=hull_tenor,
        margins=margins,
    )


@dataclass
class OptimizationResult:
    optimal_w: np.ndarray
    optimal_f: Strategy
    metrics: StrategyMetrics
    objective: float
    binding_constraints: list[str]
    status: str = "optimal"


def _window_lp(
    window: PolicyWindow, g, curve: RateCurve, objective: str, budget: float
) -> OptimizationResult:
    grid = window.grid
    if window.is_empty:
        raise Infeasible("policy window is empty (sum L > 1 or sum U < 1)")
    n = len(grid)
    taus = rollover_kernel(grid, g)
    rates = curve.on_grid(grid)
    d = issue_scaling(grid.tenors, g)
    d = d / d.max()
    c, budget_row = (rates, taus) if objective == "cost" else (taus, rates)

    rows, rhs = [budget_row], [budget]
    for k in range(n):
        unit = np.zeros(n)
        unit[k] = d[k]
        if window.lower[k] > 0:
            rows.append(window.lower[k] * d - unit)
            rhs.append(0.0)
        if window.upper[k] < 1:
            rows.append(unit - window.upper[k] * d)
            rhs.append(0.0)
    res = simplex.solve(c, np.array(rows), np.array(rhs), np.ones((1, n)), np.ones(1))
    if res.status == "infeasible":
        what = "rollover" if objective == "cost" else "cost"
        raise Infeasible(f"no strategy in the window meets the {what} budget {budget:.6g}")
    if res.status != "optimal":
        raise SolverError(f"linear program returned status {res.status!r}")

    w = res.x / res.x.sum()
    f = Strategy(grid, weights_to_fractions(grid, w, g))
    m = metrics(f, g, curve)
    x = f.fractions
    achieved = m.rr_star if objective == "cost" else m.wac_star
    if (
        achieved > budget + CONSTRAINT_TOL
        or np.any(x < window.lower - CONSTRAINT_TOL)
        or np.any(x > window.upper + CONSTRAINT_TOL)
    ):
        raise SolverError("optimizer returned a point violating its constraints")

    binding = []
    if abs(achieved - budget) <= BINDING_TOL:
        binding.append("rollover" if objective == "cost" else "cost")
    for k, tenor in enumerate(grid.tenors):
        if abs(x[k] - window.lower[k]) <= BINDING_TOL:
            binding.append(f"lower[{tenor}]")
        if abs(x[k] - window.upper[k]) <= BINDING_TOL:
            binding.append(f"upper[{tenor}]")
    value = m.wac_star if objective == "cost" else m.rr_star
    return OptimizationResult(w, f, m, value, binding)


def optimize_constrained(window: PolicyWindow, R: float, g, curve: RateCurve) -> OptimizationResult:
    """Minimize ``WAC*`` subject to ``RR* <= R`` and ``L <= f <= U``."""
    return _window_lp(window, growth_rate(g), curve, "cost", R)


def minimize_risk(window: PolicyWindow, max_cost: float, g, curve: RateCurve) -> OptimizationResult:
    """Minimize ``RR*`` subject to ``WAC* <= max_cost`` and ``L <= f <= U``."""
    return _window_lp(window, growth_rate(g), curve, "risk", max_cost)


def dominant_directions(
    f_curr: Strategy, window: PolicyWindow, g, curve: RateCurve
) -> tuple[Strategy, Strategy]:
    """Best strategies in the window that do not worsen the other metric.

    Returns ``(cost_dominant, risk_dominant)``: the cheapest strategy with no
    more rollover than ``f_curr`` and the least-rollover strategy costing no
    more than ``f_curr``.
    """
    g = growth_rate(g)
    if not window.contains(f_curr):
        raise InvalidWindow("current strategy lies outside the policy window")
    m = metrics(f_curr, g, curve)
    slack = 1e-12
    cost_dom = optimize_constrained(window, m.rr_star + slack, g, curve).optimal_f
    risk_dom = minimize_risk(window, m.wac_star + slack, g, curve).optimal_f
    return cost_dom, risk_dom


def constrained_frontier(
    window: PolicyWindow, budgets: Iterable[float], g, curve: RateCurve
) -> list[OptimizationResult]:
    """Optimal window strategies for a sequence of rollover budgets."""
    return [optimize_constrained(window, R, g, curve) for R in budgets]

