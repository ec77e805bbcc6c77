"""Dense two-phase tableau simplex.

Solves ``min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0``.

Pivoting is deterministic: Dantzig's rule with lowest-index tie breaking,
falling back to Bland's rule after a run of degenerate pivots so that cycling
cannot occur.  Intended for the small problems of this package (tens of
variables), where a dense tableau is simplest and exact enough.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

PIVOT_TOL = 1e-11
COST_TOL = 1e-10
FEAS_TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    fun: float | None
    iterations: int


class _Tableau:
    def __init__(self, rows: np.ndarray, basis: list[int], degenerate_limit: int):
        self.t = rows
        self.basis = basis
        self.iterations = 0
        self.degenerate_run = 0
        self.degenerate_limit = degenerate_limit

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        t[r] /= t[r, c]
        col = t[:, c].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[np.abs(t) < 1e-15] = 0.0
        self.basis[r] = c
        self.iterations += 1

    def entering(self, allowed: np.ndarray) -> int | None:
        cost = self.t[-1, :-1]
        cand = np.flatnonzero(allowed & (cost < -COST_TOL))
        if cand.size == 0:
            return None
        if self.degenerate_run >= self.degenerate_limit:
            return int(cand[0])  # Bland
        return int(cand[np.argmin(cost[cand])])  # argmin picks lowest index on ties

    def leaving(self, c: int) -> int | None:
        col = self.t[:-1, c]
        rhs = self.t[:-1, -1]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = rhs[rows] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        # Smallest basic variable index among ties (Bland's leaving rule).
        return int(min(ties, key=lambda r: self.basis[r]))

    def optimize(self, allowed: np.ndarray, max_iter: int) -> str:
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"simplex did not converge in {max_iter} pivots")
            c = self.entering(allowed)
            if c is None:
                return "optimal"
            r = self.leaving(c)
            if r is None:
                return "unbounded"
            degenerate = self.t[r, -1] <= PIVOT_TOL
            self.degenerate_run = self.degenerate_run + 1 if degenerate else 0
            self.pivot(r, c)


def solve(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    max_iter: int = 5000,
    degenerate_limit: int = 20,
) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    m_ub, m_eq = len(b_ub), len(b_eq)
    m = m_ub + m_eq

    # Columns: x (n), slacks (m_ub), artificials (m).
    n_slack = m_ub
    A = np.zeros((m, n + n_slack))
    A[:m_ub, :n] = A_ub
    A[:m_ub, n:] = np.eye(m_ub)
    A[m_ub:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    # Rows whose slack enters with +1 start basic on the slack; the rest need artificials.
    needs_art = [i for i in range(m) if i >= m_ub or flip[i]]
    n_art = len(needs_art)
    width = n + n_slack + n_art
    rows = np.zeros((m + 1, width + 1))
    rows[:m, : n + n_slack] = A
    rows[:m, -1] = b
    basis = [0] * m
    for i in range(m_ub):
        basis[i] = n + i
    for k, i in enumerate(needs_art):
        rows[i, n + n_slack + k] = 1.0
        basis[i] = n + n_slack + k

    tab = _Tableau(rows, basis, degenerate_limit)
    art = np.zeros(width, dtype=bool)
    art[n + n_slack:] = True

    if n_art:
        rows[-1, :-1] = 0.0
        rows[-1, :width][art] = 1.0
        rows[-1, -1] = 0.0
        for i in needs_art:
            rows[-1] -= rows[i]
        tab.optimize(np.ones(width, dtype=bool), max_iter)
        if -rows[-1, -1] > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
            return LPResult("infeasible", None, None, tab.iterations)
        # Drive artificials out of the basis; rows that cannot be cleared are redundant.
        keep = []
        for i in range(m):
            if tab.basis[i] >= n + n_slack:
                cand = np.flatnonzero(np.abs(rows[i, : n + n_slack]) > PIVOT_TOL)
                if cand.size:
                    tab.pivot(i, int(cand[0]))
                    keep.append(i)
            else:
                keep.append(i)
        if len(keep) < m:
            tab.t = np.vstack([rows[keep], rows[-1:]])
            tab.basis = [tab.basis[i] for i in keep]
            rows = tab.t

    # Phase 2 objective expressed in terms of the non-basic variables.
    rows = tab.t
    rows[-1] = 0.0
    rows[-1, :n] = c
    for i, bv in enumerate(tab.basis):
        if rows[-1, bv] != 0.0:
            rows[-1] -= rows[-1, bv] * rows[i]
    tab.degenerate_run = 0
    status = tab.optimize(~art, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, tab.iterations)

    x = np.zeros(width)
    for i, bv in enumerate(tab.basis):
        x[bv] = rows[i, -1]
    x = np.clip(x[:n], 0.0, None)
    return LPResult("optimal", x, float(c @ x), tab.iterations)
