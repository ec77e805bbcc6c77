"""Year-by-year debt rolling under a constant-fraction issuance strategy.

Each year the Treasury must raise ``N_t = D_t + I_t + M_t`` and splits it as
``N_{t,j} = f_j N_t``.  Outstanding face is kept in a ledger indexed by
(original tenor, remaining tenor): coupons depend on the tenor at issue, the
rollover profile on the remaining tenor.  Debt issued in year ``s`` at tenor
``j`` pays ``r_j`` on face in years ``s+1 .. s+j`` and matures in ``s+j``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping, TextIO

import numpy as np

from .core import SUM_TOLERANCE, RateCurve, Strategy, growth_rate
from .errors import HorizonTooLarge, InvalidAssumption, ZeroStock

_LOG_HEADROOM = 700.0  # log(max float) ~ 709.8


@dataclass
class SimulationConfig:
    strategy: Strategy
    g: float
    curve: RateCurve
    initial_deficit: float = 1.0
    horizon: int = 300
    # Stock at t = 0 and its split by remaining tenor (dense, length max_tenor).
    initial_stock: float = 0.0
    initial_portfolio: np.ndarray | None = None
    deficit_overrides: Mapping[int, float] | None = None
    # Divide currency by gamma every year; ratio outputs are unchanged.
    renormalize: bool = False

    def __post_init__(self):
        self.g = growth_rate(self.g)
        if int(self.horizon) < 1:
            raise InvalidAssumption(f"horizon must be >= 1, got {self.horizon}")
        self.horizon = int(self.horizon)
        if not self.initial_deficit > 0:
            raise InvalidAssumption("initial deficit must be positive")
        if self.initial_stock < 0:
            raise InvalidAssumption("initial stock must be nonnegative")
        if self.initial_stock > 0:
            if self.initial_portfolio is None:
                raise InvalidAssumption("initial stock given without a portfolio split")
            theta = np.asarray(self.initial_portfolio, dtype=float)
            if theta.shape != (self.strategy.grid.max_tenor,) or np.any(theta < 0):
                raise InvalidAssumption("initial portfolio must be a nonnegative dense vector")
            if abs(theta.sum() - 1.0) > SUM_TOLERANCE:
                raise InvalidAssumption(f"initial portfolio sums to {theta.sum():.6g}, not 1")
            self.initial_portfolio = theta / theta.sum()


@dataclass
class SimulationState:
    """Full time series of a run.

    Flow arrays (``D, I, M, N, issuance, wac, rr, wam``) are indexed by
    ``t - 1`` for years ``t = 1..H``; stock arrays (``z, Q``) by ``t`` for
    ``t = 0..H``.  In renormalized runs flows of year ``t`` and the stock at
    the end of year ``t`` are expressed in units of ``scale[t] = gamma^(t-1)``.
    """

    config: SimulationConfig
    D: np.ndarray
    I: np.ndarray
    M: np.ndarray
    N: np.ndarray
    issuance: np.ndarray
    z: np.ndarray
    Q: np.ndarray
    wac: np.ndarray
    rr: np.ndarray
    wam: np.ndarray
    scale: np.ndarray = field(repr=False)

    @property
    def horizon(self) -> int:
        return len(self.D)

    def theta(self, t: int) -> np.ndarray:
        if self.z[t] <= 0:
            raise ZeroStock(f"no stock outstanding at year {t}")
        return self.Q[t] / self.z[t]


def geometric_deficits(d0: float, g, horizon: int) -> list[float]:
    gamma = 1.0 + growth_rate(g)
    return [d0 * gamma ** (t - 1) for t in range(1, horizon + 1)]


def _original_tenors(config: SimulationConfig) -> np.ndarray:
    """Original tenor assumed for initial holdings at each remaining tenor."""
    grid = config.strategy.grid
    T = grid.max_tenor
    out = np.arange(1, T + 1)
    for i in range(1, T + 1):
        longer = [j for j in grid.tenors if j >= i]
        if longer:
            out[i - 1] = longer[0]
    return out


def run(config: SimulationConfig) -> SimulationState:
    f = config.strategy.dense()
    T = len(f)
    H = config.horizon
    gamma = 1.0 + config.g
    rates = config.curve.dense(T)

    overrides = {int(t): float(d) for t, d in (config.deficit_overrides or {}).items()}
    d0 = config.initial_deficit
    log_gamma = math.log(gamma)

    biggest = max([d0, config.initial_stock, *overrides.values()])
    growth = math.log1p(max(float(rates.max()), 0.0))
    if not config.renormalize:
        growth += log_gamma
    if math.log(biggest * (H + 1)) + H * growth > _LOG_HEADROOM:
        raise HorizonTooLarge(
            f"horizon {H} risks float overflow; use renormalize=True or a shorter horizon"
        )

    ledger = np.zeros((T, T))  # [original - 1, remaining - 1]
    z_prev = float(config.initial_stock)
    if z_prev > 0:
        orig = _original_tenors(config)
        ledger[orig - 1, np.arange(T)] = z_prev * config.initial_portfolio

    diag = np.arange(T)
    D = np.empty(H)
    I = np.empty(H)
    M = np.empty(H)
    N = np.empty(H)
    issuance = np.empty((H, T))
    z = np.empty(H + 1)
    Q = np.empty((H + 1, T))
    wac = np.full(H, np.nan)
    scale = np.ones(H + 1)
    z[0] = z_prev
    Q[0] = ledger.sum(axis=0)

    unit = 1.0
    for t in range(1, H + 1):
        if config.renormalize and t > 1:
            ledger /= gamma
            z_prev /= gamma
            unit *= gamma
        if t in overrides:
            d_t = overrides[t] / unit if config.renormalize else overrides[t]
        else:
            # The geometric path in currency units of year t is just d0.
            d_t = d0 if config.renormalize else d0 * gamma ** (t - 1)

        i_t = float(rates @ ledger.sum(axis=1))
        m_t = float(ledger[:, 0].sum())
        if z_prev > 0:
            wac[t - 1] = i_t / z_prev
        ledger[:, :-1] = ledger[:, 1:]
        ledger[:, -1] = 0.0

        n_t = d_t + i_t + m_t
        new = f * n_t
        ledger[diag, diag] += new
        z_t = z_prev + d_t + i_t

        D[t - 1], I[t - 1], M[t - 1], N[t - 1] = d_t, i_t, m_t, n_t
        issuance[t - 1] = new
        z[t] = z_t
        Q[t] = ledger.sum(axis=0)
        scale[t] = unit
        z_prev = z_t

    if not (np.all(np.isfinite(z)) and np.all(np.isfinite(Q))):
        raise HorizonTooLarge("simulation overflowed; use renormalize=True")

    mid = np.arange(1, T + 1) - 0.5
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = Q[1:] / z[1:, None]
    rr = theta[:, 0]
    wam = theta @ mid
    return SimulationState(config, D, I, M, N, issuance, z, Q, wac, rr, wam, scale)


def empirical_metrics_at(state: SimulationState, t: int) -> tuple[float, float, float]:
    """``(wac_t, rr_t, wam_t)`` with ``wac_t = I_t / z_{t-1}`` and ``rr_t = q_{1,t} / z_t``."""
    if not 1 <= t <= state.horizon:
        raise IndexError(f"year {t} outside 1..{state.horizon}")
    if state.z[t - 1] <= 0 or state.z[t] <= 0:
        raise ZeroStock(f"stock is zero at year {t - 1}; WAC undefined")
    return float(state.wac[t - 1]), float(state.rr[t - 1]), float(state.wam[t - 1])


def csv_header(max_tenor: int) -> list[str]:
    return ["year", "D", "I", "M", "N", "z", "wac", "rr", "wam"] + [
        f"theta_{i}" for i in range(1, max_tenor + 1)
    ]


def write_csv(state: SimulationState, fh: TextIO) -> None:
    T = state.Q.shape[1]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(csv_header(T))
    for t in range(1, state.horizon + 1):
        zt = state.z[t]
        theta = state.Q[t] / zt if zt > 0 else np.full(T, np.nan)
        row = [t, state.D[t - 1], state.I[t - 1], state.M[t - 1], state.N[t - 1], zt]
        row += [state.wac[t - 1], state.rr[t - 1], state.wam[t - 1], *theta]
        w.writerow([row[0]] + [_fmt(v) for v in row[1:]])


def _fmt(v: float) -> str:
    return "" if math.isnan(v) else f"{v:.12g}"
