"""JSON file formats.

Assumptions::

    {"g": 0.08,
     "rates": [{"tenor": 1, "rate": 0.0324}, ...],
     "tenors": [1, 2, 3, 5, 7, 10, 30],      # optional, default grid
     "max_tenor": 30}                         # optional

Strategy: ``{"<tenor>": fraction, ...}``.  Policy window:
``{"lower": {"<tenor>": L}, "upper": {"<tenor>": U}}``, missing tenors are
unconstrained.  Simulation config: see :func:`load_simulation_config`.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .core import (
    Assumptions,
    GrowthAssumption,
    PolicyWindow,
    RateCurve,
    Strategy,
    TenorGrid,
    validate_strategy,
)
from .errors import DebtflowError
from .simulator import SimulationConfig

ENV_ASSUMPTIONS = "DEBTFLOW_ASSUMPTIONS"


class InputError(DebtflowError):
    """Unreadable or malformed input file."""


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _tenor_map(data: Mapping, what: str) -> dict[int, float]:
    try:
        return {int(k): float(v) for k, v in data.items()}
    except (TypeError, ValueError, AttributeError):
        raise InputError(f"{what}: expected an object of tenor -> number") from None


def assumptions_from_dict(data: Mapping, source: str = "<assumptions>") -> Assumptions:
    try:
        g = GrowthAssumption(data["g"])
        knots = tuple((int(k["tenor"]), float(k["rate"])) for k in data["rates"])
        curve = RateCurve(knots)
        if "tenors" in data:
            grid = TenorGrid(tuple(data["tenors"]), int(data.get("max_tenor", 0)))
        else:
            grid = TenorGrid.default()
    except KeyError as exc:
        raise InputError(f"{source}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None
    return Assumptions(g, curve, grid)


def assumptions_to_dict(a: Assumptions) -> dict:
    return {
        "g": a.g,
        "rates": [{"tenor": t, "rate": r} for t, r in a.curve.knots],
        "tenors": list(a.grid.tenors),
        "max_tenor": a.grid.max_tenor,
    }


def default_assumptions_path() -> Path:
    return Path(str(resources.files("debtflow") / "data" / "default_assumptions.json"))


def load_assumptions(path: str | Path | None = None) -> Assumptions:
    """Read assumptions from ``path``, ``$DEBTFLOW_ASSUMPTIONS`` or the shipped default."""
    path = path or os.environ.get(ENV_ASSUMPTIONS) or default_assumptions_path()
    return assumptions_from_dict(read_json(path), str(path))


def load_strategy(path: str | Path, grid: TenorGrid | None = None) -> Strategy:
    return validate_strategy(_tenor_map(read_json(path), str(path)), grid)


def strategy_to_dict(f: Strategy) -> dict[str, float]:
    return {str(j): v for j, v in f.as_dict().items()}


def load_window(path: str | Path, grid: TenorGrid) -> PolicyWindow:
    data = read_json(path)
    return PolicyWindow.from_bounds(
        grid,
        _tenor_map(data.get("lower", {}), f"{path}: lower"),
        _tenor_map(data.get("upper", {}), f"{path}: upper"),
    )


def load_simulation_config(path: str | Path, base: Assumptions | None = None) -> SimulationConfig:
    """Read a simulation config.

    Fields: ``strategy`` (tenor map), ``initial_deficit``, ``horizon``,
    optional ``initial_stock`` with ``initial_portfolio`` (remaining tenor
    map), ``deficit_overrides`` (year map), ``renormalize``, and optional
    ``g`` / ``rates`` overriding the assumptions.
    """
    data = read_json(path)
    a = base or load_assumptions(data.get("assumptions"))
    if "g" in data or "rates" in data:
        a = assumptions_from_dict(
            {**assumptions_to_dict(a), **{k: data[k] for k in ("g", "rates") if k in data}},
            str(path),
        )
    if "strategy" not in data:
        raise InputError(f"{path}: missing field 'strategy'")
    f = validate_strategy(_tenor_map(data["strategy"], f"{path}: strategy"), a.grid)
    portfolio = None
    if "initial_portfolio" in data:
        portfolio = np.zeros(a.grid.max_tenor)
        for i, v in _tenor_map(data["initial_portfolio"], f"{path}: initial_portfolio").items():
            if not 1 <= i <= a.grid.max_tenor:
                raise InputError(f"{path}: remaining tenor {i} outside 1..{a.grid.max_tenor}")
            portfolio[i - 1] = v
    overrides = _tenor_map(data.get("deficit_overrides", {}), f"{path}: deficit_overrides")
    try:
        return SimulationConfig(
            strategy=f,
            g=a.g,
            curve=a.curve,
            initial_deficit=float(data.get("initial_deficit", 1.0)),
            horizon=int(data.get("horizon", 300)),
            initial_stock=float(data.get("initial_stock", 0.0)),
            initial_portfolio=portfolio,
            deficit_overrides=overrides or None,
            renormalize=bool(data.get("renormalize", False)),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
