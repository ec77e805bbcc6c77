"""Asymptotic cost and risk metrics for sovereign debt-issuance strategies."""

from .asymptotics import (
    StrategyMetrics,
    check_growth_dominance,
    cost_weights,
    effective_growth,
    equilibrium_distribution,
    equilibrium_wam,
    implicit_metrics,
    metrics,
    rollover_kernel,
    tau,
)
from .core import (
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
from .errors import DebtflowError
from .frontier import (
    dominant_directions,
    frontier_point,
    optimize_constrained,
    sweet_spot_tenor,
    verify_convexity_condition,
)
from .simulator import SimulationConfig, empirical_metrics_at, run

__version__ = "0.1.0"
