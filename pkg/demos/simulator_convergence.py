"""
Simulating the debt roll
========================

Run the year-by-year budget recursion and watch the empirical cost and
rollover settle onto their closed forms.  Then break the growth condition
``g > WAC*`` and see what the portfolio does instead.
"""

import numpy as np

from debtflow import (
    RateCurve,
    SimulationConfig,
    Strategy,
    effective_growth,
    implicit_metrics,
    metrics,
    run,
    validate_strategy,
)

curve = RateCurve.baseline()
fy2016 = validate_strategy({1: 0.423, 2: 0.134, 3: 0.077, 5: 0.131, 7: 0.098, 10: 0.089, 30: 0.049})

###############################################################################
# Base case: deficits grow 8% a year, faster than the average coupon.

state = run(SimulationConfig(fy2016, 0.08, curve, horizon=300))
m = metrics(fy2016, 0.08, curve)
print(" year    wac_t     rr_t")
for t in (5, 10, 20, 50, 100, 300):
    print(f"{t:5d}  {state.wac[t - 1]:.5f}  {state.rr[t - 1]:.5f}")
print(f"limit  {m.wac_star:.5f}  {m.rr_star:.5f}")

###############################################################################
# A single 5y tenor converges in a saw-tooth: each cohort cycle shaves the
# rollover error.

five = run(SimulationConfig(Strategy.single(5), 0.08, curve, horizon=60))
err = np.abs(five.rr - metrics(Strategy.single(5), 0.08, curve).rr_star)
print("\n5y rollover error by 5-year block:", [f"{e:.1e}" for e in err.reshape(-1, 5).max(axis=1)])

###############################################################################
# With slow deficit growth, interest compounds faster than deficits and
# takes over.  The run still converges, but to the closed forms evaluated
# at the rate that balances cost and growth.

for g in (0.0, 0.04):
    slow = run(SimulationConfig(fy2016, g, curve, horizon=3000, renormalize=True))
    x = effective_growth(fy2016, g, curve)
    nominal, implicit = metrics(fy2016, g, curve), implicit_metrics(fy2016, g, curve)
    print(f"\ng = {g:.0%}: effective growth {x:.4%}")
    print(f"  simulated rr {slow.rr[-1]:.5f} | at nominal g {nominal.rr_star:.5f} "
          f"| at effective g {implicit.rr_star:.5f}")
