"""
Where does FY2016 issuance sit?
===============================

Map the FY2016 issuance mix to its long-run (risk, cost) point and set it
against the single-tenor frontier.
"""

import numpy as np

from debtflow import (
    RateCurve,
    Strategy,
    TenorGrid,
    equilibrium_distribution,
    equilibrium_wam,
    frontier_point,
    metrics,
    validate_strategy,
)

curve = RateCurve.baseline()
grid = TenorGrid.default()
g = 0.08

# Realized fractions by tenor bucket (bills in the 1y bucket).
fy2016 = validate_strategy({1: 0.423, 2: 0.134, 3: 0.077, 5: 0.131, 7: 0.098, 10: 0.089, 30: 0.049})
m = metrics(fy2016, g, curve)
print(f"FY2016: RR* = {m.rr_star:.1%}, WAC* = {m.wac_star:.2%}, t_WAC = {m.t_wac:.1f}y, "
      f"NWAM = {12 * m.nwam:.0f} months")

###############################################################################
# Concentrated issuance at one tenor traces the frontier.  Its rollover
# falls quickly with tenor while cost rises along the curve.

print("\n tenor   RR*     WAC*")
for j in grid.tenors:
    s = metrics(Strategy.single(j), g, curve)
    print(f"{j:>5d}  {s.rr_star:6.1%}  {s.wac_star:6.2%}")

###############################################################################
# At the same rollover budget the frontier is cheaper: the best blend of
# neighbouring tenors undercuts the realized mix.

best = frontier_point(m.rr_star, g, curve)
print(f"\nfrontier at RR* = {m.rr_star:.1%}: blend of {best.lower_tenor}y/{best.upper_tenor}y, "
      f"WAC* = {best.metrics.wac_star:.2%} (saving {1e4 * (m.wac_star - best.metrics.wac_star):.0f}bp)")

###############################################################################
# The steady-state stock that FY2016 issuance would build.

theta = equilibrium_distribution(fy2016, g)
print(f"\nsteady-state WAM {equilibrium_wam(theta):.2f}y; "
      f"share maturing within 1y {theta[0]:.1%}, beyond 10y {theta[10:].sum():.1%}")
print("cumulative maturity profile:", np.round(np.cumsum(theta)[[0, 1, 2, 4, 6, 9, 29]], 3))
