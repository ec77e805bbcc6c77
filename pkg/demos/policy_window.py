"""
Improving a strategy inside a policy window
===========================================

Debt managers rarely move far from current practice.  Allow each tenor to
move five points either way and ask the linear program for the cheapest mix
at no extra rollover, and the safest mix at no extra cost.
"""

from debtflow import PolicyWindow, RateCurve, dominant_directions, metrics, optimize_constrained, validate_strategy

curve = RateCurve.baseline()
g = 0.08
current = validate_strategy({1: 0.423, 2: 0.134, 3: 0.077, 5: 0.131, 7: 0.098, 10: 0.089, 30: 0.049})
window = PolicyWindow.around(current, 0.05)

cost_dom, risk_dom = dominant_directions(current, window, g, curve)
rows = [("current", current), ("cheaper", cost_dom), ("safer", risk_dom)]
print("            RR*     WAC*   " + "  ".join(f"{j:>5d}y" for j in current.grid.tenors))
for name, f in rows:
    m = metrics(f, g, curve)
    print(f"{name:9s} {m.rr_star:6.2%}  {m.wac_star:6.3%}  "
          + "  ".join(f"{v:6.1%}" for v in f.fractions))

###############################################################################
# A constrained frontier: tighten the rollover budget and report which
# bounds bind.

print()
for R in (0.26, 0.24, 0.22, 0.20):
    res = optimize_constrained(window, R, g, curve)
    print(f"R <= {R:.2f}: WAC* {res.objective:.3%}  binding {', '.join(res.binding_constraints)}")
