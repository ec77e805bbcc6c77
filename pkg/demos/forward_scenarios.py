"""
Funding a growing gap
=====================

Start from prevailing auction sizes and add a funding gap each year.  Three
ways of closing it give three trajectories in (risk, cost) space.
"""

from importlib import resources

from debtflow import RateCurve, metrics
from debtflow.ingestion import AuctionPattern, ScenarioPolicy, scenario_path, spot_fractions

curve = RateCurve.baseline()
g = 0.08
pattern = AuctionPattern.load(resources.files("debtflow") / "data" / "example_auction_pattern.json")
base = metrics(spot_fractions(pattern), g, curve)
print(f"spot pattern: RR* {base.rr_star:.1%}, WAC* {base.wac_star:.3%}")

# $150bn of extra issuance each year for a decade.
gaps = [150.0] * 10
for policy in ScenarioPolicy:
    path = [metrics(f, g, curve) for f in scenario_path(pattern, policy, gaps)]
    trail = "  ".join(f"({m.rr_star:.1%}, {m.wac_star:.3%})" for m in path[::3])
    print(f"{policy.value:17s} {trail}")
