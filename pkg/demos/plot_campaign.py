"""
Seeded theorem campaign
=======================

Random spaces and maps are drawn from (seed, trial) and every implication is
rechecked exactly. Any failure comes with a replay command.
"""

from kannanlab import campaign, mine_separation
from kannanlab.formats import fmt

summary = campaign(2000, sizes=(3, 7), n_values=(2, 5), seed=7)
print("ok:", summary.ok, "npk members:", summary.npk_members)
for claim, c in summary.counts.items():
    print(f"{claim:38s} checked={c['checked']:5d} failed={c['failed']}")

# random 3-point members that fail the 2-point condition
for w in mine_separation(3, 200)[:3]:
    print(w.config.to_dict(), fmt(w.upper.min_coefficient), fmt(w.lower.min_coefficient))
