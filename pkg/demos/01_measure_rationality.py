"""
Measuring choice consistency from raw decisions
===============================================

Two rounds are enough to contradict yourself. This walkthrough builds the
smallest inconsistent choice log by hand, finds its violations, and locates
the efficiency level at which the contradictions disappear.
"""

from rationality import (
    ChoiceDataset,
    Observation,
    ccei,
    ccei_grid_oracle,
    decision_series,
    garp_violations,
    satisfies_garp,
    validate,
)

# Round 1: good A costs 1, good B costs 2; the decider buys (1, 4).
# Round 2: prices swap to (2, 1) and the decider buys the mirror (4, 1).
# Each chosen bundle costs 9, and each round the *other* bundle would have
# cost only 6 -- both choices are revealed strictly preferred to each other.
crossing = ChoiceDataset(
    [
        Observation(prices=(1.0, 2.0), budget=9.0, choice=(1.0, 4.0)),
        Observation(prices=(2.0, 1.0), budget=9.0, choice=(4.0, 1.0)),
    ],
    label="crossing-preferences",
)

report = garp_violations(crossing, 1.0)
print(f"violating pairs at full efficiency: {report.pairs}")

# The validation report confirms budgets were exhausted, so the
# contradiction is real and not a budget artifact.
print(f"budget discipline clean: {validate(crossing).clean}")

# How much budget slack would rationalize this log? Shrink the efficiency
# level until the contradictions vanish: that point is the critical cost
# efficiency index. Here the analytic answer is 6/9 = 2/3.
index = ccei(crossing)
print(f"critical cost efficiency: {index.value:.6f} (bisection, {index.iterations} steps)")
print(f"grid oracle at step 1e-3: {ccei_grid_oracle(crossing, step=1e-3):.3f}")
print(f"consistent at 2/3: {satisfies_garp(crossing, 2.0 / 3.0)}")
print(f"consistent at 0.67: {satisfies_garp(crossing, 0.67)}")

# The per-round decision statistic used for cross-subject rank comparisons
# is the spending share on good A.
print(f"decision series: {[round(v, 4) for v in decision_series(crossing).values]}")
