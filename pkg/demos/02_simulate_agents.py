"""
Simulating an agent roster and reading the report
=================================================

A full experiment: several agent kinds face identical price sequences,
each session is scored (violations, efficiency, rank agreement with a
rational reference), and the aggregate lands in a table next to the
published benchmark block.
"""

from rationality import (
    AgentProfile,
    AgentSpec,
    ExperimentConfig,
    SessionConfig,
    aggregate_report,
    export_report,
    run_experiment,
)

# 25-round sessions in the high-variation price regime; every agent sees
# the same 20 price sequences, so the comparison is paired.
session = SessionConfig(rounds=25, risk_regime="high")

roster = (
    # exact CES utility maximizer: the consistent baseline
    AgentSpec(
        profile=AgentProfile(kind="ces_rational", label="rational", ces_exponent=-1.0),
        sessions=20,
    ),
    # buys more of whatever is cheaper, with a little decision noise
    AgentSpec(
        profile=AgentProfile(kind="basic_heuristic", label="heuristic", noise=0.15),
        sessions=20,
    ),
    # structureless coin-flipper: the power baseline for the metrics
    AgentSpec(
        profile=AgentProfile(kind="random_uniform", label="random"),
        sessions=20,
    ),
    # domain specialist: blends a share-target rule against consistency
    AgentSpec(
        profile=AgentProfile(kind="specialist", label="expert", domain_weight=0.75),
        sessions=20,
    ),
)

config = ExperimentConfig(session=session, agents=roster, master_seed=7)
result = run_experiment(config)
report = aggregate_report(result)

print(export_report(report, format="table"))

# The same report serializes losslessly to JSON and flat CSV:
#   export_report(report, format="json")
#   export_report(report, format="csv")
