"""Revealed-preference rationality metrics and a budget-allocation simulator.

The library answers two questions about a log of budget-constrained
choices: is it consistent with maximizing any well-behaved utility (the
weak and generalized revealed-preference axioms, plus the critical cost
efficiency index measuring how badly consistency fails), and how closely
do two deciders' round-by-round choices agree in rank terms. A seeded
simulator generates task sessions and a small taxonomy of agents,
including a deliberating specialist whose consistency degrades as its
blend weight shifts toward a domain rule; an experiment harness sweeps
rosters of agents and renders report tables next to published benchmark
rows.
"""

from .agents import (
    AGENT_KINDS,
    PRICE_REGIMES,
    AgentProfile,
    DomainRule,
    RoundContext,
    SessionConfig,
    SpecialistDecision,
    TaskRound,
    basic_heuristic_agent,
    bundle_on_budget_line,
    ces_rational_agent,
    generate_session,
    random_uniform_agent,
    run_session,
    specialist_agent,
    specialist_decision,
)
from .choices import (
    DEFAULT_RTOL,
    Bundle,
    ChoiceDataset,
    DatasetParseError,
    DimensionError,
    Observation,
    ValidationReport,
    expenditure,
    load_dataset,
    save_dataset,
    validate,
)
from .efficiency import DEFAULT_CCEI_TOL, EfficiencyIndex, ccei, ccei_grid_oracle
from .experiment import (
    BENCHMARK_NOTE,
    PUBLISHED_BENCHMARK,
    REFERENCE_PROFILE,
    TOOL_VERSION,
    AgentSpec,
    BenchmarkRow,
    ConfigError,
    DatasetAnalysis,
    ExperimentConfig,
    ExperimentResult,
    Provenance,
    RationalityReport,
    ReportRow,
    SessionRecord,
    aggregate_report,
    analysis_to_dict,
    analyze_dataset,
    config_digest,
    export_report,
    load_config,
    load_tasks,
    parse_config,
    report_from_json,
    run_experiment,
    save_experiment,
    save_tasks,
)
from .protocol import DEFAULT_TIMEOUT, ExternalAgentClient, ProtocolError
from .ranking import (
    DecisionSeries,
    UndefinedCorrelationError,
    decision_series,
    spearman,
)
from .relations import (
    RelationMatrices,
    ViolationReport,
    direct_relations,
    expenditure_matrix,
    garp_violations,
    satisfies_garp,
    transitive_closure,
    warp_violations,
)

__version__ = TOOL_VERSION

__all__ = [
    "__version__",
    # choice data
    "DEFAULT_RTOL",
    "Bundle",
    "Observation",
    "ChoiceDataset",
    "ValidationReport",
    "DimensionError",
    "DatasetParseError",
    "expenditure",
    "validate",
    "load_dataset",
    "save_dataset",
    # relations
    "RelationMatrices",
    "ViolationReport",
    "direct_relations",
    "transitive_closure",
    "expenditure_matrix",
    "garp_violations",
    "warp_violations",
    "satisfies_garp",
    # efficiency
    "DEFAULT_CCEI_TOL",
    "EfficiencyIndex",
    "ccei",
    "ccei_grid_oracle",
    # ranking
    "DecisionSeries",
    "UndefinedCorrelationError",
    "decision_series",
    "spearman",
    # agents
    "AGENT_KINDS",
    "PRICE_REGIMES",
    "SessionConfig",
    "TaskRound",
    "DomainRule",
    "AgentProfile",
    "RoundContext",
    "SpecialistDecision",
    "generate_session",
    "bundle_on_budget_line",
    "ces_rational_agent",
    "basic_heuristic_agent",
    "random_uniform_agent",
    "specialist_agent",
    "specialist_decision",
    "run_session",
    # protocol
    "DEFAULT_TIMEOUT",
    "ExternalAgentClient",
    "ProtocolError",
    # experiment
    "TOOL_VERSION",
    "ConfigError",
    "AgentSpec",
    "ExperimentConfig",
    "SessionRecord",
    "ExperimentResult",
    "ReportRow",
    "BenchmarkRow",
    "Provenance",
    "RationalityReport",
    "DatasetAnalysis",
    "PUBLISHED_BENCHMARK",
    "BENCHMARK_NOTE",
    "REFERENCE_PROFILE",
    "parse_config",
    "load_config",
    "config_digest",
    "run_experiment",
    "aggregate_report",
    "export_report",
    "report_from_json",
    "analyze_dataset",
    "analysis_to_dict",
    "save_experiment",
    "save_tasks",
    "load_tasks",
]
