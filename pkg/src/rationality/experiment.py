"""Experiment orchestration: rosters of agents, aggregation, and reports.

An experiment runs each configured agent through a number of seeded
sessions, scores every session (violation count, critical cost
efficiency, rank agreement against a reference decider facing the same
prices), and aggregates one report row per agent. A block of published
benchmark rows is appended to reports verbatim for side-by-side reading;
those numbers come from an external study of human subjects and
LLM-driven agents and are never recomputed here.

Determinism: every random draw descends from the master seed through
numpy ``SeedSequence`` streams (PCG64 generators). Stream 1 keys the
price draws by session index, so all agents in a session face identical
rounds; stream 2 keys agent noise by (agent index, session index), so
adding an agent to the roster never perturbs existing agents' draws;
stream 3 keys the built-in reference decider. Identical config plus
identical master seed therefore reproduces every output byte.

Config files are TOML::

    master_seed = 7
    reference = "rational"        # optional: roster label to rank against

    [session]
    rounds = 25
    budget = 100.0
    risk_regime = "high"          # or "low"; price_low/price_high override

    [[agents]]
    label = "rational"
    kind = "ces_rational"
    sessions = 100
    ces_exponent = -1.0

    [[agents]]
    label = "safety-specialist"
    kind = "specialist"
    sessions = 100
    domain_weight = 1.0
      [agents.domain_rule]
      ratio_threshold = 1.0
      cheap_share = 0.0
      dear_share = 0.5

    [[agents]]
    label = "live-model"
    kind = "external"
    sessions = 5
    command = ["python3", "my_agent.py"]
    timeout = 30.0

When ``reference`` is omitted, sessions are ranked against a built-in
consistent baseline (constant-elasticity maximizer with exponent -1, so
its spending share moves with prices and rank agreement is defined).
"""

from __future__ import annotations

import hashlib
import json
import re
import warnings
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .agents import (
    AgentProfile,
    DomainRule,
    SessionConfig,
    TaskRound,
    generate_session,
    run_session,
)
from .choices import (
    ChoiceDataset,
    DatasetParseError,
    ValidationReport,
    load_dataset,
    save_dataset,
    validate,
)
from .efficiency import EfficiencyIndex, ccei
from .protocol import DEFAULT_TIMEOUT, ExternalAgentClient, ProtocolError
from .ranking import (
    DecisionSeries,
    UndefinedCorrelationError,
    decision_series,
    spearman,
)
from .relations import ViolationReport, garp_violations, warp_violations

__all__ = [
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

TOOL_VERSION = "0.1.0"

# Substream tags under the master seed; see the module docstring.
_PRICE_STREAM = 1
_AGENT_STREAM = 2
_REFERENCE_STREAM = 3

REFERENCE_PROFILE = AgentProfile(
    kind="ces_rational", label="built-in rational baseline", ces_share=0.5, ces_exponent=-1.0
)


class ConfigError(ValueError):
    """A config file is malformed or inconsistent."""


@dataclass(frozen=True)
class AgentSpec:
    """One roster entry: an agent profile plus how many sessions to run."""

    profile: AgentProfile
    sessions: int = 1
    command: tuple[str, ...] = ()
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self) -> None:
        if self.sessions < 1:
            raise ValueError(f"sessions must be >= 1, got {self.sessions}")
        if self.profile.kind == "external" and not self.command:
            raise ValueError(f"external agent {self.profile.display_label!r} needs a command")
        if self.profile.kind != "external" and self.command:
            raise ValueError(
                f"agent {self.profile.display_label!r} is {self.profile.kind}, not external; "
                "command does not apply"
            )
        if not self.timeout > 0.0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")


@dataclass(frozen=True)
class ExperimentConfig:
    """A full experiment: session shape, agent roster, reference, master seed."""

    session: SessionConfig
    agents: tuple[AgentSpec, ...]
    master_seed: int = 0
    reference: str | None = None

    def __post_init__(self) -> None:
        if not self.agents:
            raise ValueError("an experiment needs at least one agent")
        labels = [spec.profile.display_label for spec in self.agents]
        duplicates = {name for name in labels if labels.count(name) > 1}
        if duplicates:
            raise ValueError(f"duplicate agent labels: {sorted(duplicates)}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be non-negative, got {self.master_seed}")
        if self.reference is not None:
            spec = self._find_reference()
            if spec.profile.kind == "external":
                raise ValueError(
                    "the reference agent must be deterministic and local; "
                    f"{self.reference!r} is external"
                )

    def _find_reference(self) -> AgentSpec:
        for spec in self.agents:
            if spec.profile.display_label == self.reference:
                return spec
        raise ValueError(f"reference {self.reference!r} matches no agent label")


@dataclass(frozen=True)
class SessionRecord:
    """Metrics for one (agent, session) run; ``failed`` runs carry no data."""

    agent_label: str
    session_index: int
    dataset: ChoiceDataset | None
    garp_count: int
    ccei_value: float
    spearman_value: float | None
    failed: bool = False
    failure: str = ""


@dataclass(frozen=True)
class ExperimentResult:
    """All session records of one experiment, in roster-then-session order."""

    config: ExperimentConfig
    records: tuple[SessionRecord, ...]
    reference_label: str

    def agent_records(self, label: str) -> tuple[SessionRecord, ...]:
        return tuple(r for r in self.records if r.agent_label == label)


@dataclass(frozen=True)
class ReportRow:
    """Aggregated metrics for one simulated agent."""

    label: str
    sessions: int
    rounds_per_session: int
    garp_violations: int
    mean_ccei: float
    mean_spearman: float | None
    failed_sessions: int = 0

    @property
    def rounds_display(self) -> str:
        return f"{self.sessions} × {self.rounds_per_session}"


@dataclass(frozen=True)
class BenchmarkRow:
    """One published benchmark row, displayed verbatim and never recomputed."""

    label: str
    sessions: int
    rounds_per_session: int
    garp_violations: int
    mean_ccei: float
    mean_spearman: float
    note: str = ""

    @property
    def rounds_display(self) -> str:
        return f"{self.sessions} × {self.rounds_per_session}"


BENCHMARK_NOTE = (
    "Published reference values, not reproduced by this tool. The published "
    "rank correlation is against that study's human subjects; simulated rows "
    "are ranked against this run's configured reference."
)

PUBLISHED_BENCHMARK: tuple[BenchmarkRow, ...] = (
    BenchmarkRow(
        "Humans", 347, 25, 50, 0.9600, -0.7500,
        note="violation-count aggregation across the 347 subjects is unstated at the source",
    ),
    BenchmarkRow("GPT", 100, 25, 3, 0.8730, -0.6850),
    BenchmarkRow("Basic Agent", 100, 25, 99, 0.9160, -0.4590),
    BenchmarkRow("Biotech Expert Agent", 100, 25, 88, 0.1270, -0.1750),
    BenchmarkRow("Economist Agent", 100, 25, 100, 0.2977, -0.3694),
    BenchmarkRow("Basic Agent (new)", 100, 25, 70, 0.8500, -0.7700),
)


@dataclass(frozen=True)
class Provenance:
    """Everything needed to reproduce or audit a report."""

    master_seed: int
    config_digest: str
    tool_version: str
    reference_label: str
    failed_sessions: int


@dataclass(frozen=True)
class RationalityReport:
    """Aggregated experiment rows plus the published benchmark block."""

    rows: tuple[ReportRow, ...]
    benchmark: tuple[BenchmarkRow, ...]
    benchmark_note: str
    provenance: Provenance


def _derive_seed(*keys: int) -> int:
    """Documented mixing function: one 64-bit seed per key path."""
    return int(np.random.SeedSequence(list(keys)).generate_state(1, np.uint64)[0])


def config_digest(config: ExperimentConfig) -> str:
    """SHA-256 over the canonical JSON form of the resolved config."""
    payload = json.dumps(asdict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Config files


_TOP_KEYS = {"master_seed", "reference", "session", "agents"}
_SESSION_KEYS = {"rounds", "budget", "risk_regime", "price_low", "price_high"}
_AGENT_KEYS = {
    "label",
    "kind",
    "sessions",
    "command",
    "timeout",
    "ces_share",
    "ces_exponent",
    "domain_weight",
    "expertise",
    "deliberation_points",
    "consistency_floor",
    "noise",
    "seed",
    "domain_rule",
}
_RULE_KEYS = {"ratio_threshold", "cheap_share", "dear_share", "risky_good"}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def _session_from_dict(data: dict) -> SessionConfig:
    _reject_unknown(data, _SESSION_KEYS, "[session]")
    try:
        return SessionConfig(
            rounds=int(data.get("rounds", 25)),
            budget=float(data.get("budget", 100.0)),
            risk_regime=str(data.get("risk_regime", "high")),
            price_low=None if "price_low" not in data else float(data["price_low"]),
            price_high=None if "price_high" not in data else float(data["price_high"]),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid [session]: {err}") from err


def _agent_from_dict(index: int, data: dict) -> AgentSpec:
    where = f"[[agents]] entry {index + 1}"
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a table")
    _reject_unknown(data, _AGENT_KEYS, where)
    if "kind" not in data:
        raise ConfigError(f"{where} is missing 'kind'")
    rule_data = data.get("domain_rule", {})
    if not isinstance(rule_data, dict):
        raise ConfigError(f"{where} domain_rule must be a table")
    _reject_unknown(rule_data, _RULE_KEYS, f"{where} domain_rule")
    try:
        rule = DomainRule(
            ratio_threshold=float(rule_data.get("ratio_threshold", 1.0)),
            cheap_share=float(rule_data.get("cheap_share", 0.0)),
            dear_share=float(rule_data.get("dear_share", 0.5)),
            risky_good=int(rule_data.get("risky_good", 0)),
        )
        profile = AgentProfile(
            kind=str(data["kind"]),
            label=str(data.get("label", "")),
            ces_share=float(data.get("ces_share", 0.5)),
            ces_exponent=float(data.get("ces_exponent", 0.0)),
            domain_weight=float(data.get("domain_weight", 1.0)),
            expertise=float(data.get("expertise", 0.6)),
            deliberation_points=int(data.get("deliberation_points", 256)),
            consistency_floor=float(data.get("consistency_floor", 0.0)),
            domain_rule=rule,
            noise=float(data.get("noise", 0.0)),
            seed=int(data.get("seed", 0)),
        )
        command = data.get("command", [])
        if isinstance(command, str) or not isinstance(command, list):
            raise ConfigError(f"{where} command must be a list of strings")
        return AgentSpec(
            profile=profile,
            sessions=int(data.get("sessions", 1)),
            command=tuple(str(part) for part in command),
            timeout=float(data.get("timeout", DEFAULT_TIMEOUT)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid {where}: {err}") from err


def parse_config(text: str) -> ExperimentConfig:
    """Parse TOML experiment config text; raise ConfigError naming the problem."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"config is not valid TOML: {err}") from err
    _reject_unknown(data, _TOP_KEYS, "the top level")
    agents_data = data.get("agents", [])
    if not isinstance(agents_data, list):
        raise ConfigError("'agents' must be an array of tables ([[agents]])")
    agents = tuple(_agent_from_dict(i, entry) for i, entry in enumerate(agents_data))
    reference = data.get("reference")
    try:
        return ExperimentConfig(
            session=_session_from_dict(data.get("session", {})),
            agents=agents,
            master_seed=int(data.get("master_seed", 0)),
            reference=None if reference is None else str(reference),
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err


def load_config(path) -> ExperimentConfig:
    """Read and parse a TOML experiment config file."""
    return parse_config(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Running experiments


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run every roster agent through its seeded sessions and score them.

    All agents share the per-session-index price stream; noise streams are
    keyed by (agent index, session index); protocol failures of external
    agents mark that session failed and the run continues.
    """
    master = config.master_seed
    rounds_cache: dict[int, tuple[TaskRound, ...]] = {}
    series_cache: dict[int, DecisionSeries] = {}

    if config.reference is None:
        reference_profile = REFERENCE_PROFILE
        reference_seed = lambda k: _derive_seed(master, _REFERENCE_STREAM, k)  # noqa: E731
    else:
        spec = config._find_reference()
        agent_index = config.agents.index(spec)
        reference_profile = spec.profile
        reference_seed = lambda k: _derive_seed(master, _AGENT_STREAM, agent_index, k)  # noqa: E731

    def rounds_for(k: int) -> tuple[TaskRound, ...]:
        if k not in rounds_cache:
            session = replace(config.session, seed=_derive_seed(master, _PRICE_STREAM, k))
            rounds_cache[k] = generate_session(session)
        return rounds_cache[k]

    def reference_series(k: int) -> DecisionSeries:
        if k not in series_cache:
            profile = replace(reference_profile, seed=reference_seed(k))
            series_cache[k] = decision_series(run_session(profile, rounds_for(k)))
        return series_cache[k]

    records: list[SessionRecord] = []
    for agent_index, spec in enumerate(config.agents):
        label = spec.profile.display_label
        for k in range(spec.sessions):
            rounds = rounds_for(k)
            profile = replace(
                spec.profile, seed=_derive_seed(master, _AGENT_STREAM, agent_index, k)
            )
            try:
                if profile.kind == "external":
                    with ExternalAgentClient(spec.command, spec.timeout) as client:
                        dataset = run_session(profile, rounds, chooser=client.decide, label=label)
                else:
                    dataset = run_session(profile, rounds, label=label)
            except ProtocolError as err:
                records.append(
                    SessionRecord(
                        agent_label=label,
                        session_index=k,
                        dataset=None,
                        garp_count=0,
                        ccei_value=0.0,
                        spearman_value=None,
                        failed=True,
                        failure=str(err),
                    )
                )
                continue
            try:
                agreement = spearman(decision_series(dataset), reference_series(k))
            except UndefinedCorrelationError:
                agreement = None
            records.append(
                SessionRecord(
                    agent_label=label,
                    session_index=k,
                    dataset=dataset,
                    garp_count=garp_violations(dataset, 1.0).count,
                    ccei_value=ccei(dataset).value,
                    spearman_value=agreement,
                )
            )
    reference_label = (
        config.reference if config.reference is not None else REFERENCE_PROFILE.display_label
    )
    return ExperimentResult(config=config, records=tuple(records), reference_label=reference_label)


def aggregate_report(result: ExperimentResult) -> RationalityReport:
    """One row per agent; failed sessions are excluded from every mean."""
    rows = []
    total_failed = 0
    for spec in result.config.agents:
        label = spec.profile.display_label
        records = result.agent_records(label)
        good = [r for r in records if not r.failed]
        failed = len(records) - len(good)
        total_failed += failed
        if not good:
            warnings.warn(f"agent {label!r}: all {len(records)} sessions failed; row omitted")
            continue
        agreements = [r.spearman_value for r in good if r.spearman_value is not None]
        rows.append(
            ReportRow(
                label=label,
                sessions=len(good),
                rounds_per_session=result.config.session.rounds,
                garp_violations=sum(r.garp_count for r in good),
                mean_ccei=sum(r.ccei_value for r in good) / len(good),
                mean_spearman=(sum(agreements) / len(agreements)) if agreements else None,
                failed_sessions=failed,
            )
        )
    provenance = Provenance(
        master_seed=result.config.master_seed,
        config_digest=config_digest(result.config),
        tool_version=TOOL_VERSION,
        reference_label=result.reference_label,
        failed_sessions=total_failed,
    )
    return RationalityReport(
        rows=tuple(rows),
        benchmark=PUBLISHED_BENCHMARK,
        benchmark_note=BENCHMARK_NOTE,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# Report export


def _fmt_spearman(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def _table_text(report: RationalityReport) -> str:
    header = f"{'Subject':<28}{'Rounds':>12}{'GARP viol.':>12}{'Mean CCEI':>12}{'Spearman':>12}"
    lines = [header, "-" * len(header)]
    for row in report.rows:
        lines.append(
            f"{row.label:<28}{row.rounds_display:>12}{row.garp_violations:>12}"
            f"{row.mean_ccei:>12.4f}{_fmt_spearman(row.mean_spearman):>12}"
        )
        if row.failed_sessions:
            lines.append(f"  ({row.failed_sessions} failed session(s) excluded)")
    lines.append("")
    lines.append("Published reference (not reproduced):")
    for row in report.benchmark:
        lines.append(
            f"{row.label:<28}{row.rounds_display:>12}{row.garp_violations:>12}"
            f"{row.mean_ccei:>12.4f}{row.mean_spearman:>12.4f}"
        )
        if row.note:
            lines.append(f"  note: {row.note}")
    lines.append("")
    lines.append(f"note: {report.benchmark_note}")
    p = report.provenance
    lines.append(
        f"provenance: master_seed={p.master_seed} reference={p.reference_label!r} "
        f"failed_sessions={p.failed_sessions} tool_version={p.tool_version}"
    )
    lines.append(f"config_digest: {p.config_digest}")
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _csv_text(report: RationalityReport) -> str:
    lines = ["subject,sessions,rounds_per_session,garp_violations,mean_ccei,mean_spearman,source"]
    for row in report.rows:
        lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    row.label,
                    row.sessions,
                    row.rounds_per_session,
                    row.garp_violations,
                    row.mean_ccei,
                    row.mean_spearman,
                    "simulated",
                )
            )
        )
    for row in report.benchmark:
        lines.append(
            ",".join(
                _csv_cell(v)
                for v in (
                    row.label,
                    row.sessions,
                    row.rounds_per_session,
                    row.garp_violations,
                    row.mean_ccei,
                    row.mean_spearman,
                    "published-reference",
                )
            )
        )
    return "\n".join(lines) + "\n"


def _json_text(report: RationalityReport) -> str:
    payload = {
        "rows": [asdict(row) for row in report.rows],
        "benchmark": [asdict(row) for row in report.benchmark],
        "benchmark_note": report.benchmark_note,
        "provenance": asdict(report.provenance),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def export_report(report: RationalityReport, format: str = "table") -> str:
    """Render a report as display text, CSV, or lossless JSON."""
    if format == "table":
        return _table_text(report)
    if format == "csv":
        return _csv_text(report)
    if format == "json":
        return _json_text(report)
    raise ValueError(f"unknown report format {format!r}; expected table, csv, or json")


def report_from_json(text: str) -> RationalityReport:
    """Inverse of ``export_report(..., 'json')``; field-exact round trip."""
    payload = json.loads(text)
    return RationalityReport(
        rows=tuple(ReportRow(**row) for row in payload["rows"]),
        benchmark=tuple(BenchmarkRow(**row) for row in payload["benchmark"]),
        benchmark_note=payload["benchmark_note"],
        provenance=Provenance(**payload["provenance"]),
    )


# ---------------------------------------------------------------------------
# Stand-alone dataset analysis


@dataclass(frozen=True)
class DatasetAnalysis:
    """Metric bundle for one externally supplied choice log."""

    label: str
    observations: int
    goods: int
    garp: ViolationReport
    warp: ViolationReport
    efficiency: EfficiencyIndex
    series: DecisionSeries
    validation: ValidationReport


def analyze_dataset(source, level: float = 1.0) -> DatasetAnalysis:
    """Score one dataset (path, text, file object, or ChoiceDataset).

    ``level`` sets the efficiency level of the violation reports; the
    efficiency index itself always searches the full range.
    """
    dataset = source if isinstance(source, ChoiceDataset) else load_dataset(source)
    return DatasetAnalysis(
        label=dataset.label,
        observations=len(dataset),
        goods=dataset.good_count,
        garp=garp_violations(dataset, level),
        warp=warp_violations(dataset, level),
        efficiency=ccei(dataset),
        series=decision_series(dataset),
        validation=validate(dataset),
    )


def analysis_to_dict(analysis: DatasetAnalysis) -> dict:
    """JSON-ready form of an analysis (stable key order via sort on dump)."""
    return {
        "label": analysis.label,
        "observations": analysis.observations,
        "goods": analysis.goods,
        "level": analysis.garp.level,
        "garp_violations": analysis.garp.count,
        "garp_pairs": [list(pair) for pair in analysis.garp.pairs],
        "warp_violations": analysis.warp.count,
        "warp_pairs": [list(pair) for pair in analysis.warp.pairs],
        "ccei": analysis.efficiency.value,
        "ccei_tolerance": analysis.efficiency.tolerance,
        "decision_series": list(analysis.series.values),
        "underspend_rounds": list(analysis.validation.underspend),
        "overspend_rounds": list(analysis.validation.overspend),
        "zero_bundle_rounds": list(analysis.validation.zero_bundle),
    }


# ---------------------------------------------------------------------------
# Task files and experiment output trees


_TASK_HEADER = "round,p_A,p_B,budget"


def save_tasks(rounds: Sequence[TaskRound], sink=None) -> str:
    """Serialize task rounds as CSV (same float convention as datasets)."""
    if not rounds:
        raise ValueError("no rounds to save")
    lines = [_TASK_HEADER]
    for index, task in enumerate(rounds):
        lines.append(
            ",".join([str(index + 1), repr(task.prices[0]), repr(task.prices[1]), repr(task.budget)])
        )
    text = "\n".join(lines) + "\n"
    if sink is not None:
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            with open(sink, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
    return text


def load_tasks(source) -> tuple[TaskRound, ...]:
    """Parse a task-round CSV produced by :func:`save_tasks`."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
        if "\n" not in text:
            text = Path(source).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DatasetParseError("empty task file", line=1)
    if lines[0].strip() != _TASK_HEADER:
        raise DatasetParseError(
            f"expected header {_TASK_HEADER!r}, got {lines[0]!r}", line=1
        )
    rounds = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 4:
            raise DatasetParseError(f"expected 4 fields, got {len(cells)}", line=line_no)
        try:
            rounds.append(
                TaskRound(prices=(float(cells[1]), float(cells[2])), budget=float(cells[3]))
            )
        except ValueError as err:
            raise DatasetParseError(str(err), line=line_no) from err
    if not rounds:
        raise DatasetParseError("task file has a header but no rounds", line=1)
    return tuple(rounds)


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", label).strip("-") or "agent"


def save_experiment(result: ExperimentResult, out_dir) -> RationalityReport:
    """Write datasets and the report (json/csv/table) under ``out_dir``.

    Every byte written is a pure function of (config, master seed).
    Returns the aggregated report.
    """
    report = aggregate_report(result)
    out = Path(out_dir)
    datasets = out / "datasets"
    datasets.mkdir(parents=True, exist_ok=True)
    for record in result.records:
        if record.dataset is None:
            continue
        name = f"{_safe_name(record.agent_label)}-s{record.session_index:04d}.csv"
        save_dataset(record.dataset, datasets / name)
    for fmt, filename in (("json", "report.json"), ("csv", "report.csv"), ("table", "report.txt")):
        (out / filename).write_text(export_report(report, fmt), encoding="utf-8", newline="\n")
    return report
