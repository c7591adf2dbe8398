"""Acceptance gate: nine end-to-end criteria with time budgets.

Each test records one pass/fail line through the ``criterion`` fixture;
the lines are echoed in the terminal summary. Tolerances and time budgets
are asserted, not just reported.
"""

import time

import numpy as np
import pytest

from rationality import (
    AgentProfile,
    AgentSpec,
    ChoiceDataset,
    ExperimentConfig,
    Observation,
    SessionConfig,
    aggregate_report,
    ccei,
    ccei_grid_oracle,
    garp_violations,
    generate_session,
    run_experiment,
    run_session,
    satisfies_garp,
    spearman,
)
from rationality.cli import main
from helpers import (
    dfs_garp_violations,
    dstar,
    random_budget_line_dataset,
    random_free_dataset,
)


class TestCriterion1AfriatConsistency:
    def test_rational_sessions_never_violate(self, criterion):
        rng = np.random.default_rng(101)
        started = time.perf_counter()
        clean = True
        for index in range(1000):
            regime = "high" if index % 2 else "low"
            rounds = generate_session(
                SessionConfig(rounds=25, risk_regime=regime, seed=index)
            )
            profile = AgentProfile(
                kind="ces_rational",
                ces_share=float(rng.uniform(0.05, 0.95)),
                ces_exponent=float(rng.uniform(-3.0, 0.9)),
            )
            dataset = run_session(profile, rounds)
            if garp_violations(dataset, 1.0).count != 0 or ccei(dataset).value != 1.0:
                clean = False
                break
        elapsed = time.perf_counter() - started
        criterion(
            1,
            f"1000 CES sessions, 0 violations and CCEI 1.0 each ({elapsed:.1f}s < 10s)",
            clean and elapsed < 10.0,
        )


class TestCriterion2GarpOracle:
    def test_closure_matches_path_enumeration(self, criterion):
        rng = np.random.default_rng(202)
        started = time.perf_counter()
        agree = True
        for index in range(500):
            rounds = int(rng.integers(2, 8))
            dataset = (
                random_budget_line_dataset(rng, rounds)
                if index % 2
                else random_free_dataset(rng, rounds)
            )
            level = 1.0 if index % 3 else float(rng.uniform(0.3, 1.0))
            if set(garp_violations(dataset, level).pairs) != dfs_garp_violations(
                dataset, level
            ):
                agree = False
                break
        elapsed = time.perf_counter() - started
        criterion(
            2,
            f"500 datasets T<=7, closure == DFS enumeration ({elapsed:.1f}s < 5s)",
            agree and elapsed < 5.0,
        )


class TestCriterion3CceiOracle:
    def test_bisection_matches_grid(self, criterion):
        rng = np.random.default_rng(303)
        started = time.perf_counter()
        worst = 0.0
        for _ in range(200):
            dataset = random_budget_line_dataset(rng, int(rng.integers(2, 26)))
            gap = abs(ccei(dataset).value - ccei_grid_oracle(dataset, step=1e-3))
            worst = max(worst, gap)
        elapsed = time.perf_counter() - started
        criterion(
            3,
            f"200 datasets, |bisection - grid(1e-3)| <= 1.1e-3 "
            f"(worst {worst:.2e}, {elapsed:.1f}s < 10s)",
            worst <= 1.1e-3 and elapsed < 10.0,
        )


class TestCriterion4WorkedExample:
    def test_dstar_pairs_and_ccei(self, criterion):
        dataset = dstar()
        report = garp_violations(dataset, 1.0)
        index = ccei(dataset)
        ok = (
            report.count == 2
            and set(report.pairs) == {(0, 1), (1, 0)}
            and abs(index.value - 0.666667) <= 1e-6
        )
        criterion(
            4,
            f"worked dataset: 2 violation pairs, CCEI {index.value:.6f} = 0.666667 +/- 1e-6",
            ok,
        )


class TestCriterion5MonotonicityLaws:
    def test_garp_ccei_and_rescaling_laws(self, criterion):
        rng = np.random.default_rng(505)

        garp_monotone = True
        for _ in range(100):
            dataset = random_budget_line_dataset(rng, 8)
            for _ in range(10):
                lo, hi = np.sort(rng.uniform(0.0, 1.0, size=2))
                if satisfies_garp(dataset, float(hi)) and not satisfies_garp(
                    dataset, float(lo)
                ):
                    garp_monotone = False

        subset_monotone = True
        for _ in range(100):
            dataset = random_budget_line_dataset(rng, 12)
            size = int(rng.integers(2, len(dataset)))
            keep = sorted(rng.choice(len(dataset), size=size, replace=False))
            subset = ChoiceDataset([dataset.observations[int(k)] for k in keep])
            if ccei(subset).value < ccei(dataset).value - 1e-6:
                subset_monotone = False

        rescale_invariant = True
        for scale in (1e-3, 7.0, 1e3):
            for _ in range(20):
                dataset = random_budget_line_dataset(rng, 10)
                target = int(rng.integers(len(dataset)))
                rows = list(dataset.observations)
                obs = rows[target]
                rows[target] = Observation(
                    tuple(scale * p for p in obs.prices), scale * obs.budget, obs.choice
                )
                scaled = ChoiceDataset(rows)
                same_counts = (
                    garp_violations(scaled, 1.0).count == garp_violations(dataset, 1.0).count
                )
                same_ccei = abs(ccei(scaled).value - ccei(dataset).value) <= 1e-12
                if not (same_counts and same_ccei):
                    rescale_invariant = False

        criterion(
            5,
            "monotone in e (10 pairs x 100 datasets), CCEI subset law (100 draws), "
            "price-rescale invariance (levels 1e-3, 7, 1e3)",
            garp_monotone and subset_monotone and rescale_invariant,
        )


class TestCriterion6RationalityShift:
    def test_specialization_sweep_degrades_consistency(self, criterion):
        weights = (0.0, 0.25, 0.5, 0.75, 1.0)
        sessions = 100
        mean_ccei = []
        mean_garp = []
        for weight in weights:
            ccei_values = []
            garp_counts = []
            for seed in range(sessions):
                rounds = generate_session(
                    SessionConfig(rounds=25, risk_regime="high", seed=seed)
                )
                profile = AgentProfile(
                    kind="specialist", domain_weight=weight, seed=seed
                )
                dataset = run_session(profile, rounds)
                ccei_values.append(ccei(dataset).value)
                garp_counts.append(garp_violations(dataset, 1.0).count)
            mean_ccei.append(sum(ccei_values) / sessions)
            mean_garp.append(sum(garp_counts) / sessions)

        non_increasing = all(
            later <= earlier + 1e-12 for earlier, later in zip(mean_ccei, mean_ccei[1:])
        )
        agreement = spearman(np.asarray(weights), np.asarray(mean_ccei))
        more_violations = mean_garp[-1] > mean_garp[0]
        summary = (
            f"mean CCEI {['%.3f' % v for v in mean_ccei]} non-increasing, "
            f"Spearman(weight, CCEI) {agreement:.2f} <= -0.8, "
            f"mean GARP {mean_garp[-1]:.1f} at full weight > {mean_garp[0]:.1f} at zero"
        )
        criterion(6, summary, non_increasing and agreement <= -0.8 and more_violations)


class TestCriterion7SpearmanCorrectness:
    def test_properties_and_worked_value(self, criterion):
        rng = np.random.default_rng(707)
        ok = spearman((1.0, 2.0, 3.0), (3.0, 1.0, 2.0)) == -0.5
        for _ in range(1000):
            a = rng.uniform(size=12)
            b = rng.uniform(size=12)
            value = spearman(a, b)
            if not -1.0 <= value <= 1.0:
                ok = False
            if abs(spearman(b, a) - value) > 1e-12:
                ok = False
            if abs(spearman(np.exp(a), b) - value) > 1e-12:
                ok = False
        criterion(
            7,
            "rank agreement: range, symmetry, monotone invariance on 1000 pairs; "
            "[1,2,3] vs [3,1,2] = -0.5 exactly",
            ok,
        )


class TestCriterion8Determinism:
    def test_simulate_runs_are_byte_identical(self, criterion, tmp_path, capsys):
        config = tmp_path / "experiment.toml"
        config.write_text(
            """
master_seed = 99

[session]
rounds = 25

[[agents]]
kind = "ces_rational"
label = "rational"
ces_exponent = -1.0
sessions = 3

[[agents]]
kind = "basic_heuristic"
label = "heuristic"
noise = 0.2
sessions = 3

[[agents]]
kind = "specialist"
label = "expert"
domain_weight = 0.75
sessions = 3
"""
        )
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            assert main(["simulate", "--config", str(config), "--out", str(out)]) == 0
            outputs.append(
                {
                    str(path.relative_to(out)): path.read_bytes()
                    for path in sorted(out.rglob("*"))
                    if path.is_file()
                }
            )
        capsys.readouterr()
        identical = outputs[0] == outputs[1] and len(outputs[0]) == 12
        criterion(
            8,
            f"two simulate runs, {len(outputs[0])} files each, byte-identical trees",
            identical,
        )


class TestCriterion9PerformanceFloor:
    def test_single_analysis_under_10ms(self, criterion):
        rounds = generate_session(SessionConfig(rounds=25, seed=9))
        dataset = run_session(AgentProfile(kind="random_uniform", seed=9), rounds)
        best = min(
            _timed(lambda: (garp_violations(dataset, 1.0), ccei(dataset)))
            for _ in range(5)
        )
        criterion(
            9,
            f"25-round analysis {best * 1e3:.2f}ms < 10ms (part 1 of 2)",
            best < 0.010,
        )

    def test_full_experiment_under_60s(self, criterion):
        roster = (
            AgentSpec(
                profile=AgentProfile(kind="ces_rational", label="rational", ces_exponent=-1.0),
                sessions=100,
            ),
            AgentSpec(
                profile=AgentProfile(kind="basic_heuristic", label="heuristic", noise=0.2),
                sessions=100,
            ),
            AgentSpec(
                profile=AgentProfile(kind="random_uniform", label="random"), sessions=100
            ),
            AgentSpec(
                profile=AgentProfile(kind="specialist", label="expert", domain_weight=1.0),
                sessions=100,
            ),
        )
        config = ExperimentConfig(
            session=SessionConfig(rounds=25), agents=roster, master_seed=1
        )
        started = time.perf_counter()
        report = aggregate_report(run_experiment(config))
        elapsed = time.perf_counter() - started
        criterion(
            9,
            f"4 kinds x 100 sessions x 25 rounds + metrics in {elapsed:.1f}s < 60s "
            "(part 2 of 2)",
            elapsed < 60.0 and len(report.rows) == 4,
        )


def _timed(thunk) -> float:
    started = time.perf_counter()
    thunk()
    return time.perf_counter() - started
