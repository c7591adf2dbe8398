"""Budget-allocation task sessions and a taxonomy of simulated deciders.

A session is a fixed number of rounds; each round offers two goods at
seeded random prices and a constant budget. All prices come from numpy's
``default_rng`` (the PCG64 generator), so a seed pins the entire session
bit-for-bit on every platform. Two price regimes are built in:

* ``low``: prices uniform in [0.9, 1.1], so relative prices barely move;
* ``high``: prices uniform in [0.2, 5.0], so relative prices swing hard.

Agents map a round (plus the session history so far) to a bundle on the
budget line:

* ``ces_rational``: closed-form demand for a constant-elasticity utility;
  never violates the revealed-preference axioms.
* ``basic_heuristic``: splits the budget in proportion to inverse prices,
  optionally perturbed by seeded noise.
* ``random_uniform``: uniform random budget share; a power baseline that
  shows the metrics can tell structure from noise.
* ``specialist``: deliberates over a discretized budget line, blending a
  domain-rule fit score against a consistency score that estimates how
  many new revealed-preference violations a candidate would introduce.
  The blend weight is the specialization knob the experiment harness
  sweeps.

The specialist's domain rule targets a spending share for the risky good
that switches at a relative-price threshold. The default targets shun
the risky good exactly when it is relatively cheap; that reversal (fleeing
a good as it becomes a bargain) is what manufactures violations, since any
rule that moves the share weakly in the other direction is rationalizable
and would leave the consistency metrics flat.

Deliberation capacity is a fixed number of share grid points split by
``expertise``: an ``expertise`` fraction goes to the domain side (denser
candidates near the rule's targets), the rest to consistency probes where
the violation score is computed exactly. Off-probe candidates reuse the
nearest probe's score, so low-probe (high-expertise) agents mis-estimate
consistency more often and leak more violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .choices import Bundle, ChoiceDataset, Observation
from .relations import _close, _relations_from_matrix, _weak_strict

__all__ = [
    "PRICE_REGIMES",
    "SessionConfig",
    "TaskRound",
    "DomainRule",
    "AgentProfile",
    "RoundContext",
    "SpecialistDecision",
    "AGENT_KINDS",
    "generate_session",
    "bundle_on_budget_line",
    "ces_rational_agent",
    "basic_heuristic_agent",
    "random_uniform_agent",
    "specialist_agent",
    "specialist_decision",
    "run_session",
]

PRICE_REGIMES: dict[str, tuple[float, float]] = {
    "low": (0.9, 1.1),
    "high": (0.2, 5.0),
}

AGENT_KINDS = ("ces_rational", "basic_heuristic", "random_uniform", "specialist", "external")


@dataclass(frozen=True)
class SessionConfig:
    """Parameters of one simulated session.

    ``price_low``/``price_high`` default to the named regime's bounds and
    may be overridden together for custom regimes.
    """

    rounds: int = 25
    budget: float = 100.0
    risk_regime: str = "high"
    price_low: float | None = None
    price_high: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if not self.budget > 0.0:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if self.risk_regime not in PRICE_REGIMES:
            raise ValueError(
                f"unknown risk regime {self.risk_regime!r}; expected one of {sorted(PRICE_REGIMES)}"
            )
        if (self.price_low is None) != (self.price_high is None):
            raise ValueError("price_low and price_high must be overridden together")
        low, high = self.price_bounds
        if not 0.0 < low <= high:
            raise ValueError(f"price bounds must satisfy 0 < low <= high, got ({low}, {high})")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    @property
    def price_bounds(self) -> tuple[float, float]:
        if self.price_low is None:
            return PRICE_REGIMES[self.risk_regime]
        return (self.price_low, self.price_high)


@dataclass(frozen=True)
class TaskRound:
    """One round of the task: two posted prices and a budget."""

    prices: tuple[float, float]
    budget: float

    def __post_init__(self) -> None:
        if len(self.prices) != 2:
            raise ValueError("task rounds offer exactly two goods")
        if not all(p > 0.0 for p in self.prices):
            raise ValueError(f"prices must be positive, got {self.prices}")
        if not self.budget > 0.0:
            raise ValueError(f"budget must be positive, got {self.budget}")


@dataclass(frozen=True)
class DomainRule:
    """Share target for the risky good, switching at a relative-price threshold.

    When ``p_risky / p_other < ratio_threshold`` the rule targets
    ``cheap_share`` of the budget on the risky good; otherwise it targets
    ``dear_share``. The defaults (shun the risky good only when it is
    cheap) are the violation-inducing direction; swapping the two targets
    yields a cautious rule that the consistency metrics cannot flag.
    """

    ratio_threshold: float = 1.0
    cheap_share: float = 0.0
    dear_share: float = 0.5
    risky_good: int = 0

    def __post_init__(self) -> None:
        if not self.ratio_threshold > 0.0:
            raise ValueError(f"ratio_threshold must be positive, got {self.ratio_threshold}")
        for name in ("cheap_share", "dear_share"):
            share = getattr(self, name)
            if not 0.0 <= share <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {share}")
        if self.risky_good not in (0, 1):
            raise ValueError(f"risky_good must be 0 or 1, got {self.risky_good}")

    def target_share(self, prices: Sequence[float]) -> float:
        """Target spending share for good 0 given this round's prices."""
        ratio = prices[self.risky_good] / prices[1 - self.risky_good]
        on_risky = self.cheap_share if ratio < self.ratio_threshold else self.dear_share
        return on_risky if self.risky_good == 0 else 1.0 - on_risky


@dataclass(frozen=True)
class AgentProfile:
    """Everything that determines an agent's behavior, apart from the rounds.

    Attributes:
        kind: one of ``AGENT_KINDS``. ``external`` profiles are driven by
            the experiment harness through the wire protocol and cannot be
            dispatched here directly.
        label: display name for reports; defaults to ``kind``.
        ces_share: utility weight on good 0, in [0, 1] (endpoints are the
            single-good corner cases).
        ces_exponent: curvature of the utility, < 1; 0 selects the
            constant-share (Cobb-Douglas) limit.
        domain_weight: specialist blend weight in [0, 1]; 0 scores only
            consistency (and short-circuits to the exact rational bundle),
            1 scores only the domain rule.
        expertise: fraction of deliberation capacity spent on the domain
            grid rather than on consistency probes, in [0, 1].
        deliberation_points: total share-grid capacity per round (>= 1).
        consistency_floor: when positive, candidates whose estimated
            consistency score falls below this are discarded (with a
            flagged fallback when nothing survives).
        domain_rule: the specialist's share-target rule.
        noise: scale of the seeded share perturbation used by
            ``basic_heuristic`` (standard deviation of a normal draw).
        seed: root of this agent's private noise stream; each round uses
            the stream derived from (seed, round index).
    """

    kind: str
    label: str = ""
    ces_share: float = 0.5
    ces_exponent: float = 0.0
    domain_weight: float = 1.0
    expertise: float = 0.6
    deliberation_points: int = 256
    consistency_floor: float = 0.0
    domain_rule: DomainRule = field(default_factory=DomainRule)
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in AGENT_KINDS:
            raise ValueError(f"unknown agent kind {self.kind!r}; expected one of {AGENT_KINDS}")
        if not 0.0 <= self.ces_share <= 1.0:
            raise ValueError(f"ces_share must lie in [0, 1], got {self.ces_share}")
        if not self.ces_exponent < 1.0:
            raise ValueError(f"ces_exponent must be < 1, got {self.ces_exponent}")
        for name in ("domain_weight", "expertise", "consistency_floor"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.deliberation_points < 1:
            raise ValueError(f"deliberation_points must be >= 1, got {self.deliberation_points}")
        if self.noise < 0.0:
            raise ValueError(f"noise must be non-negative, got {self.noise}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    @property
    def display_label(self) -> str:
        return self.label or self.kind


@dataclass(frozen=True)
class RoundContext:
    """A round in progress: the current offer plus the session so far."""

    prices: tuple[float, float]
    budget: float
    index: int
    history: ChoiceDataset | None = None

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"round index must be non-negative, got {self.index}")
        if self.history is not None and self.history.good_count != len(self.prices):
            raise ValueError(
                f"history has {self.history.good_count} goods, round has {len(self.prices)}"
            )


@dataclass(frozen=True)
class SpecialistDecision:
    """A specialist's chosen bundle plus how the deliberation went.

    ``constraint_relaxed`` flags rounds where the consistency floor
    excluded every candidate and the unconstrained maximizer was used.
    """

    bundle: Bundle
    share: float
    target_share: float
    candidate_count: int
    probe_count: int
    constraint_relaxed: bool


def generate_session(config: SessionConfig) -> tuple[TaskRound, ...]:
    """Draw a session's rounds; a deterministic function of the config seed."""
    low, high = config.price_bounds
    rng = np.random.default_rng(config.seed)
    rounds = []
    for _ in range(config.rounds):
        price_a, price_b = rng.uniform(low, high, size=2)
        rounds.append(TaskRound(prices=(float(price_a), float(price_b)), budget=config.budget))
    return tuple(rounds)


def bundle_on_budget_line(prices: Sequence[float], budget: float, first_share: float) -> Bundle:
    """The bundle spending ``first_share`` of the budget on good 0, the rest on good 1."""
    if not 0.0 <= first_share <= 1.0:
        raise ValueError(f"share must lie in [0, 1], got {first_share}")
    return Bundle(
        (first_share * budget / prices[0], (1.0 - first_share) * budget / prices[1])
    )


def _round_rng(profile: AgentProfile, context: RoundContext) -> np.random.Generator:
    """Private per-(agent, round) stream; independent of other rounds and agents."""
    return np.random.default_rng(np.random.SeedSequence([profile.seed, context.index]))


def _ces_first_share(weight: float, exponent: float, prices: Sequence[float]) -> float:
    """Optimal budget share on good 0 for the CES utility (closed form)."""
    if weight <= 0.0:
        return 0.0
    if weight >= 1.0:
        return 1.0
    if exponent == 0.0:
        return weight
    substitution = 1.0 / (1.0 - exponent)
    lead = weight**substitution * prices[0] ** (1.0 - substitution)
    rest = (1.0 - weight) ** substitution * prices[1] ** (1.0 - substitution)
    return lead / (lead + rest)


def _ces_utility(weight: float, exponent: float, quantities: np.ndarray) -> np.ndarray:
    """CES utility of each row of ``quantities``; corner bundles handled."""
    lead = quantities[:, 0]
    rest = quantities[:, 1]
    if weight <= 0.0:
        return rest.astype(float)
    if weight >= 1.0:
        return lead.astype(float)
    with np.errstate(divide="ignore", over="ignore"):
        if exponent == 0.0:
            return lead**weight * rest ** (1.0 - weight)
        inner = weight * lead**exponent + (1.0 - weight) * rest**exponent
        utility = inner ** (1.0 / exponent)
    # 0 ** negative gives inf; inf ** (1/negative) correctly limits to 0,
    # but inf - inf style corners (both goods zero) need pinning.
    return np.where(np.isfinite(utility), utility, 0.0)


def ces_rational_agent(context: RoundContext, profile: AgentProfile) -> Bundle:
    """Exact utility-maximizing bundle; the consistent baseline."""
    share = _ces_first_share(profile.ces_share, profile.ces_exponent, context.prices)
    return bundle_on_budget_line(context.prices, context.budget, share)


def basic_heuristic_agent(context: RoundContext, profile: AgentProfile) -> Bundle:
    """Inverse-price budget split, optionally perturbed by seeded noise."""
    inverse_lead = 1.0 / context.prices[0]
    inverse_rest = 1.0 / context.prices[1]
    share = inverse_lead / (inverse_lead + inverse_rest)
    if profile.noise > 0.0:
        draw = profile.noise * _round_rng(profile, context).standard_normal()
        share = min(1.0, max(0.0, share + draw))
    return bundle_on_budget_line(context.prices, context.budget, share)


def random_uniform_agent(context: RoundContext, profile: AgentProfile) -> Bundle:
    """Uniform random budget share; structureless power baseline."""
    share = float(_round_rng(profile, context).uniform())
    return bundle_on_budget_line(context.prices, context.budget, share)


def _new_violation_counts(
    history: ChoiceDataset, prices: Sequence[float], budget: float, shares: np.ndarray
) -> np.ndarray:
    """Violating pairs each candidate share would add to the history.

    For every candidate bundle (a share point on the current budget line)
    this counts, at efficiency level 1, the ordered violating pairs of the
    extended dataset that the current dataset lacks: pairs involving the
    appended observation in either order, plus old pairs newly connected
    through it. Equivalent to appending each candidate and recounting, but
    vectorized across candidates.
    """
    price_rows = history.price_matrix()
    quantity_rows = history.quantity_matrix()
    cross = price_rows @ quantity_rows.T
    own = np.diag(cross)
    direct, strict = _relations_from_matrix(cross, 1.0)
    closed = _close(direct)

    current = np.asarray(prices, dtype=float)
    candidates = np.empty((shares.size, 2))
    candidates[:, 0] = shares * budget / current[0]
    candidates[:, 1] = (1.0 - shares) * budget / current[1]
    candidate_cost = candidates @ current

    # Relations between history rows i and an appended candidate t.
    into_cost = price_rows @ candidates.T
    weak_in, strict_in = _weak_strict(own[:, None], into_cost)
    out_cost = quantity_rows @ current
    weak_out, strict_out = _weak_strict(candidate_cost[:, None], out_cost[None, :])

    # Closure after appending: who reaches t, whom t reaches.
    reach_to = weak_in | ((closed.astype(np.uint8) @ weak_in.astype(np.uint8)) > 0)
    reach_from = weak_out | ((weak_out.astype(np.uint8) @ closed.astype(np.uint8)) > 0)

    with_appended = (reach_to.T & strict_out).sum(axis=1)
    from_appended = (reach_from & strict_in.T).sum(axis=1)
    # Old pairs (i, j) that only become violations once i -> t -> j exists.
    newly_linked = (~closed) & strict.T
    through = np.einsum(
        "ic,ij,cj->c",
        reach_to.astype(np.float64),
        newly_linked.astype(np.float64),
        reach_from.astype(np.float64),
    )
    return with_appended + from_appended + through.astype(np.int64)


def specialist_decision(context: RoundContext, profile: AgentProfile) -> SpecialistDecision:
    """Full deliberation record behind :func:`specialist_agent`.

    Scores every candidate share as ``domain_weight * fit + (1 -
    domain_weight) * consistency`` where fit is 1 minus the squared
    distance to the domain rule's target and consistency is 1 minus new
    violating pairs per history round (1 when nothing new, estimated from
    the nearest probe off the probe grid). Ties break toward higher CES
    utility, then toward the lowest share.
    """
    if profile.domain_weight == 0.0:
        bundle = ces_rational_agent(context, profile)
        share = _ces_first_share(profile.ces_share, profile.ces_exponent, context.prices)
        return SpecialistDecision(
            bundle=bundle,
            share=share,
            target_share=profile.domain_rule.target_share(context.prices),
            candidate_count=0,
            probe_count=0,
            constraint_relaxed=False,
        )

    domain_points = round(profile.expertise * profile.deliberation_points)
    probe_points = profile.deliberation_points - domain_points
    domain_grid = np.linspace(0.0, 1.0, domain_points)
    probe_grid = np.linspace(0.0, 1.0, probe_points)
    candidates = np.unique(np.concatenate([domain_grid, probe_grid]))

    target = profile.domain_rule.target_share(context.prices)
    fit = 1.0 - (candidates - target) ** 2

    if probe_points == 0 or context.history is None:
        consistency = np.ones_like(candidates)
    else:
        counts = _new_violation_counts(
            context.history, context.prices, context.budget, probe_grid
        )
        probe_scores = 1.0 - counts / len(context.history)
        if probe_points == 1:
            nearest = np.zeros(candidates.size, dtype=np.intp)
        else:
            nearest = np.rint(candidates * (probe_points - 1)).astype(np.intp)
        consistency = probe_scores[nearest]

    score = profile.domain_weight * fit + (1.0 - profile.domain_weight) * consistency

    relaxed = False
    if profile.consistency_floor > 0.0:
        feasible = consistency >= profile.consistency_floor - 1e-12
        if not feasible.any():
            relaxed = True
            feasible = np.ones(candidates.size, dtype=bool)
    else:
        feasible = np.ones(candidates.size, dtype=bool)

    best = np.where(feasible, score, -np.inf).max()
    tied = np.flatnonzero(feasible & (score >= best - 1e-12))
    if tied.size > 1:
        quantities = np.empty((tied.size, 2))
        quantities[:, 0] = candidates[tied] * context.budget / context.prices[0]
        quantities[:, 1] = (1.0 - candidates[tied]) * context.budget / context.prices[1]
        utility = _ces_utility(profile.ces_share, profile.ces_exponent, quantities)
        top = utility.max()
        tied = tied[utility >= top - 1e-12 * max(1.0, abs(top))]
    chosen = float(candidates[tied[0]])

    return SpecialistDecision(
        bundle=bundle_on_budget_line(context.prices, context.budget, chosen),
        share=chosen,
        target_share=target,
        candidate_count=int(candidates.size),
        probe_count=int(probe_points),
        constraint_relaxed=relaxed,
    )


def specialist_agent(context: RoundContext, profile: AgentProfile) -> Bundle:
    """Deliberating agent blending domain-rule fit against consistency."""
    return specialist_decision(context, profile).bundle


_BUILTIN_AGENTS: dict[str, Callable[[RoundContext, AgentProfile], Bundle]] = {
    "ces_rational": ces_rational_agent,
    "basic_heuristic": basic_heuristic_agent,
    "random_uniform": random_uniform_agent,
    "specialist": specialist_agent,
}


def run_session(
    profile: AgentProfile,
    rounds: Sequence[TaskRound],
    chooser: Callable[[RoundContext], Bundle] | None = None,
    label: str | None = None,
) -> ChoiceDataset:
    """Apply an agent round-by-round, threading history, and log the choices.

    ``chooser`` overrides the built-in dispatch (the experiment harness
    passes the wire-protocol client for ``external`` profiles).
    """
    if not rounds:
        raise ValueError("a session needs at least one round")
    if chooser is None:
        if profile.kind == "external":
            raise ValueError(
                "external profiles have no built-in behavior; pass the protocol client as chooser"
            )
        behave = _BUILTIN_AGENTS[profile.kind]
        chooser = lambda ctx: behave(ctx, profile)  # noqa: E731
    name = label if label is not None else profile.display_label
    observations: list[Observation] = []
    history: ChoiceDataset | None = None
    for index, task in enumerate(rounds):
        context = RoundContext(
            prices=task.prices, budget=task.budget, index=index, history=history
        )
        bundle = chooser(context)
        observations.append(Observation(prices=task.prices, budget=task.budget, choice=bundle))
        history = ChoiceDataset(observations=tuple(observations), label=name)
    return history
