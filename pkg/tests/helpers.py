"""Shared fixtures-in-spirit: dataset factories and independent oracles.

The oracles here deliberately avoid the library's numpy code paths:
violations come from a pure-Python depth-first reachability search and
rank correlations from a hand-rolled rank-then-Pearson computation, so
agreement with the library is evidence, not tautology.
"""

from __future__ import annotations

import math

import numpy as np

from rationality import Bundle, ChoiceDataset, Observation

RTOL = 1e-9


def dstar() -> ChoiceDataset:
    """Two crossing budgets with mutually strict preferences: 2 violations."""
    return ChoiceDataset(
        [
            Observation((1.0, 2.0), 9.0, (1.0, 4.0)),
            Observation((2.0, 1.0), 9.0, (4.0, 1.0)),
        ],
        label="D-star",
    )


def random_budget_line_dataset(
    rng: np.random.Generator, rounds: int, price_span: tuple[float, float] = (0.2, 5.0)
) -> ChoiceDataset:
    """Random shares spent on a random budget line each round."""
    observations = []
    for _ in range(rounds):
        prices = rng.uniform(*price_span, size=2)
        budget = float(rng.uniform(50.0, 150.0))
        share = float(rng.uniform())
        bundle = Bundle((share * budget / prices[0], (1.0 - share) * budget / prices[1]))
        observations.append(Observation(tuple(prices), budget, bundle))
    return ChoiceDataset(observations, label="random-budget-line")


def random_free_dataset(rng: np.random.Generator, rounds: int) -> ChoiceDataset:
    """Random quantities with slack budgets (under- and overspending occur)."""
    observations = []
    for _ in range(rounds):
        prices = rng.uniform(0.2, 5.0, size=2)
        quantities = rng.uniform(0.0, 40.0, size=2)
        spent = float(prices @ quantities)
        budget = max(spent, 1e-6) * float(rng.uniform(0.8, 1.2))
        observations.append(Observation(tuple(prices), budget, tuple(quantities)))
    return ChoiceDataset(observations, label="random-free")


# ---------------------------------------------------------------------------
# Pure-Python revealed-preference oracle (no numpy, no transitive closure)


def _oracle_relations(dataset: ChoiceDataset, level: float):
    size = len(dataset)
    rows = [obs.prices for obs in dataset]
    quants = [obs.choice.quantities for obs in dataset]
    cost = [
        [sum(p * q for p, q in zip(rows[i], quants[j])) for j in range(size)] for i in range(size)
    ]
    weak = [[False] * size for _ in range(size)]
    strict = [[False] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            lhs = level * cost[i][i]
            rhs = cost[i][j]
            tol = RTOL * max(abs(lhs), abs(rhs))
            weak[i][j] = lhs >= rhs - tol
            strict[i][j] = lhs > rhs + tol
    return weak, strict


def dfs_garp_violations(dataset: ChoiceDataset, level: float = 1.0) -> set[tuple[int, int]]:
    """Violating pairs via explicit depth-first path enumeration over edges."""
    size = len(dataset)
    weak, strict = _oracle_relations(dataset, level)

    def reaches(start: int, goal: int) -> bool:
        # any path of length >= 1 along the weak relation
        stack = [n for n in range(size) if weak[start][n]]
        seen = set(stack)
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            for nxt in range(size):
                if weak[node][nxt] and nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    return {
        (i, j)
        for i in range(size)
        for j in range(size)
        if strict[j][i] and reaches(i, j)
    }


def dfs_warp_violations(dataset: ChoiceDataset, level: float = 1.0) -> set[tuple[int, int]]:
    size = len(dataset)
    weak, strict = _oracle_relations(dataset, level)
    return {(i, j) for i in range(size) for j in range(size) if weak[i][j] and strict[j][i]}


# ---------------------------------------------------------------------------
# Rank-correlation oracles


def _plain_ranks(values) -> list[float]:
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1  # average of 1-based positions
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def rank_then_pearson(a, b) -> float:
    """Average-rank Spearman computed with plain Python floats."""
    ra, rb = _plain_ranks(list(a)), _plain_ranks(list(b))
    n = len(ra)
    mean_a = sum(ra) / n
    mean_b = sum(rb) / n
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(ra, rb))
    var_a = sum((x - mean_a) ** 2 for x in ra)
    var_b = sum((y - mean_b) ** 2 for y in rb)
    return cov / math.sqrt(var_a * var_b)


def spearman_d_squared(a, b) -> float:
    """Tie-free textbook formula 1 - 6*sum(d^2) / (n(n^2-1))."""
    ra, rb = _plain_ranks(list(a)), _plain_ranks(list(b))
    n = len(ra)
    d_sq = sum((x - y) ** 2 for x, y in zip(ra, rb))
    return 1.0 - 6.0 * d_sq / (n * (n * n - 1))
