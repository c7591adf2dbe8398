"""Rank agreement between decision series.

A decision series summarizes each round of a choice log by the budget
share spent on the first good, giving a scale-free sequence that can be
compared across deciders facing the same price stream. Agreement is
measured by the Spearman rank correlation: Pearson correlation of the
rank vectors, with ties assigned average ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .choices import ChoiceDataset, DimensionError

__all__ = [
    "DecisionSeries",
    "UndefinedCorrelationError",
    "decision_series",
    "spearman",
]


class UndefinedCorrelationError(ValueError):
    """Raised when a series is constant, so ranks carry no information."""


@dataclass(frozen=True)
class DecisionSeries:
    """Per-round decision statistics for one decider.

    Attributes:
        values: one real per round (the share of observed spending on the
            first good, when built by :func:`decision_series`).
        label: where the series came from (dataset label by default).
    """

    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a decision series needs at least 1 round")
        for value in self.values:
            if not np.isfinite(value):
                raise ValueError(f"non-finite series value {value}")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def decision_series(dataset: ChoiceDataset) -> DecisionSeries:
    """Budget-share series of the first good, one value per observation.

    The share is spending on good 0 over total observed spending. A round
    with zero total spending has no meaningful share and contributes 0.0.
    """
    shares = []
    for obs in dataset:
        total = obs.expenditure
        shares.append(obs.prices[0] * obs.choice[0] / total if total > 0.0 else 0.0)
    return DecisionSeries(values=tuple(shares), label=dataset.label)


def spearman(first: DecisionSeries | np.ndarray, second: DecisionSeries | np.ndarray) -> float:
    """Spearman rank correlation of two equal-length series, in [-1, 1].

    Ties get average ranks. Raises :class:`UndefinedCorrelationError`
    when either series is constant (its rank vector has zero variance).
    """
    a = first.as_array() if isinstance(first, DecisionSeries) else np.asarray(first, dtype=float)
    b = second.as_array() if isinstance(second, DecisionSeries) else np.asarray(second, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionError("series must be one-dimensional")
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 2:
        raise ValueError("need at least 2 paired rounds")
    ranks_a = rankdata(a, method="average")
    ranks_b = rankdata(b, method="average")
    if np.ptp(ranks_a) == 0.0 or np.ptp(ranks_b) == 0.0:
        raise UndefinedCorrelationError("constant series: rank correlation undefined")
    return float(np.corrcoef(ranks_a, ranks_b)[0, 1])
