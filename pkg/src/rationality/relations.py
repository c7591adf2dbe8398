"""Revealed-preference relations at an efficiency level, and axiom checks.

Conventions (two goods A and B, but everything works for n goods):

* Observation ``i`` is *directly revealed preferred* to ``j`` at efficiency
  level ``e`` when ``e * p_i.x_i >= p_i.x_j``: bundle ``j`` was affordable
  (after discounting observed spending by ``e``) when ``i`` was chosen.
  The strict version uses ``>``.
* The left-hand side uses observed expenditure ``p_i.x_i``, not the stated
  budget, so underspending does not manufacture spurious relations.
* Comparisons carry a relative tolerance (``DEFAULT_RTOL``); exact ties
  resolve weak (in the direct relation, not the strict one), which makes
  the critical efficiency level attainable rather than a supremum.
* A violation of the generalized axiom is an ordered pair ``(i, j)`` with
  ``i`` preferred to ``j`` through the transitive closure while ``j`` is
  strictly directly preferred to ``i``. The weak axiom uses the direct
  relation instead of the closure. Counts are counts of such pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choices import DEFAULT_RTOL, ChoiceDataset

__all__ = [
    "RelationMatrices",
    "ViolationReport",
    "direct_relations",
    "transitive_closure",
    "garp_violations",
    "warp_violations",
    "satisfies_garp",
]


@dataclass(frozen=True)
class RelationMatrices:
    """Boolean relation matrices for one dataset at one efficiency level.

    Attributes:
        size: number of observations T.
        level: efficiency level e in [0, 1].
        direct: T x T matrix, ``direct[i, j]`` true iff i is directly
            revealed preferred to j at level e.
        strict: T x T matrix for the strict direct relation.
        closure: transitive closure of ``direct`` (paths of length >= 1),
            or None until :func:`transitive_closure` fills it.
    """

    size: int
    level: float
    direct: np.ndarray
    strict: np.ndarray
    closure: np.ndarray | None = None

    def __eq__(self, other) -> bool:  # ndarray fields need value comparison
        if not isinstance(other, RelationMatrices):
            return NotImplemented
        closed_eq = (
            (self.closure is None and other.closure is None)
            or (
                self.closure is not None
                and other.closure is not None
                and bool(np.array_equal(self.closure, other.closure))
            )
        )
        return (
            self.size == other.size
            and self.level == other.level
            and bool(np.array_equal(self.direct, other.direct))
            and bool(np.array_equal(self.strict, other.strict))
            and closed_eq
        )


@dataclass(frozen=True)
class ViolationReport:
    """Violating ordered pairs for one dataset at one efficiency level."""

    level: float
    axiom: str
    pairs: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.pairs)

    @property
    def consistent(self) -> bool:
        return not self.pairs


def expenditure_matrix(dataset: ChoiceDataset) -> np.ndarray:
    """T x T matrix E with ``E[i, j] = p_i . x_j`` (cost of bundle j at prices i)."""
    prices = dataset.price_matrix()
    quantities = dataset.quantity_matrix()
    return prices @ quantities.T


def _weak_strict(
    lhs: np.ndarray, rhs: np.ndarray, rtol: float = DEFAULT_RTOL
) -> tuple[np.ndarray, np.ndarray]:
    """Tolerant elementwise ``lhs >= rhs`` and ``lhs > rhs`` (ties weak)."""
    tol = rtol * np.maximum(np.abs(lhs), np.abs(rhs))
    return lhs >= rhs - tol, lhs > rhs + tol


def _relations_from_matrix(
    cross: np.ndarray, level: float, rtol: float = DEFAULT_RTOL
) -> tuple[np.ndarray, np.ndarray]:
    """Direct and strict relation matrices from a cross-expenditure matrix."""
    own = np.diag(cross)
    return _weak_strict(level * own[:, None], cross, rtol)


def _close(direct: np.ndarray) -> np.ndarray:
    """Smallest transitively closed superset of ``direct`` (Warshall)."""
    closed = direct.copy()
    for k in range(closed.shape[0]):
        closed |= np.outer(closed[:, k], closed[k, :])
    return closed


def _violation_pairs(closed: np.ndarray, strict: np.ndarray) -> tuple[tuple[int, int], ...]:
    rows, cols = np.nonzero(closed & strict.T)
    return tuple(zip(rows.tolist(), cols.tolist()))


def _satisfies_from_matrix(cross: np.ndarray, level: float, rtol: float = DEFAULT_RTOL) -> bool:
    direct, strict = _relations_from_matrix(cross, level, rtol)
    if not strict.any():
        return True
    if (direct & strict.T).any():  # a weak-axiom violation settles it early
        return False
    return not (_close(direct) & strict.T).any()


def _check_level(level: float) -> float:
    level = float(level)
    if not 0.0 <= level <= 1.0:
        raise ValueError(f"efficiency level must lie in [0, 1], got {level}")
    return level


def direct_relations(dataset: ChoiceDataset, level: float = 1.0) -> RelationMatrices:
    """Build the direct and strict revealed-preference matrices at ``level``."""
    level = _check_level(level)
    direct, strict = _relations_from_matrix(expenditure_matrix(dataset), level)
    return RelationMatrices(size=len(dataset), level=level, direct=direct, strict=strict)

def transitive_closure(mats: RelationMatrices) -> RelationMatrices:
    """Return a copy of ``mats`` with the closure matrix filled in."""
    return RelationMatrices(
        size=mats.size,
        level=mats.level,
        direct=mats.direct,
        strict=mats.strict,
        closure=_close(mats.direct),
    )


def garp_violations(dataset: ChoiceDataset, level: float = 1.0) -> ViolationReport:
    """All ordered pairs violating the generalized axiom at ``level``.

    Pair ``(i, j)`` is listed when i reaches j through the transitive
    closure of the direct relation while j is strictly directly preferred
    to i.
    """
    mats = transitive_closure(direct_relations(dataset, level))
    return ViolationReport(
        level=mats.level,
        axiom="GARP",
        pairs=_violation_pairs(mats.closure, mats.strict),
    )


def warp_violations(dataset: ChoiceDataset, level: float = 1.0) -> ViolationReport:
    """Ordered pairs violating the weak axiom (direct relation, no closure)."""
    mats = direct_relations(dataset, level)
    return ViolationReport(
        level=mats.level,
        axiom="WARP",
        pairs=_violation_pairs(mats.direct, mats.strict),
    )


def satisfies_garp(dataset: ChoiceDataset, level: float = 1.0) -> bool:
    """True iff the dataset has no generalized-axiom violation at ``level``."""
    level = _check_level(level)
    return _satisfies_from_matrix(expenditure_matrix(dataset), level)
