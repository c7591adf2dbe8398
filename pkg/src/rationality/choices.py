"""Domain types for budget-allocation choice logs, plus file I/O and validation.

A choice log records, for each round, the posted prices, the available
budget, and the bundle the decision maker bought. All downstream metrics
(revealed-preference relations, efficiency indices, rank agreement) consume
the :class:`ChoiceDataset` defined here.

File format: comma-separated text, one observation per line, with a
mandatory header. For two goods the header is exactly
``round,p_A,p_B,budget,x_A,x_B``; for ``n`` goods it generalizes to
``round,p_1,...,p_n,budget,x_1,...,x_n``. Numeric fields are written with
shortest round-trip precision (up to 17 significant digits), so
``load_dataset(save_dataset(d))`` reproduces ``d`` exactly. Lines end with
LF; encoding is UTF-8. The dataset label is not stored in the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DEFAULT_RTOL",
    "Bundle",
    "Observation",
    "ChoiceDataset",
    "ValidationReport",
    "DatasetParseError",
    "DimensionError",
    "expenditure",
    "load_dataset",
    "save_dataset",
    "validate",
]

# Relative tolerance used for every equality/inequality comparison on
# expenditures throughout the library. Keeping it in one place makes the
# weak/strict boundary decisions of the relation builder reproducible.
DEFAULT_RTOL = 1e-9


class DimensionError(ValueError):
    """Vector lengths disagree (prices vs quantities vs good count)."""


class DatasetParseError(ValueError):
    """A dataset file is malformed; carries the offending line and field."""

    def __init__(self, message: str, *, line: int | None = None, fieldname: str | None = None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if fieldname is not None:
            loc.append(f"field {fieldname!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.fieldname = fieldname


def _check_finite(name: str, values) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class Bundle:
    """Quantities of each good bought in one round.

    Quantities are non-negative reals; length is the dataset's good count
    (two for the standard A/B task).
    """

    quantities: tuple[float, ...]

    def __init__(self, quantities) -> None:
        q = tuple(float(v) for v in quantities)
        if len(q) < 2:
            raise DimensionError(f"a bundle needs at least 2 goods, got {len(q)}")
        _check_finite("quantity", q)
        if any(v < 0.0 for v in q):
            raise ValueError(f"quantities must be non-negative, got {q}")
        object.__setattr__(self, "quantities", q)

    def __len__(self) -> int:
        return len(self.quantities)

    def __getitem__(self, index: int) -> float:
        return self.quantities[index]

    def __iter__(self):
        return iter(self.quantities)


@dataclass(frozen=True)
class Observation:
    """One round: posted prices, budget, and the chosen bundle.

    Prices and budget must be strictly positive. Affordability
    (expenditure within the budget) is deliberately *not* a construction
    error: real logs overspend and underspend, and :func:`validate`
    reports both. Hard structural invariants (positivity, dimensions)
    are enforced here.
    """

    prices: tuple[float, ...]
    budget: float
    choice: Bundle

    def __init__(self, prices, budget: float, choice) -> None:
        p = tuple(float(v) for v in prices)
        _check_finite("price", p)
        if any(v <= 0.0 for v in p):
            raise ValueError(f"prices must be strictly positive, got {p}")
        b = float(budget)
        if not math.isfinite(b) or b <= 0.0:
            raise ValueError(f"budget must be strictly positive, got {b!r}")
        if not isinstance(choice, Bundle):
            choice = Bundle(choice)
        if len(choice) != len(p):
            raise DimensionError(
                f"bundle has {len(choice)} goods but there are {len(p)} prices"
            )
        object.__setattr__(self, "prices", p)
        object.__setattr__(self, "budget", b)
        object.__setattr__(self, "choice", choice)

    @property
    def expenditure(self) -> float:
        return expenditure(self.prices, self.choice)


@dataclass(frozen=True)
class ChoiceDataset:
    """An ordered sequence of observations for one subject or session."""

    observations: tuple[Observation, ...]
    good_count: int = field(default=0)
    label: str = "dataset"

    def __init__(self, observations, label: str = "dataset", good_count: int | None = None) -> None:
        obs = tuple(observations)
        if not obs:
            raise ValueError("a dataset needs at least one observation")
        n = good_count if good_count is not None else len(obs[0].prices)
        for t, o in enumerate(obs):
            if len(o.prices) != n:
                raise DimensionError(
                    f"observation {t} has {len(o.prices)} goods, expected {n}"
                )
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "good_count", n)
        object.__setattr__(self, "label", str(label))

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    def price_matrix(self) -> np.ndarray:
        """T x n array of prices, row per observation."""
        return np.array([o.prices for o in self.observations], dtype=float)

    def quantity_matrix(self) -> np.ndarray:
        """T x n array of chosen quantities, row per observation."""
        return np.array([o.choice.quantities for o in self.observations], dtype=float)


@dataclass(frozen=True)
class ValidationReport:
    """Budget-discipline flags for a dataset. Report-only, never raises.

    ``underspend``/``overspend``/``zero_bundle`` hold the indices of the
    flagged observations; the dataset itself is untouched.
    """

    observation_count: int
    tolerance: float
    underspend: tuple[int, ...]
    overspend: tuple[int, ...]
    zero_bundle: tuple[int, ...]

    @property
    def underspend_count(self) -> int:
        return len(self.underspend)

    @property
    def overspend_count(self) -> int:
        return len(self.overspend)

    @property
    def zero_bundle_count(self) -> int:
        return len(self.zero_bundle)

    @property
    def clean(self) -> bool:
        return not (self.underspend or self.overspend or self.zero_bundle)


def expenditure(prices, bundle) -> float:
    """Cost of ``bundle`` at ``prices``: the dot product sum(p_k * x_k)."""
    quantities = bundle.quantities if isinstance(bundle, Bundle) else tuple(bundle)
    if len(prices) != len(quantities):
        raise DimensionError(
            f"{len(prices)} prices vs {len(quantities)} quantities"
        )
    return float(sum(p * x for p, x in zip(prices, quantities)))


def validate(dataset: ChoiceDataset, tolerance: float = DEFAULT_RTOL) -> ValidationReport:
    """Flag observations whose spending strays from the budget.

    Underspend: expenditure < budget * (1 - tolerance).
    Overspend:  expenditure > budget * (1 + tolerance).
    Zero bundle: every quantity is zero.
    """
    under: list[int] = []
    over: list[int] = []
    zero: list[int] = []
    for t, obs in enumerate(dataset):
        spent = obs.expenditure
        if spent < obs.budget * (1.0 - tolerance):
            under.append(t)
        elif spent > obs.budget * (1.0 + tolerance):
            over.append(t)
        if all(q == 0.0 for q in obs.choice.quantities):
            zero.append(t)
    return ValidationReport(
        observation_count=len(dataset),
        tolerance=float(tolerance),
        underspend=tuple(under),
        overspend=tuple(over),
        zero_bundle=tuple(zero),
    )


def _header_fields(n: int) -> list[str]:
    if n == 2:
        return ["round", "p_A", "p_B", "budget", "x_A", "x_B"]
    return (
        ["round"]
        + [f"p_{k}" for k in range(1, n + 1)]
        + ["budget"]
        + [f"x_{k}" for k in range(1, n + 1)]
    )


def save_dataset(dataset: ChoiceDataset, sink=None) -> str:
    """Serialize a dataset to the CSV text format.

    Returns the text; if ``sink`` (a path or writable text file) is given,
    also writes it there. Numbers use shortest round-trip formatting so a
    reload reproduces every field bit-exactly.
    """
    n = dataset.good_count
    lines = [",".join(_header_fields(n))]
    for t, obs in enumerate(dataset, start=1):
        cells = [str(t)]
        cells += [repr(p) for p in obs.prices]
        cells.append(repr(obs.budget))
        cells += [repr(x) for x in obs.choice.quantities]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if sink is not None:
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            with open(sink, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    return text


def _parse_float(cell: str, line_no: int, name: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise DatasetParseError(
            f"cannot parse {cell!r} as a number", line=line_no, fieldname=name
        ) from None


def load_dataset(source, label: str | None = None) -> ChoiceDataset:
    """Parse a dataset from a path, text, or readable file object.

    The header determines the good count. Structural problems (bad header,
    wrong cell count, unparsable numbers) raise :class:`DatasetParseError`
    naming the line and field; value problems (non-positive price or
    budget, negative quantity) surface as validation errors with the same
    location info. ``label`` defaults to the file stem when loading from a
    path, else ``"dataset"``.
    """
    if hasattr(source, "read"):
        text = source.read()
        inferred = None
    elif isinstance(source, str) and "\n" in source:
        text = source
        inferred = None
    else:
        import os

        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
        inferred = os.path.splitext(os.path.basename(str(source)))[0]
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise DatasetParseError("empty dataset file: header line is required", line=1)
    header = [h.strip() for h in lines[0].split(",")]
    n = sum(1 for h in header if h.startswith("p_"))
    expected = _header_fields(n)
    if n < 2 or header != expected:
        raise DatasetParseError(
            f"bad header {lines[0]!r}, expected {','.join(expected) if n >= 2 else 'round,p_A,p_B,budget,x_A,x_B'}",
            line=1,
        )
    names = expected

    observations: list[Observation] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        cells = raw.split(",")
        if len(cells) != len(names):
            raise DatasetParseError(
                f"expected {len(names)} fields, found {len(cells)}", line=line_no
            )
        try:
            int(cells[0])
        except ValueError:
            raise DatasetParseError(
                f"round must be an integer, got {cells[0]!r}", line=line_no, fieldname="round"
            ) from None
        prices = [_parse_float(c, line_no, names[1 + k]) for k, c in enumerate(cells[1 : 1 + n])]
        budget = _parse_float(cells[1 + n], line_no, "budget")
        quantities = [
            _parse_float(c, line_no, names[2 + n + k]) for k, c in enumerate(cells[2 + n :])
        ]
        try:
            observations.append(Observation(prices, budget, Bundle(quantities)))
        except ValueError as exc:
            raise DatasetParseError(str(exc), line=line_no) from None

    if not observations:
        raise DatasetParseError("dataset file contains no observations", line=len(lines))
    if label is None:
        label = inferred or "dataset"
    return ChoiceDataset(observations, label=label)
