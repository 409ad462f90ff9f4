"""Hold-out masking evaluation and a seeded synthetic table generator.

Known cells are hidden, the table is imputed, and each imputed value is
compared with the hidden one.  Randomness for every (attribute, trial)
comes from its own generator seeded by a stable hash, so results do not
depend on evaluation order.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ._bits import to_rows
from .errors import NothingToMask, RoughSetError
from .imputer import ImputationConfig, impute
from .table import CONDITION, DECISION, AttributeSchema, Cell, DecisionTable


def derived_rng(seed: int, *parts) -> random.Random:
    digest = hashlib.sha256(":".join(str(p) for p in (seed, *parts)).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass(frozen=True)
class MaskPlan:
    targets: tuple[str, ...]
    fraction: float | Mapping[str, float] = 0.1
    seed: int = 0

    def fraction_for(self, attribute: str) -> float:
        f = self.fraction[attribute] if isinstance(self.fraction, Mapping) else self.fraction
        if not 0 <= f <= 1:
            raise RoughSetError(f"mask fraction for {attribute!r} must lie in [0, 1]")
        return f

    def to_json(self) -> dict:
        frac = dict(self.fraction) if isinstance(self.fraction, Mapping) else self.fraction
        return {"targets": list(self.targets), "fraction": frac, "seed": self.seed}


def mask_cells(table: DecisionTable, plan: MaskPlan, trial: int = 0) -> tuple[DecisionTable, dict[Cell, str]]:
    """Hide ``floor(fraction * known)`` known cells of each target attribute."""
    truth: dict[Cell, str] = {}
    for attr in plan.targets:
        table.position(attr)
        if attr == table.decision:
            raise RoughSetError("the decision attribute cannot be masked")
        fraction = plan.fraction_for(attr)
        known = to_rows(table.index.known(attr))
        if fraction == 0:
            continue
        if not known:
            raise NothingToMask(f"attribute {attr!r} has no known cells to mask")
        k = math.floor(fraction * len(known))
        for r in sorted(derived_rng(plan.seed, attr, trial).sample(known, k)):
            truth[Cell(r, attr)] = table.value(r, attr)
    return table.with_cells({c: None for c in truth}), truth


def restore(table: DecisionTable, truth: Mapping[Cell, str]) -> DecisionTable:
    return table.with_cells(dict(truth))


@dataclass
class AttributeScore:
    masked: int = 0
    correct: int = 0
    unresolved: int = 0

    @property
    def resolved(self) -> int:
        return self.masked - self.unresolved

    @property
    def accuracy(self) -> float | None:
        if not self.resolved:
            return None
        return 100.0 * self.correct / self.resolved

    def to_json(self) -> dict:
        acc = self.accuracy
        return {
            "masked": self.masked,
            "correct": self.correct,
            "unresolved": self.unresolved,
            "accuracy": None if acc is None else round(acc, 6),
        }


@dataclass
class AccuracyReport:
    attributes: dict[str, AttributeScore]
    config: dict = field(default_factory=dict)
    label: str = "Original"
    baseline: dict[str, AttributeScore] | None = None

    @property
    def overall(self) -> AttributeScore:
        total = AttributeScore()
        for s in self.attributes.values():
            total.masked += s.masked
            total.correct += s.correct
            total.unresolved += s.unresolved
        return total

    @property
    def unresolved(self) -> int:
        return self.overall.unresolved

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "attributes": {a: s.to_json() for a, s in self.attributes.items()},
            "overall": self.overall.to_json(),
            "unresolved": self.unresolved,
            "config": self.config,
        }
        if self.baseline is not None:
            out["mode_baseline"] = {a: s.to_json() for a, s in self.baseline.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _mode_fill(masked: DecisionTable, cell: Cell) -> str | None:
    counts = Counter(v for v in masked.column(cell.attribute) if v is not None)
    if not counts:
        return None
    top = max(counts.values())
    return next(v for v in masked.effective_domain(cell.attribute) if counts.get(v) == top)


def evaluate_imputation(
    table: DecisionTable,
    plan: MaskPlan,
    config: ImputationConfig | None = None,
    *,
    trials: int = 1,
    workers: int = 1,
    label: str = "Original",
    baseline: bool = False,
) -> AccuracyReport:
    """Mask, impute and score exact categorical matches per attribute.

    Accuracy is over resolved cells only; cells left open by the
    ``emit_rough_set`` policy are counted as unresolved.  With
    ``baseline`` a column-mode imputation is scored on the same masks.
    """
    config = config or ImputationConfig()
    scores = {a: AttributeScore() for a in plan.targets}
    base = {a: AttributeScore() for a in plan.targets} if baseline else None
    for trial in range(trials):
        masked, truth = mask_cells(table, plan, trial)
        filled, _ = impute(masked, config, workers=workers)
        for cell, expected in sorted(truth.items()):
            s = scores[cell.attribute]
            s.masked += 1
            got = filled.value(cell.row, cell.attribute)
            if got is None:
                s.unresolved += 1
            elif got == expected:
                s.correct += 1
            if base is not None:
                b = base[cell.attribute]
                b.masked += 1
                guess = _mode_fill(masked, cell)
                if guess is None:
                    b.unresolved += 1
                elif guess == expected:
                    b.correct += 1
    echo = {"imputation": config.to_json(), "mask": plan.to_json(), "trials": trials}
    return AccuracyReport(scores, echo, label, base)


def format_grid(reports: Sequence[AccuracyReport]) -> str:
    """Plain-text grid: attributes as columns, one row per report."""
    if not reports:
        return ""
    attrs = list(reports[0].attributes)
    rows = []
    for rep in reports:
        cells = []
        for a in attrs:
            acc = rep.attributes[a].accuracy if a in rep.attributes else None
            cells.append("-" if acc is None else f"{acc:.1f}")
        rows.append([rep.label, *cells])
        if rep.baseline is not None:
            base = [rep.baseline[a].accuracy for a in attrs]
            rows.append([f"{rep.label} (mode)", *("-" if b is None else f"{b:.1f}" for b in base)])
    header = ["", *attrs]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = [" | ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))) for r in [header, *rows]]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SynthSpec:
    rows: int
    decision_arity: int = 2
    domain_sizes: tuple[int, ...] = (4, 4, 4, 4)
    p: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise RoughSetError("dependency strength p must lie in [0, 1]")
        if self.decision_arity < 2 or any(k < 2 for k in self.domain_sizes):
            raise RoughSetError("decision arity and domain sizes must be >= 2")
        if self.rows < 0:
            raise RoughSetError("row count must be non-negative")


def generate_synthetic(spec: SynthSpec) -> DecisionTable:
    """Fully known table where attribute j copies ``(d + j) mod |dom_j|``
    with probability p and is uniform noise otherwise."""
    names = [f"x{j + 1}" for j in range(len(spec.domain_sizes))]
    schema = [
        AttributeSchema(n, CONDITION, tuple(str(v) for v in range(k)))
        for n, k in zip(names, spec.domain_sizes)
    ]
    schema.append(AttributeSchema("D", DECISION, tuple(str(v) for v in range(spec.decision_arity))))
    rng = derived_rng(spec.seed, "synthetic")
    rows = []
    for _ in range(spec.rows):
        d = rng.randrange(spec.decision_arity)
        row = []
        for j, k in enumerate(spec.domain_sizes):
            if rng.random() < spec.p:
                row.append(str((d + j) % k))
            else:
                row.append(str(rng.randrange(k)))
        row.append(str(d))
        rows.append(row)
    return DecisionTable(schema, rows)
