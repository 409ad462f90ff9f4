"""Discretisation into declared bins and row-level validity filtering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import NonNumericField, RoughSetError, UnbinnableValue
from .table import AttributeSchema, DecisionTable


@dataclass(frozen=True)
class Bin:
    label: str
    min: float | None = None  # inclusive
    max: float | None = None  # inclusive
    values: frozenset[str] | None = None

    def __post_init__(self):
        if self.values is None and self.min is None and self.max is None:
            raise RoughSetError(f"bin {self.label!r} needs a range or an explicit value set")
        if self.min is not None and self.max is not None and self.min > self.max:
            raise RoughSetError(f"bin {self.label!r}: min > max")

    def accepts(self, value: str) -> bool:
        if value == self.label:
            return True
        if self.values is not None and value in self.values:
            return True
        if self.min is None and self.max is None:
            return False
        try:
            x = float(value)
        except ValueError:
            return False
        if math.isnan(x):
            return False
        return (self.min is None or x >= self.min) and (self.max is None or x <= self.max)

    def to_json(self) -> dict:
        out: dict = {"label": self.label}
        if self.min is not None:
            out["min"] = self.min
        if self.max is not None:
            out["max"] = self.max
        if self.values is not None:
            out["values"] = sorted(self.values)
        return out


def _overlaps(a: Bin, b: Bin) -> bool:
    if a.min is None and a.max is None or b.min is None and b.max is None:
        return False
    lo = max(a.min if a.min is not None else -math.inf, b.min if b.min is not None else -math.inf)
    hi = min(a.max if a.max is not None else math.inf, b.max if b.max is not None else math.inf)
    return lo <= hi


@dataclass(frozen=True)
class BinSpec:
    attribute: str
    bins: tuple[Bin, ...]
    note: str | None = None

    def __post_init__(self):
        labels = [b.label for b in self.bins]
        if not labels:
            raise RoughSetError(f"bin spec for {self.attribute!r} has no bins")
        if len(set(labels)) != len(labels):
            raise RoughSetError(f"bin spec for {self.attribute!r} has duplicate labels")
        for i, a in enumerate(self.bins):
            for b in self.bins[i + 1:]:
                if _overlaps(a, b):
                    raise RoughSetError(f"bins {a.label!r} and {b.label!r} of {self.attribute!r} overlap")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.bins)

    def label_for(self, value: str) -> str:
        for b in self.bins:
            if b.accepts(value):
                return b.label
        raise UnbinnableValue(f"value {value!r} of {self.attribute!r} falls outside every bin")

    def to_json(self) -> dict:
        out: dict = {"attribute": self.attribute, "bins": [b.to_json() for b in self.bins]}
        if self.note:
            out["note"] = self.note
        return out


def load_bins(source: str | Sequence) -> list[BinSpec]:
    """Parse ``[{attribute, bins: [{label, min?, max?, values?}]}]``."""
    doc = json.loads(source) if isinstance(source, str) else source
    if not isinstance(doc, list):
        raise RoughSetError("bin config must be a JSON array")
    specs = []
    for entry in doc:
        bins = []
        for b in entry["bins"]:
            values = b.get("values")
            bins.append(
                Bin(
                    label=str(b["label"]),
                    min=float(b["min"]) if b.get("min") is not None else None,
                    max=float(b["max"]) if b.get("max") is not None else None,
                    values=frozenset(str(v) for v in values) if values is not None else None,
                )
            )
        specs.append(BinSpec(str(entry["attribute"]), tuple(bins), entry.get("note")))
    return specs


def dump_bins(specs: Sequence[BinSpec]) -> str:
    return json.dumps([s.to_json() for s in specs], indent=2)


_AGE_BINS = [
    {"label": "<=19", "max": 19},
    {"label": "[20-29]", "min": 20, "max": 29},
    {"label": "[30-39]", "min": 30, "max": 39},
    {"label": ">=40", "min": 40},
]
_COUNT_BINS = [
    {"label": "Low", "max": 3},
    {"label": "High", "min": 4},
]

# Table-3 categories for the antenatal survey columns.  Race, region and
# the HIV decision are already categorical and pass through.
HIV_SURVEY_BINS = [
    {"attribute": "age", "bins": _AGE_BINS},
    {
        "attribute": "education",
        "bins": [
            {"label": "Zero", "min": 0, "max": 0},
            {"label": "P", "min": 1, "max": 7},
            {"label": "S", "min": 8, "max": 12},
            {"label": "T", "min": 13, "max": 13},
        ],
    },
    {"attribute": "gravidity", "bins": _COUNT_BINS},
    {"attribute": "parity", "bins": _COUNT_BINS},
    {
        "attribute": "father_age",
        "bins": _AGE_BINS,
        "note": "reconstructed: the published bounds for this column are garbled, so it mirrors the age bins",
    },
]


def default_bins() -> list[BinSpec]:
    return load_bins(HIV_SURVEY_BINS)


def apply_bins(table: DecisionTable, specs: Sequence[BinSpec]) -> DecisionTable:
    """Replace known values by bin labels; missing cells stay missing.

    Binned attributes get their label list as declared domain.
    """
    by_attr = {}
    for spec in specs:
        table.position(spec.attribute)
        by_attr[spec.attribute] = spec
    schema = []
    for attr in table.schema:
        spec = by_attr.get(attr.name)
        schema.append(attr if spec is None else AttributeSchema(attr.name, attr.kind, spec.labels))
    positions = [(table.position(a), s) for a, s in by_attr.items()]
    rows = []
    for row in table.rows:
        out = list(row)
        for j, spec in positions:
            if out[j] is not None:
                out[j] = spec.label_for(out[j])
        rows.append(out)
    return DecisionTable(schema, rows)


@dataclass(frozen=True)
class ValidityRule:
    """Reject a row when ``predicate`` holds on its numeric ``fields``.

    Rows with any referenced field missing are never rejected.
    """

    name: str
    fields: tuple[str, ...]
    predicate: Callable[..., bool]


def parity_exceeds_gravidity(parity: float, gravidity: float) -> bool:
    return parity > gravidity


BUILTIN_RULES: dict[str, ValidityRule] = {
    "parity-le-gravidity": ValidityRule("parity-le-gravidity", ("parity", "gravidity"), parity_exceeds_gravidity),
}


@dataclass
class FilterReport:
    rejected: list[tuple[int, str]] = field(default_factory=list)  # (input row, rule name)
    id_map: dict[int, int] = field(default_factory=dict)  # input row -> output row

    def to_json(self) -> dict:
        return {
            "rejected": [{"row": r, "rule": name} for r, name in self.rejected],
            "id_map": {str(k): v for k, v in self.id_map.items()},
        }


def _number(row: int, name: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise NonNumericField(f"row {row}: field {name!r} value {value!r} is not numeric") from None


def filter_invalid(table: DecisionTable, rules: Sequence[ValidityRule]) -> tuple[DecisionTable, FilterReport]:
    """Drop rows matching any reject rule; surviving rows keep their order."""
    for rule in rules:
        for f in rule.fields:
            table.position(f)
    report = FilterReport()
    keep = []
    for i in range(len(table)):
        hit = None
        for rule in rules:
            raw = [table.value(i, f) for f in rule.fields]
            if any(v is None for v in raw):
                continue
            args = [_number(i, f, v) for f, v in zip(rule.fields, raw)]
            if rule.predicate(*args):
                hit = rule.name
                break
        if hit is None:
            report.id_map[i] = len(keep)
            keep.append(i)
        else:
            report.rejected.append((i, hit))
    return table.select_rows(keep), report


def rules_by_name(names: Sequence[str], registry: Mapping[str, ValidityRule] = BUILTIN_RULES) -> list[ValidityRule]:
    out = []
    for n in names:
        if n not in registry:
            raise RoughSetError(f"unknown validity rule {n!r}; known: {sorted(registry)}")
        out.append(registry[n])
    return out
