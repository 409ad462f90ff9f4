"""Immutable decision tables over categorical data with missing cells.

A table holds condition attributes plus exactly one decision attribute.
Cells are opaque string labels; ``None`` marks a missing cell.  Numeric
looking values such as ``"0.3"`` are compared by equality only.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from ._bits import TableIndex
from .errors import (
    EmptyDomain,
    MissingColumn,
    MissingDecisionValue,
    OutOfRange,
    RowArityMismatch,
    SchemaError,
    UnknownAttribute,
    UnknownColumn,
    ValueOutsideDeclaredDomain,
)

MISSING_TOKEN = "?"

CONDITION = "condition"
DECISION = "decision"

Value = str | None

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def natural_key(value: str):
    """Sort key placing numeric-looking labels first, in numeric order."""
    if _NUMBER.match(value):
        return (0, float(value), value)
    return (1, 0.0, value)


@dataclass(frozen=True)
class AttributeSchema:
    name: str
    kind: str = CONDITION
    domain: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise SchemaError("attribute names must be non-empty strings")
        if self.kind not in (CONDITION, DECISION):
            raise SchemaError(f"attribute {self.name!r}: kind must be 'condition' or 'decision'")
        if self.domain is not None:
            dom = tuple(str(v).strip() for v in self.domain)
            if not dom:
                raise SchemaError(f"attribute {self.name!r}: declared domain is empty")
            if len(set(dom)) != len(dom):
                raise SchemaError(f"attribute {self.name!r}: declared domain has duplicates")
            object.__setattr__(self, "domain", dom)

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind}
        if self.domain is not None:
            out["domain"] = list(self.domain)
        return out


class Cell(NamedTuple):
    row: int
    attribute: str


def validate_schema(schema: Sequence[AttributeSchema]) -> tuple[AttributeSchema, ...]:
    schema = tuple(schema)
    names = [a.name for a in schema]
    if len(set(names)) != len(names):
        raise SchemaError(f"duplicate attribute names in schema: {names}")
    decisions = [a.name for a in schema if a.kind == DECISION]
    if len(decisions) != 1:
        raise SchemaError(f"schema needs exactly one decision attribute, found {len(decisions)}")
    return schema


def load_schema(source: str | Mapping | Sequence) -> tuple[AttributeSchema, ...]:
    """Build a schema from a JSON string or an already-parsed document.

    Accepts either ``{"attributes": [...]}`` or a bare list of
    ``{"name", "kind", "domain"?}`` objects.
    """
    doc = json.loads(source) if isinstance(source, str) else source
    if isinstance(doc, Mapping):
        doc = doc.get("attributes")
    if not isinstance(doc, list):
        raise SchemaError("schema must be a list of attributes or {'attributes': [...]}")
    attrs = []
    for entry in doc:
        if not isinstance(entry, Mapping) or "name" not in entry:
            raise SchemaError(f"bad schema entry: {entry!r}")
        domain = entry.get("domain")
        attrs.append(
            AttributeSchema(
                name=str(entry["name"]),
                kind=entry.get("kind", CONDITION),
                domain=tuple(domain) if domain is not None else None,
            )
        )
    return validate_schema(attrs)


def dump_schema(schema: Sequence[AttributeSchema]) -> str:
    return json.dumps({"attributes": [a.to_json() for a in schema]}, indent=2)


class DecisionTable:
    """An immutable (possibly incomplete) decision table.

    Row ids are 0-based positions and never change for the lifetime of
    the table.  Derived tables (fills, masks, filters) are new objects.
    """

    def __init__(self, schema: Sequence[AttributeSchema], rows: Iterable[Sequence[Value]]):
        self._schema = validate_schema(schema)
        self._attributes = tuple(a.name for a in self._schema)
        self._position = {name: j for j, name in enumerate(self._attributes)}
        self._decision = next(a.name for a in self._schema if a.kind == DECISION)
        width = len(self._schema)
        d = self._position[self._decision]
        checked = []
        for i, row in enumerate(rows):
            row = tuple(row)
            if len(row) != width:
                raise RowArityMismatch(f"row {i}: expected {width} cells, got {len(row)}")
            if row[d] is None:
                raise MissingDecisionValue(f"row {i}: decision {self._decision!r} is missing")
            for attr, v in zip(self._schema, row):
                if v is not None and attr.domain is not None and v not in attr.domain:
                    raise ValueOutsideDeclaredDomain(
                        f"row {i}: value {v!r} not in declared domain of {attr.name!r}"
                    )
            checked.append(row)
        self._rows = tuple(checked)
        self._domains: dict[str, tuple[str, ...]] = {}

    # -- structure -------------------------------------------------------

    @property
    def schema(self) -> tuple[AttributeSchema, ...]:
        return self._schema

    @property
    def attributes(self) -> tuple[str, ...]:
        return self._attributes

    @property
    def decision(self) -> str:
        return self._decision

    @property
    def conditions(self) -> tuple[str, ...]:
        return tuple(a for a in self._attributes if a != self._decision)

    @property
    def rows(self) -> tuple[tuple[Value, ...], ...]:
        return self._rows

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecisionTable):
            return NotImplemented
        return self._schema == other._schema and self._rows == other._rows

    def __repr__(self) -> str:
        return f"DecisionTable({len(self)} rows, attributes={list(self._attributes)})"

    def position(self, attribute: str) -> int:
        try:
            return self._position[attribute]
        except KeyError:
            raise UnknownAttribute(f"unknown attribute {attribute!r}") from None

    def attribute(self, name: str) -> AttributeSchema:
        return self._schema[self.position(name)]

    def check_attributes(self, attributes: Iterable[str]) -> tuple[str, ...]:
        """Validate and canonicalise an attribute subset to schema order."""
        wanted = set(attributes)
        for a in wanted:
            self.position(a)
        return tuple(a for a in self._attributes if a in wanted)

    def check_row(self, row: int) -> int:
        if not isinstance(row, int) or not 0 <= row < len(self._rows):
            raise OutOfRange(f"row {row!r} out of range for table with {len(self._rows)} rows")
        return row

    # -- cell access -----------------------------------------------------

    def value(self, row: int, attribute: str) -> Value:
        j = self.position(attribute)
        return self._rows[self.check_row(row)][j]

    def column(self, attribute: str) -> tuple[Value, ...]:
        j = self.position(attribute)
        return tuple(r[j] for r in self._rows)

    def is_complete(self, attributes: Iterable[str] | None = None) -> bool:
        attrs = self._attributes if attributes is None else self.check_attributes(attributes)
        return all(not self.index.missing[a] for a in attrs)

    def missing_cells(self) -> list[Cell]:
        return [
            Cell(i, a)
            for i, row in enumerate(self._rows)
            for a, v in zip(self._attributes, row)
            if v is None
        ]

    def effective_domain(self, attribute: str) -> tuple[str, ...]:
        """Declared domain, else the naturally sorted observed values."""
        dom = self._domains.get(attribute)
        if dom is None:
            spec = self.attribute(attribute)
            if spec.domain is not None:
                dom = spec.domain
            else:
                observed = {v for v in self.column(attribute) if v is not None}
                if not observed:
                    raise EmptyDomain(f"attribute {attribute!r} has no declared domain and no known values")
                dom = tuple(sorted(observed, key=natural_key))
            self._domains[attribute] = dom
        return dom

    def known_attributes(self, row: int) -> frozenset[str]:
        r = self._rows[self.check_row(row)]
        return frozenset(a for a, v in zip(self._attributes, r) if v is not None)

    @cached_property
    def index(self) -> TableIndex:
        return TableIndex(self._attributes, self._rows)

    # -- derivation ------------------------------------------------------

    def with_cells(self, updates: Mapping[Cell, Value]) -> "DecisionTable":
        """Copy of the table with the given cells replaced."""
        rows = [list(r) for r in self._rows]
        for cell, v in updates.items():
            rows[self.check_row(cell.row)][self.position(cell.attribute)] = v
        return DecisionTable(self._schema, rows)

    def with_schema(self, schema: Sequence[AttributeSchema]) -> "DecisionTable":
        return DecisionTable(schema, self._rows)

    def select_rows(self, rows: Iterable[int]) -> "DecisionTable":
        return DecisionTable(self._schema, [self._rows[self.check_row(i)] for i in rows])

    def to_csv(self, missing: str = MISSING_TOKEN) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self._attributes)
        for row in self._rows:
            writer.writerow([missing if v is None else v for v in row])
        return buf.getvalue()


def parse_table(
    text: str,
    schema: Sequence[AttributeSchema] | None = None,
    *,
    missing: str = MISSING_TOKEN,
    decision: str | None = None,
) -> DecisionTable:
    """Parse a CSV document into a validated :class:`DecisionTable`.

    The header row must name every schema attribute; the schema is
    reordered to match the header so the table serialises back to the
    same layout.  Cells equal to ``missing`` (after trimming) become
    missing.  Without a schema, every column is a condition attribute
    except ``decision`` (default: the last column).
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("CSV document has no header row") from None

    if schema is None:
        if not header:
            raise SchemaError("CSV header is empty")
        dname = decision if decision is not None else header[-1]
        if dname not in header:
            raise UnknownColumn(f"decision column {dname!r} not in header")
        schema = [AttributeSchema(h, DECISION if h == dname else CONDITION) for h in header]
    by_name = {a.name: a for a in validate_schema(schema)}
    for h in header:
        if h not in by_name:
            raise UnknownColumn(f"column {h!r} is not in the schema")
    if len(set(header)) != len(header):
        raise SchemaError(f"duplicate column in header: {header}")
    for name in by_name:
        if name not in header:
            raise MissingColumn(f"schema attribute {name!r} is missing from the header")
    ordered = [by_name[h] for h in header]

    rows = []
    for lineno, raw in enumerate(reader, start=2):
        if not raw or (len(raw) == 1 and not raw[0].strip()):
            continue
        if len(raw) != len(header):
            raise RowArityMismatch(f"line {lineno}: expected {len(header)} cells, got {len(raw)}")
        cells = [c.strip() for c in raw]
        rows.append([None if c == missing else c for c in cells])
    return DecisionTable(ordered, rows)


def cell_value(table: DecisionTable, cell: Cell) -> Value:
    return table.value(cell.row, cell.attribute)


def effective_domain(table: DecisionTable, attribute: str) -> tuple[str, ...]:
    return table.effective_domain(attribute)


def known_attributes(table: DecisionTable, row: int) -> frozenset[str]:
    return table.known_attributes(row)
