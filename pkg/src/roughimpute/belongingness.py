"""Weighted readings of missing values.

A missing cell is read either probabilistically (uniform over the
attribute's domain, each value with weight 1/|dom|) or possibilistically
(every domain value fully possible, weight 1).  Per-attribute degrees
are combined with product or min respectively.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import RoughSetError
from .partitions import equivalence_family
from .table import Cell, DecisionTable

ONE = Fraction(1)
ZERO = Fraction(0)


class Mode(str, enum.Enum):
    PROBABILISTIC = "probabilistic"
    POSSIBILISTIC = "possibilistic"

    def combine(self, degrees: Iterable[Fraction]) -> Fraction:
        out = ONE
        for d in degrees:
            out = out * d if self is Mode.PROBABILISTIC else min(out, d)
        return out


def missing_weight(table: DecisionTable, attribute: str, mode: Mode) -> Fraction:
    """Weight given to each candidate value of a missing cell."""
    if Mode(mode) is Mode.POSSIBILISTIC:
        table.effective_domain(attribute)
        return ONE
    return Fraction(1, len(table.effective_domain(attribute)))


def value_distribution(table: DecisionTable, cell: Cell, mode: Mode | str = Mode.PROBABILISTIC):
    """List of ``(value, weight)`` for one condition cell."""
    mode = Mode(mode)
    if cell.attribute == table.decision:
        raise RoughSetError("value_distribution is defined for condition attributes only")
    v = table.value(cell.row, cell.attribute)
    if v is not None:
        return [(v, ONE)]
    w = missing_weight(table, cell.attribute, mode)
    return [(value, w) for value in table.effective_domain(cell.attribute)]


def attribute_degree(table: DecisionTable, o: int, o2: int, attribute: str, mode: Mode) -> Fraction:
    a, b = table.value(o, attribute), table.value(o2, attribute)
    if a is None or b is None:
        return missing_weight(table, attribute, mode)
    return ONE if a == b else ZERO


def indiscernibility_degree(
    table: DecisionTable, o: int, o2: int, attributes: Iterable[str], mode: Mode | str = Mode.PROBABILISTIC
) -> Fraction:
    """Degree to which ``o`` and ``o2`` agree on every attribute of B."""
    mode = Mode(mode)
    attrs = table.check_attributes(attributes)
    table.check_row(o)
    table.check_row(o2)
    if o == o2:
        return ONE
    return mode.combine(attribute_degree(table, o, o2, a, mode) for a in attrs)


def weighted_indiscernibility(table: DecisionTable, attributes: Iterable[str], mode: Mode | str = Mode.PROBABILISTIC):
    """Materialise the weighted relation as ``[((o, o2), degree), ...]``.

    Only pairs with non-zero degree are listed, ``o <= o2``.  Quadratic in
    the row count; intended for small tables and dumps.
    """
    attrs = table.check_attributes(attributes)
    out = []
    n = len(table)
    for o in range(n):
        for o2 in range(o, n):
            d = indiscernibility_degree(table, o, o2, attrs, mode)
            if d:
                out.append(((o, o2), d))
    return out


@dataclass(frozen=True)
class WeightedClass:
    value: str
    members: frozenset[int]
    weight: Fraction
    # membership weight per row: 1 for rows known to hold ``value``
    member_weights: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class WeightedFamily:
    attribute: str
    classes: tuple[WeightedClass, ...]


def weighted_equivalence_family(table: DecisionTable, attribute: str, mode: Mode | str = Mode.PROBABILISTIC) -> WeightedFamily:
    mode = Mode(mode)
    if attribute == table.decision:
        raise RoughSetError("weighted families are defined for condition attributes only")
    family = equivalence_family(table, [attribute])
    w = missing_weight(table, attribute, mode)
    classes = []
    for cls in family.classes:
        members = sorted(cls.members)
        weights = tuple((r, ONE if table.value(r, attribute) is not None else w) for r in members)
        has_missing = any(table.value(r, attribute) is None for r in members)
        weight = w if has_missing else ONE
        classes.append(WeightedClass(cls.representative[0], cls.members, weight, weights))
    return WeightedFamily(attribute, tuple(classes))
