"""Indiscernibility, equivalence families and characteristic sets.

Missing cells are "do not care" values: they match anything on either
side of a comparison.  The resulting relation is reflexive and symmetric
but not transitive, so families over incomplete columns are overlapping
covers rather than partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ._bits import to_rows, to_set
from .errors import AllMissing, RoughSetError
from .table import DecisionTable


@dataclass(frozen=True)
class EquivalenceClass:
    # entries are None where the class is keyed on a partial tuple
    representative: tuple[str | None, ...]
    members: frozenset[int]


@dataclass(frozen=True)
class EquivalenceFamily:
    attributes: tuple[str, ...]
    classes: tuple[EquivalenceClass, ...]

    def sets(self) -> list[frozenset[int]]:
        return [c.members for c in self.classes]

    def is_partition(self) -> bool:
        seen = 0
        for c in self.classes:
            for r in c.members:
                if seen >> r & 1:
                    return False
                seen |= 1 << r
        return True


@dataclass(frozen=True)
class CharacteristicSet:
    anchor: int
    attributes: tuple[str, ...]
    members: frozenset[int]


def _attrs(table: DecisionTable, attributes: Iterable[str]) -> tuple[str, ...]:
    attrs = table.check_attributes(attributes)
    if not attrs:
        raise RoughSetError("attribute set must be non-empty")
    return attrs


def characteristic_mask(table: DecisionTable, attributes: tuple[str, ...], row_values) -> int:
    """K_B as a bitmask for a tuple of (attribute, value-or-None) on B."""
    index = table.index
    mask = index.universe
    for a, v in zip(attributes, row_values):
        if v is not None:
            mask &= index.compatible(a, v)
            if not mask:
                break
    return mask


def project(table: DecisionTable, attributes: tuple[str, ...], row: int) -> tuple:
    r = table.rows[row]
    return tuple(r[table.position(a)] for a in attributes)


def characteristic_set(table: DecisionTable, attributes: Iterable[str], x: int) -> CharacteristicSet:
    """Rows compatible with ``x`` on every attribute of B where ``x`` is known."""
    attrs = _attrs(table, attributes)
    table.check_row(x)
    mask = characteristic_mask(table, attrs, project(table, attrs, x))
    return CharacteristicSet(x, attrs, to_set(mask))


def indiscernibility_pairs(table: DecisionTable, attributes: Iterable[str]) -> set[tuple[int, int]]:
    """The extended relation as ``(x, y)`` pairs with ``x <= y``.

    The diagonal is always included.  Symmetric partners ``(y, x)`` are
    implied and not stored.
    """
    attrs = _attrs(table, attributes)
    pairs: set[tuple[int, int]] = set()
    cache: dict[tuple, list[int]] = {}
    for x in range(len(table)):
        key = project(table, attrs, x)
        ys = cache.get(key)
        if ys is None:
            ys = cache[key] = to_rows(characteristic_mask(table, attrs, key))
        pairs.update((x, y) for y in ys if y >= x)
    return pairs


def _tuple_key(table: DecisionTable, attributes: tuple[str, ...], values: tuple):
    key = []
    for a, v in zip(attributes, values):
        if v is None:
            key.append((1, 0))
        else:
            key.append((0, table.effective_domain(a).index(v)))
    return tuple(key)


def equivalence_family(table: DecisionTable, attributes: Iterable[str]) -> EquivalenceFamily:
    """One class per distinct complete value tuple observed on B.

    A row with missing cells on B joins every class it is compatible with.
    Classes are ordered by representative tuple in domain order.
    """
    attrs = _attrs(table, attributes)
    complete: dict[tuple, None] = {}
    partial: list[int] = []
    for x in range(len(table)):
        t = project(table, attrs, x)
        if None in t:
            partial.append(x)
        else:
            complete.setdefault(t)
    if not complete:
        raise AllMissing(f"no row has a complete value tuple on {list(attrs)}")

    reps = sorted(complete, key=lambda t: _tuple_key(table, attrs, t))
    classes = [EquivalenceClass(t, to_set(characteristic_mask(table, attrs, t))) for t in reps]

    covered = 0
    for c in classes:
        for r in c.members:
            covered |= 1 << r
    orphans: dict[tuple, list[int]] = {}
    for x in partial:
        if not covered >> x & 1:
            orphans.setdefault(project(table, attrs, x), []).append(x)
    for t in sorted(orphans, key=lambda t: _tuple_key(table, attrs, t)):
        classes.append(EquivalenceClass(t, frozenset(orphans[t])))
    return EquivalenceFamily(attrs, tuple(classes))


def equivalence_class(table: DecisionTable, attributes: Iterable[str], x: int) -> frozenset[int]:
    """[x]_B for a complete column set (rows with the identical tuple)."""
    attrs = _attrs(table, attributes)
    index = table.index
    mask = index.universe
    for a, v in zip(attrs, project(table, attrs, table.check_row(x))):
        mask &= index.equal(a, v) if v is not None else index.missing[a]
    return to_set(mask)


def decision_concepts(table: DecisionTable) -> list[tuple[str, frozenset[int]]]:
    """Partition of the universe by decision value, in domain order."""
    if not len(table):
        raise RoughSetError("decision_concepts needs a non-empty table")
    index = table.index
    d = table.decision
    return [(v, to_set(index.equal(d, v))) for v in table.effective_domain(d) if index.equal(d, v)]


def concept_mask(table: DecisionTable, attribute: str, value: str) -> int:
    table.position(attribute)
    return table.index.equal(attribute, value)
