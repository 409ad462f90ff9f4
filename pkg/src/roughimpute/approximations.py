"""Lower/upper approximations, rough membership and boundary regions.

Four methods are available:

* ``classical``: ``{x | [x]_B <= X}`` and ``{x | [x]_B & X}``
* ``union``: unions of whole equivalence classes meeting the same tests
* ``singleton``: as classical, with the characteristic set K_B(x) as granule
* ``subset``: unions of the characteristic sets meeting the tests

The first two need B to be complete.  For complete B all four coincide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._bits import to_mask, to_rows, to_set
from .errors import IncompleteColumn, RoughSetError
from .partitions import characteristic_mask, project
from .table import DecisionTable


class Method(str, enum.Enum):
    CLASSICAL = "classical"
    UNION = "union"
    SINGLETON = "singleton"
    SUBSET = "subset"


@dataclass(frozen=True)
class Approximation:
    method: Method
    attributes: tuple[str, ...]
    concept: frozenset[int]
    lower: frozenset[int]
    upper: frozenset[int]

    def to_json(self) -> dict:
        report = boundary(self)
        return {
            "method": self.method.value,
            "attributes": list(self.attributes),
            "concept": sorted(self.concept),
            "lower": sorted(self.lower),
            "upper": sorted(self.upper),
            "boundary": sorted(report.boundary),
            "crisp": report.crisp,
        }


@dataclass(frozen=True)
class BoundaryReport:
    boundary: frozenset[int]
    crisp: bool


def group_rows(table: DecisionTable, attrs: tuple[str, ...], rows: Iterable[int]) -> dict[tuple, int]:
    """Map each B-tuple (None for missing) to the mask of rows carrying it."""
    groups: dict[tuple, int] = {}
    for x in rows:
        t = project(table, attrs, x)
        groups[t] = groups.get(t, 0) | (1 << x)
    return groups


def approximation_masks(
    table: DecisionTable,
    attrs: tuple[str, ...],
    concept: int,
    method: Method,
    anchors: int | None = None,
) -> tuple[int, int]:
    """Lower and upper approximation of a concept bitmask.

    ``anchors`` limits which rows x are tested for the characteristic-set
    methods.  Passing the concept itself leaves the lower approximation
    unchanged (x is in K_B(x), so an anchor outside X never qualifies) and
    yields exactly the part of the upper approximation inside X.
    """
    method = Method(method)
    outside = table.index.universe & ~concept
    lower = upper = 0

    if method in (Method.CLASSICAL, Method.UNION):
        missing = [a for a in attrs if table.index.missing[a]]
        if missing:
            raise IncompleteColumn(f"{method.value} approximation needs complete columns; missing values in {missing}")
        classes = group_rows(table, attrs, range(len(table)))
        if method is Method.CLASSICAL:
            for x in range(len(table)):
                cls = classes[project(table, attrs, x)]
                if not cls & outside:
                    lower |= 1 << x
                if cls & concept:
                    upper |= 1 << x
        else:
            for cls in classes.values():
                if not cls & outside:
                    lower |= cls
                if cls & concept:
                    upper |= cls
        return lower, upper

    rows = range(len(table)) if anchors is None else to_rows(anchors)
    return characteristic_approximation(table, attrs, group_rows(table, attrs, rows), concept, method)


def characteristic_approximation(
    table: DecisionTable,
    attrs: tuple[str, ...],
    groups: dict[tuple, int],
    concept: int,
    method: Method,
) -> tuple[int, int]:
    """Singleton/subset approximation over anchors grouped by B-tuple.

    Anchors sharing a B-tuple share K_B, so each granule is built once.
    """
    outside = table.index.universe & ~concept
    lower = upper = 0
    for t, members in groups.items():
        granule = characteristic_mask(table, attrs, t)
        if method is Method.SINGLETON:
            if not granule & outside:
                lower |= members
            if granule & concept:
                upper |= members
        else:
            if not granule & outside:
                lower |= granule
            if granule & concept:
                upper |= granule
    return lower, upper


def approximate(
    table: DecisionTable,
    attributes: Iterable[str],
    concept: Iterable[int],
    method: Method | str = Method.SUBSET,
) -> Approximation:
    """Approximate the row-id set ``concept`` using attributes B."""
    attrs = table.check_attributes(attributes)
    if not attrs:
        raise RoughSetError("attribute set must be non-empty")
    concept = frozenset(concept)
    for x in concept:
        table.check_row(x)
    method = Method(method)
    lower, upper = approximation_masks(table, attrs, to_mask(concept), method)
    return Approximation(method, attrs, concept, to_set(lower), to_set(upper))


def granule(table: DecisionTable, attributes: Iterable[str], x: int) -> frozenset[int]:
    """Equivalence class of ``x`` for complete B, else K_B(x).

    Both are computed by the same compatibility scan: on complete columns
    the wildcard never fires and K_B(x) is exactly [x]_B.
    """
    attrs = table.check_attributes(attributes)
    table.check_row(x)
    return to_set(characteristic_mask(table, attrs, project(table, attrs, x)))


def rough_membership(table: DecisionTable, attributes: Iterable[str], x: int, concept: Iterable[int]) -> Fraction:
    g = granule(table, attributes, x)
    return Fraction(len(g & frozenset(concept)), len(g))


def boundary(approx: Approximation) -> BoundaryReport:
    region = approx.upper - approx.lower
    return BoundaryReport(region, not region)
