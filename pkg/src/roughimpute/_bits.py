"""Row-id sets as Python int bitsets, plus the per-table value index.

Bit ``i`` of a mask is set when row ``i`` is a member.  Intersections and
unions are single big-int operations, which keeps characteristic-set
lookups cheap on tables with tens of thousands of rows.
"""

from __future__ import annotations

from typing import Iterable


def to_mask(rows: Iterable[int]) -> int:
    mask = 0
    for r in rows:
        mask |= 1 << r
    return mask


def to_rows(mask: int) -> list[int]:
    """Row ids in ascending order."""
    if not mask:
        return []
    bits = bin(mask)[:1:-1]
    return [i for i, c in enumerate(bits) if c == "1"]


def to_set(mask: int) -> frozenset[int]:
    return frozenset(to_rows(mask))


class TableIndex:
    """Value -> row-mask index for every column of a table.

    Built once per table and read-only afterwards.
    """

    def __init__(self, attributes: tuple[str, ...], rows: tuple[tuple, ...]):
        n = len(rows)
        self.universe = (1 << n) - 1
        self.values: dict[str, dict[str, int]] = {}
        self.missing: dict[str, int] = {}
        for j, name in enumerate(attributes):
            by_value: dict[str, int] = {}
            missing = 0
            for i, row in enumerate(rows):
                v = row[j]
                if v is None:
                    missing |= 1 << i
                else:
                    by_value[v] = by_value.get(v, 0) | (1 << i)
            self.values[name] = by_value
            self.missing[name] = missing

    def known(self, attribute: str) -> int:
        return self.universe & ~self.missing[attribute]

    def equal(self, attribute: str, value: str) -> int:
        return self.values[attribute].get(value, 0)

    def compatible(self, attribute: str, value: str | None) -> int:
        """Rows whose cell equals ``value`` or is missing (wildcard match)."""
        if value is None:
            return self.universe
        return self.values[attribute].get(value, 0) | self.missing[attribute]
