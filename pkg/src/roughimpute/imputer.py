"""Rough-set imputation of missing condition cells.

For each missing cell the candidate values come from the first stage that
produces any:

1. exact match: rows with the same decision that agree exactly on every
   condition attribute the anchor row knows;
2. lower approximation: rows in the lower approximation of the anchor's
   decision concept, using the anchor's known attributes;
3. upper approximation, restricted to the concept;
4. the attribute's full domain, uniformly weighted.

Weights are value frequencies in the pool.  Cells whose best value is
tied are postponed to a later pass, when more of the table is filled in;
on the last pass every remaining cell is decided by weight, ties going to
the value earliest in the attribute's domain.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .approximations import Method, characteristic_approximation
from .belongingness import Mode, missing_weight
from .errors import RoughSetError
from .table import Cell, DecisionTable, Value


class Selection(str, enum.Enum):
    MAX_WEIGHT = "max_weight"
    EMIT_ROUGH_SET = "emit_rough_set"


class Source(str, enum.Enum):
    EXACT_MATCH = "exact_match"
    LOWER_APPROX = "lower_approx"
    UPPER_APPROX = "upper_approx"
    DOMAIN_FALLBACK = "domain_fallback"


@dataclass(frozen=True)
class ImputationConfig:
    mode: Mode = Mode.PROBABILISTIC
    method: Method = Method.SUBSET
    selection: Selection = Selection.MAX_WEIGHT
    max_passes: int = 3

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "selection", Selection(self.selection))
        if self.method not in (Method.SINGLETON, Method.SUBSET):
            raise RoughSetError("imputation method must be 'singleton' or 'subset'")
        if not isinstance(self.max_passes, int) or self.max_passes < 1:
            raise RoughSetError("max_passes must be a positive integer")

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "method": self.method.value,
            "selection": self.selection.value,
            "max_passes": self.max_passes,
        }


@dataclass(frozen=True)
class CandidateSet:
    cell: Cell
    candidates: tuple[tuple[str, Fraction], ...]  # in domain order
    source: Source

    @property
    def crisp(self) -> bool:
        return len(self.candidates) == 1

    def best(self) -> list[str]:
        top = max(w for _, w in self.candidates)
        return [v for v, w in self.candidates if w == top]

    @property
    def decisive(self) -> bool:
        return len(self.best()) == 1


@dataclass(frozen=True)
class ImputationRecord:
    cell: Cell
    source: Source
    candidates: tuple[tuple[str, Fraction], ...]
    chosen: Value
    pass_number: int

    def to_json(self) -> dict:
        return {
            "row": self.cell.row,
            "attribute": self.cell.attribute,
            "source": self.source.value,
            "candidates": [{"value": v, "weight": round(float(w), 6)} for v, w in self.candidates],
            "chosen": self.chosen,
            "pass": self.pass_number,
        }


@dataclass
class ImputationLog:
    records: list[ImputationRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def unresolved(self) -> list[ImputationRecord]:
        return [r for r in self.records if r.chosen is None]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json()) + "\n" for r in self.records)


def order_attributes(table: DecisionTable) -> list[str]:
    """Decision first, then conditions by descending known-cell count."""
    index = table.index
    conds = sorted(
        enumerate(table.conditions),
        key=lambda p: (-index.known(p[1]).bit_count(), p[0]),
    )
    return [table.decision] + [a for _, a in conds]


class _Snapshot:
    """Candidate computation against one fixed table state.

    Pools are cached per (attribute pattern, concept) since many cells
    share them.  Safe to query from several threads: cached values are
    pure functions of the snapshot, so a duplicated computation is only
    wasted work.
    """

    def __init__(self, table: DecisionTable, config: ImputationConfig):
        self.table = table
        self.config = config
        self.index = table.index
        self._dpos = table.position(table.decision)
        self._exact: dict = {}
        self._approx: dict = {}
        self._groups: dict = {}

    def _weights(self, attribute: str, pool: int) -> tuple[tuple[str, Fraction], ...]:
        if not pool:
            return ()
        counts = []
        for v in self.table.effective_domain(attribute):
            c = (pool & self.index.equal(attribute, v)).bit_count()
            if c:
                counts.append((v, c))
        if not counts:
            return ()
        if self.config.mode is Mode.POSSIBILISTIC:
            top = max(c for _, c in counts)
            return tuple((v, Fraction(c, top)) for v, c in counts)
        total = sum(c for _, c in counts)
        return tuple((v, Fraction(c, total)) for v, c in counts)

    def _anchor(self, cell: Cell):
        table = self.table
        if cell.attribute == table.decision:
            raise RoughSetError("the decision attribute is never imputed")
        row = table.rows[table.check_row(cell.row)]
        if row[table.position(cell.attribute)] is not None:
            raise RoughSetError(f"cell {tuple(cell)} is not missing")
        known = tuple(
            (a, v) for a, v in zip(table.attributes, row) if v is not None and a != table.decision
        )
        return row[self._dpos], known

    def exact(self, cell: Cell) -> CandidateSet | None:
        decision, known = self._anchor(cell)
        key = (cell.attribute, decision, known)
        weights = self._exact.get(key)
        if weights is None:
            index = self.index
            pool = index.equal(self.table.decision, decision) & index.known(cell.attribute)
            for a, v in known:
                pool &= index.equal(a, v)
                if not pool:
                    break
            weights = self._exact[key] = self._weights(cell.attribute, pool)
        if not weights:
            return None
        return CandidateSet(cell, weights, Source.EXACT_MATCH)

    def _concept_groups(self, decision: str) -> dict[tuple, int]:
        groups = self._groups.get(decision)
        if groups is None:
            groups = {}
            dpos = self._dpos
            for i, row in enumerate(self.table.rows):
                if row[dpos] == decision:
                    groups[row] = groups.get(row, 0) | (1 << i)
            self._groups[decision] = groups
        return groups

    def _approximation(self, attrs: tuple[str, ...], decision: str) -> tuple[int, int]:
        """Lower approximation and concept-restricted upper approximation."""
        key = (attrs, decision)
        cached = self._approx.get(key)
        if cached is None:
            positions = [self.table.position(a) for a in attrs]
            groups: dict[tuple, int] = {}
            for row, mask in self._concept_groups(decision).items():
                t = tuple(row[j] for j in positions)
                groups[t] = groups.get(t, 0) | mask
            concept = self.index.equal(self.table.decision, decision)
            lower, upper = characteristic_approximation(self.table, attrs, groups, concept, self.config.method)
            cached = self._approx[key] = (lower & concept, upper & concept)
        return cached

    def approximation(self, cell: Cell) -> CandidateSet:
        decision, known = self._anchor(cell)
        attrs = tuple(a for a, _ in known)
        lower, upper = self._approximation(attrs, decision)
        target_known = self.index.known(cell.attribute)
        weights = self._weights(cell.attribute, lower & target_known)
        if weights:
            return CandidateSet(cell, weights, Source.LOWER_APPROX)
        weights = self._weights(cell.attribute, upper & target_known)
        if weights:
            return CandidateSet(cell, weights, Source.UPPER_APPROX)
        w = missing_weight(self.table, cell.attribute, self.config.mode)
        domain = self.table.effective_domain(cell.attribute)
        return CandidateSet(cell, tuple((v, w) for v in domain), Source.DOMAIN_FALLBACK)

    def candidates(self, cell: Cell) -> CandidateSet:
        return self.exact(cell) or self.approximation(cell)


def exact_match_candidates(
    table: DecisionTable, cell: Cell, mode: Mode | str = Mode.PROBABILISTIC
) -> CandidateSet | None:
    """Candidates from rows matching the anchor on all its known attributes.

    Returns None when no such row has a known value at ``cell``.
    """
    return _Snapshot(table, ImputationConfig(mode=mode)).exact(cell)


def approximation_candidates(
    table: DecisionTable, cell: Cell, config: ImputationConfig | None = None
) -> CandidateSet:
    return _Snapshot(table, config or ImputationConfig()).approximation(cell)


def select_value(candidates: CandidateSet, config: ImputationConfig | None = None) -> Value:
    """Pick a value from a candidate set.

    ``max_weight`` returns the heaviest value, the first in domain order on
    ties.  ``emit_rough_set`` only commits to crisp (single-valued) sets and
    returns None otherwise.
    """
    config = config or ImputationConfig()
    if not candidates.candidates:
        raise RoughSetError("cannot select from an empty candidate set")
    if config.selection is Selection.EMIT_ROUGH_SET:
        return candidates.candidates[0][0] if candidates.crisp else None
    return candidates.best()[0]


def impute(
    table: DecisionTable, config: ImputationConfig | None = None, *, workers: int = 1
) -> tuple[DecisionTable, ImputationLog]:
    """Fill the missing condition cells of ``table``.

    Candidate sets within a pass are computed against the table as it was
    at the start of that pass, so ``workers`` (thread count) has no effect
    on the result.  The input table is not modified.
    """
    config = config or ImputationConfig()
    rank = {a: i for i, a in enumerate(order_attributes(table))} if len(table) else {}
    pending = sorted(table.missing_cells(), key=lambda c: (c.row, rank[c.attribute]))
    records: dict[Cell, ImputationRecord] = {}
    working = table

    pass_number = 1
    while pending:
        final = pass_number >= config.max_passes
        snapshot = _Snapshot(working, config)
        if workers > 1 and len(pending) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(snapshot.candidates, pending))
        else:
            results = [snapshot.candidates(c) for c in pending]

        fills: dict[Cell, str] = {}
        postponed = []
        for cell, cs in zip(pending, results):
            if cs.crisp or (config.selection is Selection.MAX_WEIGHT and cs.decisive) or final:
                chosen = select_value(cs, config)
                records[cell] = ImputationRecord(cell, cs.source, cs.candidates, chosen, pass_number)
                if chosen is not None:
                    fills[cell] = chosen
            else:
                postponed.append(cell)

        working = working.with_cells(fills) if fills else working
        pending = postponed
        # an unchanged table would reproduce this pass exactly
        pass_number = pass_number + 1 if fills else config.max_passes

    log = ImputationLog([records[c] for c in sorted(records, key=lambda c: (c.row, rank[c.attribute]))])
    return working, log
