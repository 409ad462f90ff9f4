import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from roughimpute.table import CONDITION, DECISION, AttributeSchema, DecisionTable, load_schema, parse_table

DATA = Path(__file__).resolve().parent.parent / "data"

TABLE1_CSV = (DATA / "table1.csv").read_text()
TABLE1_SCHEMA = (DATA / "table1_schema.json").read_text()
TABLE2_CSV = (DATA / "table2.csv").read_text()

# object o_k is row k - 1
O1, O2, O3, O4, O5, O6, O7 = range(7)


@pytest.fixture
def table1():
    return parse_table(TABLE1_CSV, load_schema(TABLE1_SCHEMA))


@pytest.fixture
def table2():
    return parse_table(TABLE2_CSV, decision="hiv")


def random_table(rng: random.Random, max_rows=8, max_attrs=4, max_values=3, max_missing=0.3) -> DecisionTable:
    """Small random incomplete table; the last attribute is the decision."""
    n_rows = rng.randint(1, max_rows)
    n_cond = rng.randint(1, max_attrs - 1)
    missing = rng.choice([0.0, rng.uniform(0, max_missing)])
    schema = [AttributeSchema(f"a{j}", CONDITION) for j in range(n_cond)]
    schema.append(AttributeSchema("d", DECISION))
    sizes = [rng.randint(1, max_values) for _ in range(n_cond + 1)]
    rows = []
    for _ in range(n_rows):
        row = [None if rng.random() < missing else str(rng.randrange(k)) for k in sizes[:-1]]
        row.append(str(rng.randrange(sizes[-1])))
        rows.append(row)
    return DecisionTable(schema, rows)


@st.composite
def tables(draw, max_rows=8, max_attrs=4, max_values=3, allow_missing=True):
    n_rows = draw(st.integers(1, max_rows))
    n_cond = draw(st.integers(1, max_attrs - 1))
    cell = st.sampled_from([str(v) for v in range(max_values)])
    cond = st.one_of(cell, st.none()) if allow_missing else cell
    rows = [
        draw(st.lists(cond, min_size=n_cond, max_size=n_cond)) + [draw(cell)]
        for _ in range(n_rows)
    ]
    schema = [AttributeSchema(f"a{j}", CONDITION) for j in range(n_cond)]
    schema.append(AttributeSchema("d", DECISION))
    return DecisionTable(schema, rows)


# acceptance criteria summary: one line per criterion after the run
_CRITERIA: dict[str, str] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    name = marker.args[0]
    ok = call.excinfo is None
    if _CRITERIA.get(name) != "FAIL":
        _CRITERIA[name] = "PASS" if ok else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
