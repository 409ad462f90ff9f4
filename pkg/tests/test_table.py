import pytest
from hypothesis import given

from conftest import O1, O2, O4, TABLE1_CSV, tables
from roughimpute.errors import (
    EmptyDomain,
    MissingColumn,
    MissingDecisionValue,
    OutOfRange,
    RowArityMismatch,
    SchemaError,
    UnknownColumn,
    ValueOutsideDeclaredDomain,
)
from roughimpute.table import (
    AttributeSchema,
    Cell,
    DecisionTable,
    cell_value,
    effective_domain,
    known_attributes,
    load_schema,
    parse_table,
)


def test_table1_shape(table1):
    assert len(table1) == 7
    assert table1.conditions == ("x1", "x2", "x3")
    assert table1.decision == "D"
    assert table1.missing_cells() == [Cell(3, "x1"), Cell(3, "x2"), Cell(6, "x3")]


def test_empty_body():
    t = parse_table("a,b,D\n", decision="D")
    assert len(t) == 0


def test_row_arity_mismatch():
    schema = [AttributeSchema(n) for n in ("x1", "x2", "x3")] + [AttributeSchema("D", "decision")]
    with pytest.raises(RowArityMismatch):
        parse_table("x1,x2,x3,D\n1,2,0.3\n", schema)


def test_missing_decision_rejected():
    with pytest.raises(MissingDecisionValue):
        parse_table("x,D\n1,?\n")


def test_unknown_and_missing_columns(table1):
    schema = table1.schema
    with pytest.raises(UnknownColumn):
        parse_table("x1,x2,x3,D,extra\n", schema)
    with pytest.raises(MissingColumn):
        parse_table("x1,x2,D\n", schema)


def test_value_outside_declared_domain(table1):
    with pytest.raises(ValueOutsideDeclaredDomain):
        parse_table("x1,x2,x3,D\n2,1,0.2,B\n", table1.schema)


def test_schema_validation():
    with pytest.raises(SchemaError):
        load_schema('[{"name": "a"}, {"name": "b"}]')
    with pytest.raises(SchemaError):
        load_schema('[{"name": "a", "kind": "decision"}, {"name": "a"}]')
    with pytest.raises(SchemaError):
        AttributeSchema("a", domain=())
    with pytest.raises(SchemaError):
        AttributeSchema("a", domain=("1", "1"))
    with pytest.raises(SchemaError):
        AttributeSchema("")


def test_header_order_wins(table1):
    text = "D,x3,x2,x1\nA,0.3,2,1\n"
    t = parse_table(text, table1.schema)
    assert t.attributes == ("D", "x3", "x2", "x1")
    assert t.to_csv() == text


def test_cells_are_trimmed_and_case_preserved():
    t = parse_table("a , D\n  Yes ,no\n ? ,no\n")
    assert t.rows == (("Yes", "no"), (None, "no"))


def test_cell_value(table1):
    assert cell_value(table1, Cell(O2, "x3")) == "0.3"
    assert cell_value(table1, Cell(O4, "x1")) is None
    with pytest.raises(OutOfRange):
        cell_value(table1, Cell(7, "x1"))


def test_effective_domain(table1):
    assert effective_domain(table1, "x1") == ("0", "1")
    assert effective_domain(table1, "x3") == ("0.2", "0.3", "0.4")
    assert effective_domain(table1, "x2") == ("1", "2", "3", "4")
    assert effective_domain(table1, "x3") is effective_domain(table1, "x3")


def test_effective_domain_natural_order():
    t = parse_table("a,D\n10,x\n9,x\nb,x\n")
    assert effective_domain(t, "a") == ("9", "10", "b")


def test_empty_domain():
    t = parse_table("a,D\n?,x\n?,y\n")
    with pytest.raises(EmptyDomain):
        effective_domain(t, "a")


def test_known_attributes(table1):
    assert known_attributes(table1, O4) == {"x3", "D"}
    assert known_attributes(table1, O1) == {"x1", "x2", "x3", "D"}
    t = parse_table("a,b,D\n?,?,y\n")
    assert known_attributes(t, 0) == {"D"}
    with pytest.raises(OutOfRange):
        known_attributes(table1, -1)


def test_round_trip_table1():
    assert parse_table(TABLE1_CSV, decision="D").to_csv() == TABLE1_CSV


@given(tables())
def test_round_trip(t):
    text = t.to_csv()
    back = parse_table(text, t.schema)
    assert back == t
    assert back.to_csv() == text


@given(tables())
def test_known_attributes_contain_decision(t):
    for r in range(len(t)):
        k = known_attributes(t, r)
        assert t.decision in k
        assert len(k) <= len(t.attributes)


def test_with_cells_leaves_original(table1):
    filled = table1.with_cells({Cell(O4, "x1"): "1"})
    assert filled.value(O4, "x1") == "1"
    assert table1.value(O4, "x1") is None
    assert isinstance(filled, DecisionTable)
