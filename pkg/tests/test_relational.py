"""Schema, fact, and instance behaviour, including the instance file format."""

import pytest

from querycause.errors import (
    ArityMismatchError,
    ParseError,
    UnknownPredicateError,
    UnknownTupleIdError,
)
from querycause.relational import (
    Fact,
    Instance,
    Schema,
    id_sort_key,
    make_instance,
    parse_instance,
    remove,
    sorted_ids,
)


def test_schema_basics():
    schema = Schema.of({"R": 2, "S": 1})
    assert schema.declares("R")
    assert not schema.declares("T")
    assert schema.arity("R") == 2
    assert set(schema.names()) == {"R", "S"}


def test_schema_rejects_zero_arity():
    with pytest.raises(Exception):
        Schema.of({"P": 0})


def test_schema_extension():
    schema = Schema.of({"R": 2})
    wider = schema.with_predicate("V", 1)
    assert wider.declares("V") and wider.declares("R")
    assert not schema.declares("V")


def test_make_instance_assigns_sequential_ids():
    schema = Schema.of({"R": 2, "S": 1})
    inst = make_instance(schema, [("R", ("a", "b")), ("S", ("c",)), ("R", ("b", "c"))])
    assert sorted_ids(inst.ids()) == ("t1", "t2", "t3")
    assert inst.fact("t2").predicate == "S"
    assert all(inst.fact(t).endogenous for t in inst.ids())


def test_make_instance_endogenous_flag_and_dedup():
    schema = Schema.of({"R": 2})
    inst = make_instance(
        schema,
        [("R", ("a", "b"), False), ("R", ("a", "b"), True), ("R", ("b", "a"))],
    )
    # the duplicate fact collapses onto its first occurrence
    assert len(inst.facts) == 2
    assert not inst.fact("t1").endogenous
    assert inst.endogenous_ids() == frozenset({"t2"})
    assert inst.exogenous_ids() == frozenset({"t1"})


def test_make_instance_validates_against_schema():
    schema = Schema.of({"R": 2})
    with pytest.raises(UnknownPredicateError):
        make_instance(schema, [("Q", ("a",))])
    with pytest.raises(ArityMismatchError):
        make_instance(schema, [("R", ("a",))])


def test_instance_rejects_duplicate_ids():
    schema = Schema.of({"R": 2})
    facts = (Fact("R", ("a", "b"), "t1"), Fact("R", ("b", "c"), "t1"))
    with pytest.raises(ValueError):
        Instance(schema, facts)


def test_remove_and_keep():
    schema = Schema.of({"R": 2})
    inst = make_instance(schema, [("R", ("a", "b")), ("R", ("b", "c")), ("R", ("c", "d"))])
    smaller = remove(inst, {"t2"})
    assert sorted_ids(smaller.ids()) == ("t1", "t3")
    kept = inst.keep({"t1"})
    assert sorted_ids(kept.ids()) == ("t1",)
    with pytest.raises(UnknownTupleIdError):
        inst.fact("t9")


def test_id_sort_key_orders_numerically_within_length():
    ids = ["t10", "t2", "t1", "s3"]
    assert sorted(ids, key=id_sort_key) == ["s3", "t1", "t2", "t10"]


def test_parse_instance_plain_facts():
    inst = parse_instance("E(a,b).\nE(b,c).\n")
    assert sorted_ids(inst.ids()) == ("t1", "t2")
    assert inst.fact("t1").args == ("a", "b")
    assert inst.schema.arity("E") == 2


def test_parse_instance_exogenous_markers():
    text = """
    E(a,b).
    E(b,c)!
    E(c,d) @exo.
    """
    inst = parse_instance(text)
    assert inst.endogenous_ids() == frozenset({"t1"})
    assert inst.exogenous_ids() == frozenset({"t2", "t3"})


def test_parse_instance_explicit_ids_and_comments():
    text = """
    # graph edges
    E(a,b) @id=t5.   # pinned id
    E(b,c).
    """
    inst = parse_instance(text)
    assert inst.fact("t5").args == ("a", "b")
    # the implicit counter skips the taken id
    assert sorted_ids(inst.ids()) == ("t1", "t5")
    assert inst.fact("t1").args == ("b", "c")


def test_parse_instance_quoted_constants():
    inst = parse_instance('E("a b", "c#d").\n')
    assert inst.fact("t1").args == ("a b", "c#d")


def test_parse_instance_duplicate_facts_collapse():
    inst = parse_instance("E(a,b).\nE(a,b)!\n")
    assert len(inst.facts) == 1
    assert inst.fact("t1").endogenous


def test_parse_instance_errors():
    with pytest.raises(ParseError):
        parse_instance("E(a,b)\n")  # missing terminator
    with pytest.raises(ParseError):
        parse_instance("E(a,b) @id=t1.\nE(b,c) @id=t1.\n")
    with pytest.raises(ArityMismatchError):
        parse_instance("E(a,b).\nE(c).\n")


def test_parse_instance_against_declared_schema():
    schema = Schema.of({"E": 2})
    inst = parse_instance("E(a,b).\n", schema)
    assert inst.schema.declares("E")
    with pytest.raises(UnknownPredicateError):
        parse_instance("F(a).\n", schema)


def test_constants_collects_argument_values():
    inst = parse_instance("E(a,b).\nE(b,c).\n")
    assert inst.constants() == frozenset({"a", "b", "c"})


def test_fact_rendering():
    assert str(Fact("R", ("a", "b"), "t1")) == "R(a,b)"
