"""Causes, contingency families, responsibility, and the decision problems."""

from fractions import Fraction

import pytest

from oracles import (
    SubsetOracle,
    oracle_actual_causes,
    oracle_contingencies,
    oracle_counterfactual_causes,
    oracle_responsibility,
)

from querycause.causality import (
    actual_causes,
    causality_report,
    counterfactual_causes,
    decide_cdp,
    decide_cfdp,
    decide_rdp,
    minimal_contingencies,
    responsibility,
)
from querycause.datalog import parse_program
from querycause.errors import (
    ExogenousTupleError,
    NonBooleanProgramError,
    NotAnAnswerError,
    UnknownTupleIdError,
)
from querycause.relational import parse_instance


def test_path_answer_causes(path_example):
    program, instance, answer = path_example
    assert actual_causes(program, instance, answer) == frozenset(
        {"t1", "t2", "t4", "t5", "t6", "t7"}
    )
    assert counterfactual_causes(program, instance, answer) == frozenset({"t2"})


def test_path_answer_contingencies(path_example):
    program, instance, answer = path_example
    fam = minimal_contingencies(program, instance, answer, "t5")
    assert fam.sets == (frozenset({"t4", "t6"}), frozenset({"t6", "t7"}))
    assert fam.is_cause and not fam.is_counterfactual
    counter = minimal_contingencies(program, instance, answer, "t2")
    assert counter.sets == (frozenset(),)
    assert counter.is_counterfactual


def test_path_answer_responsibilities(path_example):
    program, instance, answer = path_example
    assert responsibility(program, instance, answer, "t2") == Fraction(1)
    assert responsibility(program, instance, answer, "t1") == Fraction(1, 3)
    assert responsibility(program, instance, answer, "t3") == Fraction(0)


def test_report_collects_only_causes(path_example):
    program, instance, answer = path_example
    report = causality_report(program, instance, answer)
    assert report.causes() == frozenset({"t1", "t2", "t4", "t5", "t6", "t7"})
    assert "t3" not in report.entries
    assert report.entries["t2"].counterfactual
    assert report.entries["t6"].contingencies.smallest_size == 2


def test_exogenous_tuples_are_never_causes():
    program = parse_program("ans <- R(x,y), S(y).\n")
    instance = parse_instance("R(a,b)!\nS(b).\n")
    assert actual_causes(program, instance, ()) == frozenset({"t2"})
    with pytest.raises(ExogenousTupleError):
        minimal_contingencies(program, instance, (), "t1")


def test_unknown_tuple_id_is_rejected(path_example):
    program, instance, answer = path_example
    with pytest.raises(UnknownTupleIdError):
        responsibility(program, instance, answer, "t99")


def test_non_answers_are_rejected(path_example):
    program, instance, _ = path_example
    with pytest.raises(NotAnAnswerError):
        actual_causes(program, instance, ("e", "c"))


def test_cause_with_contingency_only():
    # deleting t1 alone leaves the second support alive
    program = parse_program("ans <- R(x,y).\n")
    instance = parse_instance("R(a,b).\nR(c,d).\n")
    assert counterfactual_causes(program, instance, ()) == frozenset()
    assert actual_causes(program, instance, ()) == frozenset({"t1", "t2"})
    fam = minimal_contingencies(program, instance, (), "t1")
    assert fam.sets == (frozenset({"t2"}),)
    assert responsibility(program, instance, (), "t1") == Fraction(1, 2)


def test_decision_problems_on_boolean_query():
    program = parse_program("ans <- R(x,y), S(y).\n")
    instance = parse_instance("R(a,b).\nS(b).\nS(q) @id=t9.\n")
    assert decide_cdp(program, instance, "t1")
    assert decide_cfdp(program, instance, "t1")
    assert decide_rdp(program, instance, "t1", Fraction(1, 2))
    assert not decide_rdp(program, instance, "t1", 1)
    assert not decide_cdp(program, instance, "t9")
    assert not decide_rdp(program, instance, "t9", 0)


def test_decision_problems_need_boolean_programs(path_example):
    program, instance, _ = path_example
    with pytest.raises(NonBooleanProgramError):
        decide_cdp(program, instance, "t1")


def test_causes_match_enumeration(general_cases):
    for case in general_cases[:60]:
        orc = SubsetOracle(case.program, case.instance)
        assert actual_causes(case.program, case.instance, case.answer) == \
            oracle_actual_causes(orc, case.answer)
        assert counterfactual_causes(case.program, case.instance, case.answer) == \
            oracle_counterfactual_causes(orc, case.answer)


def test_contingencies_match_enumeration(mixed_general_cases):
    for case in mixed_general_cases[:40]:
        orc = SubsetOracle(case.program, case.instance)
        for tau in sorted(case.instance.endogenous_ids()):
            fam = minimal_contingencies(case.program, case.instance, case.answer, tau)
            assert fam.sets == oracle_contingencies(orc, case.answer, tau)
            assert responsibility(case.program, case.instance, case.answer, tau) == \
                oracle_responsibility(orc, case.answer, tau)


def test_responsibility_is_one_over_one_plus_smallest(general_cases):
    for case in general_cases[:40]:
        for tau in sorted(case.instance.endogenous_ids()):
            fam = minimal_contingencies(case.program, case.instance, case.answer, tau)
            rho = responsibility(case.program, case.instance, case.answer, tau)
            if fam.sets:
                assert rho == Fraction(1, 1 + min(len(g) for g in fam.sets))
            else:
                assert rho == Fraction(0)


def test_counterfactual_causes_are_actual_causes(general_cases):
    for case in general_cases[:60]:
        cf = counterfactual_causes(case.program, case.instance, case.answer)
        assert cf <= actual_causes(case.program, case.instance, case.answer)
