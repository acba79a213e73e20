"""Source deletions that retract an answer, with and without side effects."""

import pytest

from oracles import (
    SubsetOracle,
    oracle_decide_vsefp,
    oracle_min_source,
    oracle_side_effect_free_all,
)

from querycause.causality import actual_causes, minimal_contingencies
from querycause.datalog import parse_program
from querycause.delete_propagation import (
    decide_vsefp,
    min_source_side_effect,
    view_side_effect_free,
    view_side_effect_free_all,
)
from querycause.errors import NotAnAnswerError
from querycause.families import minimize_family
from querycause.relational import parse_instance
from querycause.view_conditioned import vc_cause_exists


def test_path_minimal_deletions(path_example):
    program, instance, answer = path_example
    assert min_source_side_effect(program, instance, answer) == (
        frozenset({"t2"}),
        frozenset({"t1", "t4", "t6"}),
        frozenset({"t1", "t6", "t7"}),
        frozenset({"t4", "t5", "t6"}),
        frozenset({"t5", "t6", "t7"}),
    )


def test_path_has_no_side_effect_free_deletion(path_example):
    # every cut that separates c from e also breaks some other reachability pair
    program, instance, answer = path_example
    assert view_side_effect_free_all(program, instance, answer) == ()
    assert view_side_effect_free(program, instance, answer) is None
    assert not decide_vsefp(program, instance, answer)


def test_university_deletions(university_example):
    program, instance, answer, _ = university_example
    expected = (frozenset({"t1"}), frozenset({"t4", "t8"}))
    assert min_source_side_effect(program, instance, answer) == expected
    assert view_side_effect_free_all(program, instance, answer) == expected
    assert view_side_effect_free(program, instance, answer) == frozenset({"t1"})
    assert decide_vsefp(program, instance, answer)


def test_smallest_deletion_breaks_ties_by_id():
    program = parse_program("ans <- R(x), S(x).\n")
    instance = parse_instance("R(a).\nS(a).\n")
    assert view_side_effect_free_all(program, instance, ()) == (
        frozenset({"t1"}),
        frozenset({"t2"}),
    )
    assert view_side_effect_free(program, instance, ()) == frozenset({"t1"})


def test_endogenous_only_restricts_the_ground_set():
    program = parse_program("ans <- R(x,y), S(y).\n")
    instance = parse_instance("R(a,b)!\nS(b).\n")
    assert min_source_side_effect(program, instance, ()) == (
        frozenset({"t1"}),
        frozenset({"t2"}),
    )
    assert min_source_side_effect(program, instance, (), endogenous_only=True) == (
        frozenset({"t2"}),
    )


def test_non_answers_are_rejected(university_example):
    program, instance, _, _ = university_example
    with pytest.raises(NotAnAnswerError):
        min_source_side_effect(program, instance, ("Eli",))


def test_deletions_match_enumeration(general_cases):
    for case in general_cases[:50]:
        orc = SubsetOracle(case.program, case.instance)
        for endo_only in (False, True):
            assert min_source_side_effect(
                case.program, case.instance, case.answer, endo_only
            ) == oracle_min_source(orc, case.answer, endo_only)
            assert view_side_effect_free_all(
                case.program, case.instance, case.answer, endo_only
            ) == oracle_side_effect_free_all(orc, case.answer, endo_only)


def test_decision_matches_enumeration(mixed_general_cases):
    for case in mixed_general_cases[:40]:
        orc = SubsetOracle(case.program, case.instance)
        assert decide_vsefp(case.program, case.instance, case.answer, True) == \
            oracle_decide_vsefp(orc, case.answer, True)


def test_deletions_are_cause_contingencies_in_disguise(general_cases):
    # over the endogenous part, the minimal answer-killing deletions are the
    # minimized sets tau + contingency taken over every actual cause tau
    for case in general_cases[:40]:
        rebuilt = []
        for tau in actual_causes(case.program, case.instance, case.answer):
            fam = minimal_contingencies(case.program, case.instance, case.answer, tau)
            rebuilt.extend(gamma | {tau} for gamma in fam.sets)
        assert set(minimize_family(rebuilt)) == set(
            min_source_side_effect(
                case.program, case.instance, case.answer, endogenous_only=True
            )
        )


def test_side_effect_freedom_matches_view_conditioned_existence(mixed_general_cases):
    for case in mixed_general_cases[:40]:
        assert decide_vsefp(
            case.program, case.instance, case.answer, endogenous_only=True
        ) == vc_cause_exists(case.program, case.instance, case.answer)
