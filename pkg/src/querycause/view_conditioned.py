"""View-conditioned causality: causes that leave every other answer intact.

Here a deletion only counts when it retracts the designated answer while the
rest of the query result (the view condition) survives unchanged.  The
contingency set must keep the answer derivable, and deleting the candidate
tuple on top of it must produce exactly the original answers minus the
designated one.

With ``strict=True`` the contingency set itself must additionally leave the
whole view intact before the candidate is deleted.  For monotone queries
this follows from the loose conditions anyway, so both modes agree; the flag
exists to make that check explicit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .datalog import (
    Program,
    RemovalAnswerCache,
    evaluate,
    minimal_supports_by_answer,
)
from .errors import ExogenousTupleError, NotAnAnswerError
from .relational import Instance, TupleId, id_sort_key
from .families import minimal_hitting_sets


def view_condition(
    program: Program, instance: Instance, answer: Sequence[str]
) -> frozenset:
    """The rest of the query result: every answer except the designated one."""
    answer = tuple(answer)
    full = evaluate(program, instance)
    if answer not in full:
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    return frozenset(full - {answer})


def vcc_causes(
    program: Program, instance: Instance, answer: Sequence[str]
) -> frozenset[TupleId]:
    """Tuples whose sole deletion yields exactly the view condition."""
    answer = tuple(answer)
    rest = view_condition(program, instance, answer)
    cache = RemovalAnswerCache(program, instance)
    return frozenset(
        tid for tid in instance.endogenous_ids() if cache.answers({tid}) == rest
    )


def _witness_sizes(
    program: Program,
    instance: Instance,
    answer: tuple,
    strict: bool,
) -> dict:
    """Smallest contingency size per view-conditioned cause.

    Any working deletion set shrinks to a minimal hitting set of the
    answer's supports that still contains the candidate tuple, so the search
    runs over those hitting sets: the candidate must be the only deleted
    member of some support (the answer was still derivable before its turn),
    and every other answer must keep one support untouched.
    """
    full = evaluate(program, instance)
    if answer not in full:
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    rest = sorted(full - {answer})
    supports = minimal_supports_by_answer(program, instance, [answer] + rest)
    answer_supports = supports[answer]
    endo = instance.endogenous_ids()
    cache = RemovalAnswerCache(program, instance) if strict else None

    best: dict[TupleId, int] = {}
    for lam in minimal_hitting_sets(answer_supports, endo, key=id_sort_key):
        if not all(
            any(not (s & lam) for s in supports[other]) for other in rest
        ):
            continue
        for tau in lam:
            if not any(s & lam == {tau} for s in answer_supports):
                continue
            if cache is not None and cache.answers(lam - {tau}) != full:
                continue
            size = len(lam) - 1
            if size < best.get(tau, size + 1):
                best[tau] = size
    return best


def vc_causes(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    strict: bool = False,
) -> frozenset[TupleId]:
    """Tuples some contingency set turns into a view-conditioned cause."""
    return frozenset(_witness_sizes(program, instance, tuple(answer), strict))


def vc_responsibility(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
    strict: bool = False,
) -> Fraction:
    """1/(1+k) for the smallest view-conditioned contingency set, else 0."""
    fact = instance.fact(tau)
    if not fact.endogenous:
        raise ExogenousTupleError(f"tuple {tau} is exogenous and cannot be a cause")
    sizes = _witness_sizes(program, instance, tuple(answer), strict)
    if tau not in sizes:
        return Fraction(0)
    return Fraction(1, 1 + sizes[tau])


def vc_cause_exists(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    strict: bool = False,
) -> bool:
    """Whether the answer has any view-conditioned cause at all."""
    return bool(_witness_sizes(program, instance, tuple(answer), strict))


def decide_vcdp(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
    strict: bool = False,
) -> bool:
    """Whether the tuple is a view-conditioned cause for the answer."""
    fact = instance.fact(tau)
    sizes = _witness_sizes(program, instance, tuple(answer), strict)
    return fact.endogenous and tau in sizes


def decide_vrdp(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
    v,
    strict: bool = False,
) -> bool:
    """Whether the tuple's view-conditioned responsibility exceeds v."""
    threshold = Fraction(v)
    fact = instance.fact(tau)
    if not fact.endogenous:
        return Fraction(0) > threshold
    sizes = _witness_sizes(program, instance, tuple(answer), strict)
    rho = Fraction(1, 1 + sizes[tau]) if tau in sizes else Fraction(0)
    return rho > threshold
