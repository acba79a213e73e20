"""Delete propagation: source deletions that retract one query answer.

Two flavours are computed.  The source-minimal problem asks for all
subset-minimal sets of facts whose deletion retracts the designated answer,
whatever happens to the rest of the view.  The side-effect-free problem asks
for a deletion that retracts the designated answer and nothing else; here
the smallest such set is returned.

Deletions range over the whole instance by default; pass
``endogenous_only=True`` to restrict them to the endogenous part.
"""

from __future__ import annotations

from typing import Sequence

from .datalog import Program, evaluate, minimal_supports, minimal_supports_by_answer
from .errors import NotAnAnswerError
from .families import minimal_hitting_sets
from .relational import Instance, TupleId, id_sort_key


def _ground(instance: Instance, endogenous_only: bool) -> frozenset[TupleId]:
    if endogenous_only:
        return instance.endogenous_ids()
    return instance.ids()


def min_source_side_effect(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    endogenous_only: bool = False,
) -> tuple:
    """All subset-minimal deletion sets that retract the answer.

    These are exactly the minimal hitting sets of the answer's minimal
    supports: a deletion retracts the answer iff it meets every support.
    """
    answer = tuple(answer)
    supports = minimal_supports(program, instance, answer)
    return minimal_hitting_sets(supports, _ground(instance, endogenous_only), key=id_sort_key)


def _side_effect_free_family(
    program: Program,
    instance: Instance,
    answer: tuple,
    endogenous_only: bool,
) -> tuple:
    full = evaluate(program, instance)
    if answer not in full:
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    rest = sorted(full - {answer})
    supports = minimal_supports_by_answer(program, instance, [answer] + rest)
    ground = _ground(instance, endogenous_only)
    out = []
    for lam in minimal_hitting_sets(supports[answer], ground, key=id_sort_key):
        if all(any(not (s & lam) for s in supports[other]) for other in rest):
            out.append(lam)
    return tuple(out)


def view_side_effect_free_all(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    endogenous_only: bool = False,
) -> tuple:
    """All subset-minimal deletions retracting the answer and nothing else."""
    return _side_effect_free_family(program, instance, tuple(answer), endogenous_only)


def view_side_effect_free(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    endogenous_only: bool = False,
) -> frozenset[TupleId] | None:
    """A smallest deletion set retracting the answer and nothing else.

    Returns None when every deletion that kills the answer also kills some
    other answer.  Ties on cardinality break lexicographically on the sorted
    tuple ids, so the result is deterministic.
    """
    family = _side_effect_free_family(program, instance, tuple(answer), endogenous_only)
    if not family:
        return None
    return min(family, key=lambda s: (len(s), tuple(sorted(s, key=id_sort_key))))


def decide_vsefp(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    endogenous_only: bool = False,
) -> bool:
    """Whether some sub-instance yields exactly the answers minus this one."""
    return bool(_side_effect_free_family(program, instance, tuple(answer), endogenous_only))
