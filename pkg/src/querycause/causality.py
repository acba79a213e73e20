"""Causes, contingency sets, and responsibility for query answers.

An endogenous tuple is a counterfactual cause for an answer when deleting it
alone retracts the answer.  It is an actual cause when some set of other
endogenous deletions (a contingency set) brings it to that tipping point.
Responsibility is 1/(1+k) where k is the size of a smallest contingency set,
and 0 for tuples that are not causes; values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .datalog import Program, evaluate, holds, minimal_supports
from .errors import (
    ExogenousTupleError,
    NonBooleanProgramError,
    NotAnAnswerError,
    UnknownTupleIdError,
)
from .families import canonical_family, minimal_hitting_sets, minimize_family
from .relational import Instance, TupleId, id_sort_key, remove


@dataclass(frozen=True)
class ContingencyFamily:
    """All minimal contingency sets turning one tuple counterfactual."""

    cause: TupleId
    sets: tuple

    @property
    def is_cause(self) -> bool:
        return bool(self.sets)

    @property
    def is_counterfactual(self) -> bool:
        return frozenset() in self.sets

    @property
    def smallest_size(self) -> int | None:
        if not self.sets:
            return None
        return min(len(s) for s in self.sets)

    @property
    def responsibility(self) -> Fraction:
        size = self.smallest_size
        if size is None:
            return Fraction(0)
        return Fraction(1, 1 + size)


@dataclass(frozen=True)
class CauseEntry:
    counterfactual: bool
    contingencies: ContingencyFamily
    responsibility: Fraction


@dataclass(frozen=True)
class CausalityReport:
    """Per-cause summary for one answer: flags, families, responsibilities."""

    answer: tuple
    entries: Mapping[TupleId, CauseEntry]

    def causes(self) -> frozenset[TupleId]:
        return frozenset(self.entries)


def _require_answer(program: Program, instance: Instance, answer: Sequence[str]) -> tuple:
    answer = tuple(answer)
    if not holds(program, instance, answer):
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    return answer


def counterfactual_causes(
    program: Program, instance: Instance, answer: Sequence[str]
) -> frozenset[TupleId]:
    """Endogenous tuples whose sole deletion retracts the answer."""
    answer = _require_answer(program, instance, answer)
    return frozenset(
        tid
        for tid in instance.endogenous_ids()
        if not holds(program, remove(instance, (tid,)), answer)
    )


def actual_causes(
    program: Program, instance: Instance, answer: Sequence[str]
) -> frozenset[TupleId]:
    """Endogenous tuples that some contingency set turns counterfactual.

    Computed from the minimal supports of the answer: project each support
    onto the endogenous part, keep the subset-minimal projections, and take
    their union.
    """
    answer = tuple(answer)
    supports = minimal_supports(program, instance, answer)
    endo = instance.endogenous_ids()
    projected = minimize_family([s & endo for s in supports], key=id_sort_key)
    out: set[TupleId] = set()
    for p in projected:
        out.update(p)
    return frozenset(out)


def _contingencies_from_supports(
    program: Program,
    instance: Instance,
    answer: tuple,
    tau: TupleId,
    supports: Sequence[frozenset],
) -> ContingencyFamily:
    endo = instance.endogenous_ids()
    keeping = [s for s in supports if tau in s]
    avoiding = [s for s in supports if tau not in s]
    if not keeping:
        return ContingencyFamily(tau, ())
    ground = endo - {tau}
    candidates = minimal_hitting_sets(avoiding, ground, key=id_sort_key)
    picked = [g for g in candidates if any(not (s & g) for s in keeping)]
    confirmed = [
        g for g in picked if _confirm_minimal_witness(program, instance, answer, tau, g)
    ]
    return ContingencyFamily(tau, canonical_family(confirmed, key=id_sort_key))


def _confirm_minimal_witness(
    program: Program,
    instance: Instance,
    answer: tuple,
    tau: TupleId,
    gamma: frozenset,
) -> bool:
    if not holds(program, remove(instance, gamma), answer):
        return False
    if holds(program, remove(instance, gamma | {tau}), answer):
        return False
    for f in gamma:
        if not holds(program, remove(instance, (gamma - {f}) | {tau}), answer):
            return False
    return True


def _checked_tau(instance: Instance, tau: TupleId) -> TupleId:
    fact = instance.fact(tau)
    if not fact.endogenous:
        raise ExogenousTupleError(f"tuple {tau} is exogenous and cannot be a cause")
    return tau


def minimal_contingencies(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
) -> ContingencyFamily:
    """Every minimal contingency set for the given tuple and answer.

    A contingency set leaves the answer derivable, kills it together with
    the tuple, and is minimal in the sense that removing any of its members
    (while still deleting the tuple) restores the answer.
    """
    answer = tuple(answer)
    _checked_tau(instance, tau)
    supports = minimal_supports(program, instance, answer)
    return _contingencies_from_supports(program, instance, answer, tau, supports)


def responsibility(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
) -> Fraction:
    """1/(1+k) for the smallest contingency set, 0 for non-causes."""
    return minimal_contingencies(program, instance, answer, tau).responsibility


def causality_report(
    program: Program, instance: Instance, answer: Sequence[str]
) -> CausalityReport:
    """Contingency families and responsibilities for every actual cause."""
    answer = tuple(answer)
    supports = minimal_supports(program, instance, answer)
    entries: dict[TupleId, CauseEntry] = {}
    for tid in sorted(instance.endogenous_ids(), key=id_sort_key):
        family = _contingencies_from_supports(program, instance, answer, tid, supports)
        if not family.is_cause:
            continue
        entries[tid] = CauseEntry(
            counterfactual=family.is_counterfactual,
            contingencies=family,
            responsibility=family.responsibility,
        )
    return CausalityReport(answer, entries)


def _boolean_guard(program: Program, instance: Instance) -> None:
    if not program.is_boolean:
        raise NonBooleanProgramError(
            "decision procedures take a Boolean program; specialize the answer first"
        )
    if not holds(program, instance, ()):
        raise NotAnAnswerError("the Boolean query does not hold on this instance")


def decide_cdp(program: Program, instance: Instance, tau: TupleId) -> bool:
    """Whether the tuple is an actual cause for the Boolean query."""
    _boolean_guard(program, instance)
    fact = instance.fact(tau)
    if not fact.endogenous:
        return False
    return tau in actual_causes(program, instance, ())


def decide_rdp(program: Program, instance: Instance, tau: TupleId, v) -> bool:
    """Whether the tuple's responsibility strictly exceeds the threshold."""
    _boolean_guard(program, instance)
    threshold = Fraction(v)
    fact = instance.fact(tau)
    if not fact.endogenous:
        return Fraction(0) > threshold
    return responsibility(program, instance, (), tau) > threshold


def decide_cfdp(program: Program, instance: Instance, tau: TupleId) -> bool:
    """Whether the tuple is a counterfactual cause (responsibility 1)."""
    _boolean_guard(program, instance)
    fact = instance.fact(tau)
    if not fact.endogenous:
        return False
    return not holds(program, remove(instance, (tau,)), ())
