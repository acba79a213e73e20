"""Abductive diagnosis over Datalog programs, and its causal reading.

An abduction problem couples a program with a fixed extensional database, a
finite set of hypothesis facts, and an observation (a conjunction of ground
atoms).  A diagnosis is a subset-minimal set of hypotheses that, added to
the database, makes the program entail the observation.  Relevant hypotheses
occur in some diagnosis, necessary ones in all.

Reading a query answer as the observation, the exogenous part of an
instance as the database, and the endogenous part as the hypotheses turns
cause finding into diagnosis: the necessary hypotheses are the
counterfactual causes and the relevant ones the actual causes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .datalog import NEQ, Atom, Program, entails_atoms, holds
from .errors import (
    NoDiagnosisError,
    NonBooleanProgramError,
    NotAnAnswerError,
    SchemaMismatchError,
)
from .relational import Fact, Instance, Schema, TupleId

Diagnosis = frozenset  # frozenset[Fact]


@dataclass(frozen=True)
class AbductionProblem:
    program: Program
    extensional: frozenset
    hypotheses: frozenset
    observation: tuple

    def __post_init__(self) -> None:
        overlap = {f.key for f in self.extensional} & {f.key for f in self.hypotheses}
        if overlap:
            pred, args = sorted(overlap)[0]
            raise ValueError(
                f"hypotheses and extensional database overlap on {pred}({','.join(args)})"
            )
        for atom in self.observation:
            if atom.is_builtin:
                raise ValueError("observations are conjunctions of relational atoms")


def _fact_key(fact: Fact) -> tuple:
    return (fact.predicate, fact.args)


def _combined_instance(ap: AbductionProblem) -> tuple[Instance, dict]:
    """One instance holding E and Hyp under fresh ids, plus the id->fact map."""
    program_arities = {
        pred: arity
        for pred, arity in ap.program.predicate_arities().items()
        if pred != NEQ
    }
    # the schema covers stored facts only; program arities just cross-check
    arities: dict[str, int] = {}
    all_facts = sorted(ap.extensional, key=_fact_key) + sorted(ap.hypotheses, key=_fact_key)
    for f in all_facts:
        known = program_arities.get(f.predicate, len(f.args))
        known = arities.setdefault(f.predicate, known)
        if known != len(f.args):
            raise SchemaMismatchError(
                f"predicate {f.predicate} used with arity {len(f.args)} and {known}"
            )
    for atom in ap.observation:
        known = program_arities.get(atom.predicate, arities.get(atom.predicate))
        if known is not None and known != len(atom.terms):
            raise SchemaMismatchError(
                f"observation atom {atom} has arity {len(atom.terms)}, expected {known}"
            )
    schema = Schema.of(arities)
    renamed: list[Fact] = []
    back: dict[TupleId, Fact] = {}
    for i, f in enumerate(all_facts, start=1):
        nid = f"a{i}"
        renamed.append(Fact(f.predicate, f.args, nid, f.endogenous))
        back[nid] = f
    return Instance(schema, tuple(renamed)), back


def solve(ap: AbductionProblem) -> tuple:
    """All diagnoses, ordered by size then by their facts.

    Enumerates hypothesis subsets by increasing cardinality, skipping
    supersets of diagnoses already found; the observation is rechecked on
    the extensional database plus the candidate subset each time.  The
    result is empty iff even the full hypothesis set fails to entail the
    observation, and is ``(frozenset(),)`` when the database alone entails it.
    """
    combined, back = _combined_instance(ap)
    base_ids = [tid for tid in back if back[tid] in ap.extensional]
    hyp_ids = sorted(tid for tid in back if back[tid] in ap.hypotheses)

    read = set(ap.program.extensional) | {a.predicate for a in ap.observation}
    usable = [tid for tid in hyp_ids if combined.fact(tid).predicate in read]

    def entailed(delta_ids: Iterable[TupleId]) -> bool:
        kept = combined.keep(list(base_ids) + list(delta_ids))
        return entails_atoms(ap.program, kept, ap.observation)

    found: list[frozenset] = []
    for k in range(0, len(usable) + 1):
        for combo in combinations(usable, k):
            delta = frozenset(combo)
            if any(prev <= delta for prev in found):
                continue
            if entailed(delta):
                found.append(delta)
    diagnoses = [frozenset(back[tid] for tid in delta) for delta in found]
    diagnoses.sort(key=lambda d: (len(d), sorted(f.key for f in d)))
    return tuple(diagnoses)


def relevant(ap: AbductionProblem) -> frozenset:
    """Hypotheses occurring in at least one diagnosis."""
    out: set[Fact] = set()
    for d in solve(ap):
        out.update(d)
    return frozenset(out)


def necessary(ap: AbductionProblem) -> frozenset:
    """Hypotheses occurring in every diagnosis; undefined without diagnoses."""
    sol = solve(ap)
    if not sol:
        raise NoDiagnosisError("the observation is not entailed even with all hypotheses")
    out = set(sol[0])
    for d in sol[1:]:
        out &= d
    return frozenset(out)


def causal_abduction_problem(program: Program, instance: Instance) -> AbductionProblem:
    """The diagnosis problem whose solutions mirror causes for ``ans``."""
    if not program.is_boolean:
        raise NonBooleanProgramError(
            "the causal abduction problem takes a Boolean program; specialize the answer first"
        )
    if not holds(program, instance, ()):
        raise NotAnAnswerError("the Boolean query does not hold on this instance")
    exo = frozenset(f for f in instance.facts if not f.endogenous)
    endo = frozenset(f for f in instance.facts if f.endogenous)
    return AbductionProblem(program, exo, endo, (Atom(program.answer_predicate, ()),))


def causes_via_abduction(
    program: Program, instance: Instance
) -> tuple[frozenset[TupleId], frozenset[TupleId]]:
    """(actual causes, counterfactual causes) of ``ans`` read off diagnoses."""
    ap = causal_abduction_problem(program, instance)
    sol = solve(ap)
    actual: set[TupleId] = set()
    for d in sol:
        actual.update(f.id for f in d)
    needed = set(f.id for f in sol[0]) if sol else set()
    for d in sol[1:]:
        needed &= {f.id for f in d}
    return frozenset(actual), frozenset(needed)
