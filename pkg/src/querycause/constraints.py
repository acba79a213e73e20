"""Integrity constraints and causality in their presence.

Supported constraint kinds: inclusion dependencies between projections of
two relations, functional dependencies (keys as the special case that
determines the whole tuple), denial constraints written as a rule body that
must stay unsatisfiable, and view inclusion constraints requiring a stored
view relation to stay inside a query's result.

Under a constraint set, a contingency set must keep the instance consistent
both before and after the candidate tuple is deleted, on top of the usual
requirements on the answer.

Constraint text format, one statement per line, ``;`` terminated
(positions are 1-based)::

    IND Dep[1,2] -> Course[3,2];   # projection of Dep on (1,2) inside Course on (3,2)
    FD  Dep: 1 -> 2;               # attribute 1 determines attribute 2
    KEY Dep: 1;                    # attribute 1 determines the whole tuple
    DC  <- P(x,y), P(x,z), y != z; # this body must never match
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import re
from typing import Iterable, Sequence

from .causality import CauseEntry, CausalityReport, ContingencyFamily
from .datalog import (
    NEQ,
    Atom,
    Program,
    Rule,
    Var,
    evaluate,
    minimal_supports,
    parse_atom_conjunction,
)
from .errors import (
    ExogenousTupleError,
    InconsistentInstanceError,
    NotACQError,
    NotAKeySetError,
    NotAnAnswerError,
    ParseError,
    SchemaMismatchError,
)
from .families import canonical_family
from .relational import Fact, Instance, Schema, TupleId, id_sort_key, remove


@dataclass(frozen=True)
class InclusionDependency:
    """Projection containment: source[positions] must lie inside target[positions]."""

    source: str
    source_positions: tuple[int, ...]
    target: str
    target_positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.source_positions) != len(self.target_positions):
            raise ParseError("inclusion dependency position lists differ in length")
        if not self.source_positions:
            raise ParseError("inclusion dependency needs at least one position")
        if min(self.source_positions + self.target_positions) < 1:
            raise ParseError("constraint positions are 1-based")

    def __str__(self) -> str:
        src = ",".join(map(str, self.source_positions))
        tgt = ",".join(map(str, self.target_positions))
        return f"IND {self.source}[{src}] -> {self.target}[{tgt}]"


@dataclass(frozen=True)
class FunctionalDependency:
    """determinant -> dependent on one relation; dependent None means key."""

    predicate: str
    determinant: frozenset
    dependent: frozenset | None = None

    def __post_init__(self) -> None:
        if not self.determinant:
            raise ParseError("functional dependency needs a determinant")
        if min(self.determinant) < 1 or (self.dependent and min(self.dependent) < 1):
            raise ParseError("constraint positions are 1-based")
        if self.dependent is not None and self.determinant & self.dependent:
            raise ParseError("determinant and dependent positions overlap")

    @property
    def is_key(self) -> bool:
        return self.dependent is None

    def is_key_for(self, arity: int) -> bool:
        if self.dependent is None:
            return True
        return self.determinant | self.dependent == frozenset(range(1, arity + 1))

    def __str__(self) -> str:
        det = ",".join(map(str, sorted(self.determinant)))
        if self.dependent is None:
            return f"KEY {self.predicate}: {det}"
        dep = ",".join(map(str, sorted(self.dependent)))
        return f"FD {self.predicate}: {det} -> {dep}"


@dataclass(frozen=True)
class DenialConstraint:
    """A safe conjunction of atoms that must never be satisfiable."""

    body: tuple

    def __post_init__(self) -> None:
        # reuse rule safety validation via a throwaway propositional head
        Rule(Atom("_dc", ()), self.body)

    def __str__(self) -> str:
        return "DC <- " + ", ".join(str(a) for a in self.body)


@dataclass(frozen=True)
class ViewInclusion:
    """Every stored tuple of the view relation must be an answer of the query."""

    view_predicate: str
    query: Program

    def __str__(self) -> str:
        return f"VIEW {self.view_predicate} <= {self.query.answer_predicate}"


@dataclass(frozen=True)
class ConstraintSet:
    inds: tuple = ()
    fds: tuple = ()
    dcs: tuple = ()
    view_inclusions: tuple = ()

    @classmethod
    def empty(cls) -> "ConstraintSet":
        return cls()

    @classmethod
    def of(cls, *constraints) -> "ConstraintSet":
        inds, fds, dcs, views = [], [], [], []
        for c in constraints:
            if isinstance(c, InclusionDependency):
                inds.append(c)
            elif isinstance(c, FunctionalDependency):
                fds.append(c)
            elif isinstance(c, DenialConstraint):
                dcs.append(c)
            elif isinstance(c, ViewInclusion):
                views.append(c)
            else:
                raise TypeError(f"not a constraint: {c!r}")
        return cls(tuple(inds), tuple(fds), tuple(dcs), tuple(views))

    def __iter__(self):
        return iter(self.inds + self.fds + self.dcs + self.view_inclusions)

    @property
    def is_empty(self) -> bool:
        return not (self.inds or self.fds or self.dcs or self.view_inclusions)


_IND_RE = re.compile(
    r"IND\s+([A-Za-z_]\w*)\s*\[([\d\s,]+)\]\s*->\s*([A-Za-z_]\w*)\s*\[([\d\s,]+)\]\s*$"
)
_FD_RE = re.compile(r"FD\s+([A-Za-z_]\w*)\s*:\s*([\d\s,]+)->([\d\s,]+)$")
_KEY_RE = re.compile(r"KEY\s+([A-Za-z_]\w*)\s*:\s*([\d\s,]+)$")
_DC_RE = re.compile(r"DC\s*<-\s*(.+)$", re.DOTALL)


def _positions(raw: str, lineno: int) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in raw.split(",") if p.strip())
    except ValueError:
        raise ParseError(f"bad position list {raw!r}", lineno) from None


def parse_constraints(text: str) -> ConstraintSet:
    """Parse constraint text (grammar in the module docstring)."""
    constraints: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.endswith(";"):
            raise ParseError("constraint is missing its ';' terminator", lineno)
        line = line[:-1].strip()
        if line.startswith("IND"):
            m = _IND_RE.match(line)
            if not m:
                raise ParseError("malformed inclusion dependency", lineno)
            constraints.append(
                InclusionDependency(
                    m.group(1), _positions(m.group(2), lineno),
                    m.group(3), _positions(m.group(4), lineno),
                )
            )
        elif line.startswith("FD"):
            m = _FD_RE.match(line)
            if not m:
                raise ParseError("malformed functional dependency", lineno)
            constraints.append(
                FunctionalDependency(
                    m.group(1),
                    frozenset(_positions(m.group(2), lineno)),
                    frozenset(_positions(m.group(3), lineno)),
                )
            )
        elif line.startswith("KEY"):
            m = _KEY_RE.match(line)
            if not m:
                raise ParseError("malformed key constraint", lineno)
            constraints.append(
                FunctionalDependency(m.group(1), frozenset(_positions(m.group(2), lineno)), None)
            )
        elif line.startswith("DC"):
            m = _DC_RE.match(line)
            if not m:
                raise ParseError("malformed denial constraint", lineno)
            constraints.append(DenialConstraint(parse_atom_conjunction(m.group(1))))
        else:
            raise ParseError(f"unknown constraint kind in {line!r}", lineno)
    return ConstraintSet.of(*constraints)


# ---------------------------------------------------------------------------
# Satisfaction


def _projection_query(predicate: str, arity: int, positions: tuple[int, ...]) -> Program:
    if max(positions) > arity:
        raise SchemaMismatchError(
            f"constraint position {max(positions)} exceeds arity {arity} of {predicate}"
        )
    body_vars = tuple(Var(f"v{i}") for i in range(1, arity + 1))
    head = Atom("Ans", tuple(Var(f"v{p}") for p in positions))
    return Program((Rule(head, (Atom(predicate, body_vars),)),), "Ans")


def _ind_holds(instance: Instance, ind: InclusionDependency) -> bool:
    if not instance.schema.declares(ind.source) or not instance.tuples_of(ind.source):
        return True
    src = evaluate(_projection_query(ind.source, instance.schema.arity(ind.source), ind.source_positions), instance)
    if not instance.schema.declares(ind.target):
        return not src
    tgt = evaluate(_projection_query(ind.target, instance.schema.arity(ind.target), ind.target_positions), instance)
    return src <= tgt


def _fd_holds(instance: Instance, fd: FunctionalDependency) -> bool:
    if not instance.schema.declares(fd.predicate):
        return True
    arity = instance.schema.arity(fd.predicate)
    if max(fd.determinant) > arity or (fd.dependent and max(fd.dependent) > arity):
        raise SchemaMismatchError(
            f"constraint position exceeds arity {arity} of {fd.predicate}"
        )
    dependent = fd.dependent
    if dependent is None:
        dependent = frozenset(range(1, arity + 1)) - fd.determinant
    det = sorted(fd.determinant)
    dep = sorted(dependent)
    seen: dict[tuple, tuple] = {}
    for tup in instance.tuples_of(fd.predicate):
        left = tuple(tup[p - 1] for p in det)
        right = tuple(tup[p - 1] for p in dep)
        if seen.setdefault(left, right) != right:
            return False
    return True


def _dc_holds(instance: Instance, dc: DenialConstraint) -> bool:
    program = Program((Rule(Atom("_dc", ()), dc.body),), "_dc")
    return not evaluate(program, instance)


def _view_holds(instance: Instance, vi: ViewInclusion) -> bool:
    if not instance.schema.declares(vi.view_predicate):
        return True
    stored = instance.tuples_of(vi.view_predicate)
    if not stored:
        return True
    return stored <= evaluate(vi.query, instance)


def violations(instance: Instance, sigma: ConstraintSet) -> list[str]:
    """Human-readable descriptions of every violated constraint."""
    out: list[str] = []
    for ind in sigma.inds:
        if not _ind_holds(instance, ind):
            out.append(str(ind))
    for fd in sigma.fds:
        if not _fd_holds(instance, fd):
            out.append(str(fd))
    for dc in sigma.dcs:
        if not _dc_holds(instance, dc):
            out.append(str(dc))
    for vi in sigma.view_inclusions:
        if not _view_holds(instance, vi):
            out.append(str(vi))
    return out


def satisfies(instance: Instance, sigma: ConstraintSet) -> bool:
    """Whether the instance satisfies every constraint in the set."""
    return not violations(instance, sigma)


# ---------------------------------------------------------------------------
# Causes in the presence of constraints


def _ic_minimal_witnesses(
    program: Program,
    instance: Instance,
    answer: tuple,
    sigma: ConstraintSet,
) -> dict:
    """Minimal witnessing contingency sets per endogenous tuple.

    A witness for a tuple is a set of other endogenous deletions after which
    the answer still holds and the constraints are satisfied, while deleting
    the tuple on top retracts the answer and keeps the constraints
    satisfied.  Minimal means no proper subset is itself a witness.

    The answer conditions are decided combinatorially from the minimal
    supports; the constraint conditions fall back on (memoized) constraint
    checks of the corresponding sub-instances.
    """
    supports = minimal_supports(program, instance, answer)
    endo = sorted(instance.endogenous_ids(), key=id_sort_key)
    sat_memo: dict[frozenset, bool] = {}

    def consistent(removed: frozenset) -> bool:
        cached = sat_memo.get(removed)
        if cached is None:
            cached = satisfies(remove(instance, removed), sigma)
            sat_memo[removed] = cached
        return cached

    result: dict[TupleId, tuple] = {}
    for tau in endo:
        others = [tid for tid in endo if tid != tau]
        witnesses: list[frozenset] = []
        for k in range(0, len(others) + 1):
            for combo in combinations(others, k):
                gamma = frozenset(combo)
                if any(prev <= gamma for prev in witnesses):
                    continue
                if not any(not (s & gamma) for s in supports):
                    continue  # answer already gone
                hit = gamma | {tau}
                if any(not (s & hit) for s in supports):
                    continue  # answer survives the joint deletion
                if not consistent(gamma) or not consistent(hit):
                    continue
                witnesses.append(gamma)
        result[tau] = canonical_family(witnesses, key=id_sort_key)
    return result


def _require_consistent_answer(
    program: Program, instance: Instance, answer: Sequence[str], sigma: ConstraintSet
) -> tuple:
    answer = tuple(answer)
    if answer not in evaluate(program, instance):
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    bad = violations(instance, sigma)
    if bad:
        raise InconsistentInstanceError(
            "instance violates " + "; ".join(bad)
        )
    return answer


def causes_under_ics(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    sigma: ConstraintSet,
) -> frozenset[TupleId]:
    """Endogenous tuples with a constraint-respecting contingency set."""
    answer = _require_consistent_answer(program, instance, answer, sigma)
    witnesses = _ic_minimal_witnesses(program, instance, answer, sigma)
    return frozenset(tau for tau, fam in witnesses.items() if fam)


def contingencies_under_ics(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
    sigma: ConstraintSet,
) -> ContingencyFamily:
    """Minimal constraint-respecting contingency sets for one tuple."""
    answer = _require_consistent_answer(program, instance, answer, sigma)
    fact = instance.fact(tau)
    if not fact.endogenous:
        raise ExogenousTupleError(f"tuple {tau} is exogenous and cannot be a cause")
    witnesses = _ic_minimal_witnesses(program, instance, answer, sigma)
    return ContingencyFamily(tau, witnesses[tau])


def responsibility_under_ics(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    tau: TupleId,
    sigma: ConstraintSet,
) -> Fraction:
    """1/(1+k) over constraint-respecting contingency sets; 0 for non-causes."""
    return contingencies_under_ics(program, instance, answer, tau, sigma).responsibility


def ic_report(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    sigma: ConstraintSet,
) -> CausalityReport:
    """Per-cause contingency families and responsibilities under constraints."""
    answer = _require_consistent_answer(program, instance, answer, sigma)
    witnesses = _ic_minimal_witnesses(program, instance, answer, sigma)
    entries: dict[TupleId, CauseEntry] = {}
    for tau in sorted(witnesses, key=id_sort_key):
        family = ContingencyFamily(tau, witnesses[tau])
        if not family.is_cause:
            continue
        entries[tau] = CauseEntry(
            counterfactual=family.is_counterfactual,
            contingencies=family,
            responsibility=family.responsibility,
        )
    return CausalityReport(answer, entries)


# ---------------------------------------------------------------------------
# Reductions and shape checks


def _require_cq(program: Program) -> Rule:
    if len(program.rules) != 1:
        raise NotACQError("expected a single-rule conjunctive query")
    rule = program.rules[0]
    if rule.head.predicate != program.answer_predicate:
        raise NotACQError("the single rule must define the answer predicate")
    for atom in rule.body:
        if not atom.is_builtin and atom.predicate in program.intensional:
            raise NotACQError("conjunctive query bodies read only database relations")
    return rule


def vc_reduction(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
) -> tuple[Schema, Instance, ConstraintSet]:
    """Recast view-conditioned causality as causality under constraints.

    The other answers are stored in a fresh exogenous view relation, and a
    view inclusion constraint pins that relation inside the query result:
    deletions must then never lose one of the protected answers.  Causes of
    the designated answer under that constraint set are exactly its
    view-conditioned causes.
    """
    _require_cq(program)
    answer = tuple(answer)
    full = evaluate(program, instance)
    if answer not in full:
        raise NotAnAnswerError(f"{answer} is not an answer of the query on this instance")
    if program.answer_arity == 0:
        return instance.schema, instance, ConstraintSet.empty()
    others = sorted(full - {answer})
    taken = set(instance.schema.names()) | set(program.predicate_arities())
    view_name = "V"
    n = 0
    while view_name in taken:
        view_name = f"V{n}"
        n += 1
    schema = instance.schema.with_predicate(view_name, program.answer_arity)
    used_ids = {f.id for f in instance.facts}
    vfacts: list[Fact] = []
    counter = 1
    for tup in others:
        while f"v{counter}" in used_ids:
            counter += 1
        vfacts.append(Fact(view_name, tup, f"v{counter}", endogenous=False))
        counter += 1
    extended = Instance(schema, instance.facts + tuple(vfacts))
    sigma = ConstraintSet(view_inclusions=(ViewInclusion(view_name, program),))
    return schema, extended, sigma


def is_key_preserving(program: Program, kappa: Iterable[FunctionalDependency]) -> bool:
    """Whether the query carries every key of its base relations in its head.

    Takes a conjunctive query and a set of key constraints; raises when a
    dependency in the set does not act as a key for a relation the query
    reads.  Positions holding constants do not count as carried.
    """
    rule = _require_cq(program)
    kappa = tuple(kappa)
    head_vars = {t.name for t in rule.head.terms if isinstance(t, Var)}
    by_pred: dict[str, list[FunctionalDependency]] = {}
    for fd in kappa:
        if not isinstance(fd, FunctionalDependency):
            raise NotAKeySetError(f"{fd!r} is not a functional dependency")
        by_pred.setdefault(fd.predicate, []).append(fd)
    for atom in rule.body:
        if atom.is_builtin:
            continue
        for fd in by_pred.get(atom.predicate, ()):
            arity = len(atom.terms)
            if max(fd.determinant) > arity:
                raise SchemaMismatchError(
                    f"key position {max(fd.determinant)} exceeds arity {arity} of {atom.predicate}"
                )
            if not fd.is_key_for(arity):
                raise NotAKeySetError(f"{fd} does not determine all of {atom.predicate}")
            for p in sorted(fd.determinant):
                term = atom.terms[p - 1]
                if not isinstance(term, Var) or term.name not in head_vars:
                    return False
    return True


def admissible_view_deletions(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
    sigma: ConstraintSet,
) -> tuple:
    """Minimal answer-retracting deletions that keep the constraints satisfied.

    Candidate deletions are the subset-minimal fact sets whose removal
    retracts the answer; those leaving a constraint-violating instance are
    filtered out, without re-minimization.
    """
    from .delete_propagation import min_source_side_effect

    answer = tuple(answer)
    candidates = min_source_side_effect(program, instance, answer)
    return tuple(
        lam for lam in candidates if satisfies(remove(instance, lam), sigma)
    )
