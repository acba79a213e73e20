"""Positive Datalog with recursion, an inequality built-in, and support sets.

Programs are sets of definite rules evaluated bottom-up (semi-naive) to the
minimal model.  Conjunctive queries are single rules; unions of conjunctive
queries are several rules with the same head.  The reserved answer predicate
is ``Ans`` for tuple-returning queries and ``ans`` for Boolean ones.

Program text format, one rule per statement, ``.`` terminated::

    Ans(x, y) <- P(x, y).
    P(x, y)   <- E(x, y).
    P(x, y)   <- P(x, z), E(z, y), x != y.

Unquoted identifiers in rules are variables.  Constants are written as
quoted strings (``"John"``) or bare numbers; they compare as uninterpreted
symbols.  ``<-`` may also be written ``←``, ``!=`` also ``≠``, comments run
from ``#`` to end of line.  The built-in ``!=`` is applied after its two
sides are bound by ordinary body atoms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    ArityConflictError,
    ArityMismatchError,
    NotAnAnswerError,
    ParseError,
    SchemaMismatchError,
    UnsafeRuleError,
)
from .relational import Instance, TupleId, id_sort_key

NEQ = "!="

Answer = tuple  # tuple[str, ...]
AnswerSet = frozenset  # frozenset[tuple[str, ...]]
Support = frozenset  # frozenset[TupleId]


@dataclass(frozen=True)
class Var:
    """A rule variable; everything else in a term position is a constant."""

    name: str

    def __repr__(self) -> str:
        return f"Var({self.name})"


Term = "Var | str"


def _term_str(t: "Var | str") -> str:
    if isinstance(t, Var):
        return t.name
    return f'"{t}"'


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: tuple

    @property
    def is_builtin(self) -> bool:
        return self.predicate == NEQ

    def variables(self) -> frozenset[str]:
        return frozenset(t.name for t in self.terms if isinstance(t, Var))

    def __str__(self) -> str:
        if self.is_builtin:
            return f"{_term_str(self.terms[0])} != {_term_str(self.terms[1])}"
        if not self.terms:
            return self.predicate
        return f"{self.predicate}({', '.join(_term_str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Rule:
    """A definite rule head <- body; safe, positive, nonempty body."""

    head: Atom
    body: tuple

    def __post_init__(self) -> None:
        if self.head.is_builtin:
            raise ParseError("rule head cannot be a built-in atom")
        if not self.body:
            raise ParseError(f"rule for {self.head.predicate} has an empty body")
        bound: set[str] = set()
        for atom in self.body:
            if not atom.is_builtin:
                bound.update(atom.variables())
        loose = self.head.variables() - bound
        if loose:
            raise UnsafeRuleError(
                f"head variable(s) {', '.join(sorted(loose))} of {self.head.predicate} "
                "do not occur in a positive body atom"
            )
        for atom in self.body:
            if atom.is_builtin:
                if len(atom.terms) != 2:
                    raise ParseError("!= takes exactly two terms")
                loose = atom.variables() - bound
                if loose:
                    raise UnsafeRuleError(
                        f"built-in variable(s) {', '.join(sorted(loose))} "
                        "do not occur in a positive body atom"
                    )

    def __str__(self) -> str:
        return f"{self.head} <- {', '.join(str(a) for a in self.body)}."


@dataclass(frozen=True)
class Program:
    """Rules plus the name of the answer predicate they define."""

    rules: tuple
    answer_predicate: str

    def __post_init__(self) -> None:
        if not self.rules:
            raise ParseError("program has no rules")
        arities: dict[str, int] = {}
        heads: set[str] = set()
        for rule in self.rules:
            heads.add(rule.head.predicate)
            for atom in (rule.head, *rule.body):
                if atom.is_builtin:
                    continue
                known = arities.setdefault(atom.predicate, len(atom.terms))
                if known != len(atom.terms):
                    raise ArityConflictError(
                        f"predicate {atom.predicate} used with arity {len(atom.terms)} and {known}"
                    )
        if self.answer_predicate not in heads:
            raise ParseError(f"no rule defines the answer predicate {self.answer_predicate}")
        object.__setattr__(self, "_arities", arities)
        object.__setattr__(self, "_intensional", frozenset(heads))

    @property
    def intensional(self) -> frozenset[str]:
        """Predicates defined by rule heads."""
        return self._intensional  # type: ignore[attr-defined]

    @property
    def extensional(self) -> frozenset[str]:
        """Predicates that only ever occur in rule bodies (database relations)."""
        preds = frozenset(p for p in self._arities if p != NEQ)  # type: ignore[attr-defined]
        return preds - self.intensional

    def predicate_arities(self) -> Mapping[str, int]:
        return dict(self._arities)  # type: ignore[attr-defined]

    @property
    def answer_arity(self) -> int:
        return self._arities[self.answer_predicate]  # type: ignore[attr-defined]

    @property
    def is_boolean(self) -> bool:
        return self.answer_arity == 0

    def constants(self) -> frozenset[str]:
        out: set[str] = set()
        for rule in self.rules:
            for atom in (rule.head, *rule.body):
                out.update(t for t in atom.terms if not isinstance(t, Var))
        return frozenset(out)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


# ---------------------------------------------------------------------------
# Parsing


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<arrow><-|←)
    | (?P<neq>!=|≠)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<number>\d+(?:\.\d+)?)
    | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
    | (?P<lparen>\()
    | (?P<rparen>\))
    | (?P<comma>,)
    | (?P<period>\.)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    linestart = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - linestart + 1)
        kind = m.lastgroup or ""
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, pos - linestart + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            linestart = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


def _unquote(s: str) -> str:
    body = s[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(
                "unexpected end of input",
                last.line if last else 1,
                last.column if last else 1,
            )
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, got {tok.value!r}", tok.line, tok.column)
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def parse_term(self):
        tok = self.next()
        if tok.kind == "name":
            return Var(tok.value)
        if tok.kind == "number":
            return tok.value
        if tok.kind == "string":
            return _unquote(tok.value)
        raise ParseError(f"expected a term, got {tok.value!r}", tok.line, tok.column)

    def parse_atom_or_builtin(self) -> Atom:
        tok = self.peek()
        if tok is None:
            raise ParseError("expected an atom")
        if tok.kind == "name" and self.peek(1) is not None and self.peek(1).kind == "lparen":
            return self.parse_atom()
        # a lone 0-ary predicate, or the left side of a built-in
        if tok.kind == "name" and (self.peek(1) is None or self.peek(1).kind != "neq"):
            self.next()
            return Atom(tok.value, ())
        left = self.parse_term()
        self.expect("neq", "'!='")
        right = self.parse_term()
        return Atom(NEQ, (left, right))

    def parse_atom(self) -> Atom:
        tok = self.expect("name", "a predicate name")
        terms: list = []
        nxt = self.peek()
        if nxt is not None and nxt.kind == "lparen":
            self.next()
            while True:
                terms.append(self.parse_term())
                sep = self.next()
                if sep.kind == "rparen":
                    break
                if sep.kind != "comma":
                    raise ParseError(f"expected ',' or ')', got {sep.value!r}", sep.line, sep.column)
        return Atom(tok.value, tuple(terms))

    def parse_rule(self) -> Rule:
        head = self.parse_atom()
        self.expect("arrow", "'<-'")
        body: list[Atom] = [self.parse_atom_or_builtin()]
        while True:
            tok = self.next()
            if tok.kind == "period":
                break
            if tok.kind != "comma":
                raise ParseError(f"expected ',' or '.', got {tok.value!r}", tok.line, tok.column)
            body.append(self.parse_atom_or_builtin())
        return Rule(head, tuple(body))


def parse_rules(text: str) -> tuple[Rule, ...]:
    """Parse a sequence of rules without designating an answer predicate."""
    parser = _Parser(_tokenize(text))
    rules: list[Rule] = []
    while not parser.at_end():
        rules.append(parser.parse_rule())
    if not rules:
        raise ParseError("no rules found")
    return tuple(rules)


def parse_program(text: str) -> Program:
    """Parse program text; the answer predicate is ``Ans`` or ``ans``."""
    rules = parse_rules(text)
    heads = {r.head.predicate for r in rules}
    named = [p for p in ("Ans", "ans") if p in heads]
    if len(named) == 2:
        raise ParseError("both Ans and ans are defined; use exactly one answer predicate")
    if not named:
        raise ParseError("no rule defines the answer predicate (Ans or ans)")
    return Program(rules, named[0])


def parse_atom_conjunction(text: str) -> tuple:
    """Parse ``P(x,y), Q(y,z), x != z`` with rule term conventions."""
    parser = _Parser(_tokenize(text))
    atoms: list[Atom] = [parser.parse_atom_or_builtin()]
    while not parser.at_end():
        parser.expect("comma", "','")
        atoms.append(parser.parse_atom_or_builtin())
    return tuple(atoms)


_GROUND_ATOM_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(\(([^()]*)\))?\s*")


def parse_ground_atoms(text: str) -> tuple:
    """Parse ground atoms like ``Ans(c,e), R(a,b)`` or a bare ``ans``.

    Unlike rule text, every argument here is a constant, so identifiers are
    not treated as variables.
    """
    atoms: list[Atom] = []
    pos = 0
    first = True
    while pos < len(text) or first:
        if not first:
            if pos >= len(text):
                break
            if text[pos] != ",":
                raise ParseError(f"expected ',' between atoms, got {text[pos:]!r}")
            pos += 1
        m = _GROUND_ATOM_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"expected a ground atom at {text[pos:]!r}")
        name = m.group(1)
        if m.group(2) is None:
            atoms.append(Atom(name, ()))
        else:
            raw = m.group(3).strip()
            if raw == "":
                raise ParseError(f"atom {name} has empty parentheses")
            args = tuple(a.strip().strip("'\"") for a in raw.split(","))
            if any(a == "" for a in args):
                raise ParseError(f"atom {name} has an empty argument")
            atoms.append(Atom(name, args))
        pos = m.end()
        first = False
    if not atoms:
        raise ParseError("no atoms found")
    return tuple(atoms)


# ---------------------------------------------------------------------------
# Evaluation


def _check_schema(program: Program, instance: Instance) -> None:
    for pred, arity in program.predicate_arities().items():
        if pred == NEQ:
            continue
        if instance.schema.declares(pred) and instance.schema.arity(pred) != arity:
            raise SchemaMismatchError(
                f"predicate {pred}: program uses arity {arity}, "
                f"instance declares {instance.schema.arity(pred)}"
            )
    intensional = program.intensional
    for f in instance.facts:
        if f.predicate in intensional:
            raise SchemaMismatchError(
                f"instance stores facts for {f.predicate}, which the program derives"
            )


def _unify(terms: tuple, tup: tuple, binding: dict) -> dict | None:
    new = binding
    copied = False
    for term, value in zip(terms, tup):
        if isinstance(term, Var):
            seen = new.get(term.name)
            if seen is None:
                if not copied:
                    new = dict(new)
                    copied = True
                new[term.name] = value
            elif seen != value:
                return None
        elif term != value:
            return None
    return new


def _resolve(term, binding: dict) -> str:
    if isinstance(term, Var):
        return binding[term.name]
    return term


def _derive(rule: Rule, rel_for) -> Iterator[tuple]:
    """All head tuples derivable for a rule; rel_for(i, pred) feeds atom i."""
    positional = [(i, atom) for i, atom in enumerate(rule.body) if not atom.is_builtin]
    builtins = [atom for atom in rule.body if atom.is_builtin]

    def rec(k: int, binding: dict) -> Iterator[tuple]:
        if k == len(positional):
            for b in builtins:
                if _resolve(b.terms[0], binding) == _resolve(b.terms[1], binding):
                    return
            yield tuple(_resolve(t, binding) for t in rule.head.terms)
            return
        i, atom = positional[k]
        for tup in rel_for(i, atom.predicate):
            bound = _unify(atom.terms, tup, binding)
            if bound is not None:
                yield from rec(k + 1, bound)

    yield from rec(0, {})


def minimal_model(program: Program, instance: Instance) -> dict:
    """The minimal model: every predicate's derived (or stored) tuples."""
    _check_schema(program, instance)
    edb: dict[str, set] = {}
    for f in instance.facts:
        edb.setdefault(f.predicate, set()).add(f.args)
    total: dict[str, set] = {p: set() for p in program.intensional}
    empty: frozenset = frozenset()

    def full(i: int, pred: str):
        if pred in total:
            return total[pred]
        return edb.get(pred, empty)

    delta: dict[str, set] = {p: set() for p in total}
    for rule in program.rules:
        head = rule.head.predicate
        for tup in list(_derive(rule, full)):
            if tup not in total[head]:
                total[head].add(tup)
                delta[head].add(tup)

    while any(delta.values()):
        new: dict[str, set] = {p: set() for p in total}
        for rule in program.rules:
            idb_positions = [
                i for i, atom in enumerate(rule.body)
                if not atom.is_builtin and atom.predicate in total
            ]
            head = rule.head.predicate
            for j in idb_positions:
                def rel(i: int, pred: str, _j: int = j):
                    if i == _j:
                        return delta[pred]
                    return full(i, pred)

                for tup in _derive(rule, rel):
                    if tup not in total[head]:
                        new[head].add(tup)
        delta = new
        for p, tuples in delta.items():
            total[p].update(tuples)

    model = {p: frozenset(tuples) for p, tuples in edb.items()}
    model.update({p: frozenset(tuples) for p, tuples in total.items()})
    return model


def evaluate(program: Program, instance: Instance) -> frozenset:
    """The answer set Q(D) as a frozenset of constant tuples.

    Boolean programs yield ``{()}`` when they hold and ``frozenset()`` when
    they do not.
    """
    return minimal_model(program, instance)[program.answer_predicate]


def entails_atoms(program: Program, instance: Instance, atoms: Sequence) -> bool:
    """Whether every given ground atom holds in the minimal model."""
    model = minimal_model(program, instance)
    arities = program.predicate_arities()
    for atom in atoms:
        if atom.is_builtin or any(isinstance(t, Var) for t in atom.terms):
            raise ParseError(f"observation atom {atom} is not a ground relational atom")
        pred = atom.predicate
        expected = arities.get(pred)
        if expected is None and instance.schema.declares(pred):
            expected = instance.schema.arity(pred)
        if expected is not None and expected != len(atom.terms):
            raise SchemaMismatchError(
                f"atom {atom} has arity {len(atom.terms)}, expected {expected}"
            )
        if tuple(atom.terms) not in model.get(pred, frozenset()):
            return False
    return True


def holds(program: Program, instance: Instance, answer: Sequence[str]) -> bool:
    """Whether the given tuple is an answer of the program on the instance."""
    answer = tuple(answer)
    if len(answer) != program.answer_arity:
        raise ArityMismatchError(
            f"answer {answer} has arity {len(answer)}, query returns {program.answer_arity}"
        )
    return answer in evaluate(program, instance)


def boolean_specialization(program: Program, answer: Sequence[str]) -> Program:
    """A Boolean program that holds iff ``answer`` is in the original result."""
    answer = tuple(answer)
    if program.is_boolean and answer == ():
        return program
    if len(answer) != program.answer_arity:
        raise ArityMismatchError(
            f"answer {answer} has arity {len(answer)}, query returns {program.answer_arity}"
        )
    if "ans" in program.predicate_arities():
        raise ValueError("program already uses the predicate ans")
    wrapper = Rule(Atom("ans", ()), (Atom(program.answer_predicate, answer),))
    return Program(program.rules + (wrapper,), "ans")


# ---------------------------------------------------------------------------
# Support sets


class RemovalAnswerCache:
    """Memoized answer sets of the instances obtained by deleting fact subsets."""

    def __init__(self, program: Program, instance: Instance):
        self.program = program
        self.instance = instance
        self._memo: dict[frozenset, frozenset] = {}

    def answers(self, removed: Iterable[TupleId] = ()) -> frozenset:
        key = frozenset(removed)
        cached = self._memo.get(key)
        if cached is None:
            sub = Instance(
                self.instance.schema,
                tuple(f for f in self.instance.facts if f.id not in key),
            )
            cached = evaluate(self.program, sub)
            self._memo[key] = cached
        return cached

    def holds(self, removed: Iterable[TupleId], answer: tuple) -> bool:
        return tuple(answer) in self.answers(removed)


def minimal_supports_by_answer(
    program: Program,
    instance: Instance,
    answers: Iterable[Sequence[str]],
) -> dict:
    """Minimal support sets for several answers in one sweep.

    A support of an answer is a subset-minimal set of facts on which the
    program still yields that answer.  Facts over predicates the program
    never reads cannot occur in one, so the search runs over the relevant
    facts only, by increasing cardinality, skipping supersets of supports
    already found.
    """
    targets = [tuple(a) for a in answers]
    for a in targets:
        if len(a) != program.answer_arity:
            raise ArityMismatchError(
                f"answer {a} has arity {len(a)}, query returns {program.answer_arity}"
            )
    full = evaluate(program, instance)
    missing = [a for a in targets if a not in full]
    if missing:
        raise NotAnAnswerError(f"{missing[0]} is not an answer of the query on this instance")

    relevant = sorted(
        (f.id for f in instance.facts if f.predicate in program.extensional),
        key=id_sort_key,
    )
    found: dict[tuple, list] = {a: [] for a in targets}
    for k in range(0, len(relevant) + 1):
        for combo in combinations(relevant, k):
            kept = frozenset(combo)
            open_targets = [
                a for a in found if not any(sup <= kept for sup in found[a])
            ]
            if not open_targets:
                continue
            got = evaluate(program, instance.keep(kept))
            for a in open_targets:
                if a in got:
                    found[a].append(kept)
    return {
        a: tuple(sorted(sups, key=lambda s: (len(s), tuple(sorted(s, key=id_sort_key)))))
        for a, sups in found.items()
    }


def minimal_supports(
    program: Program,
    instance: Instance,
    answer: Sequence[str],
) -> tuple:
    """All subset-minimal fact sets on which the answer still holds."""
    answer = tuple(answer)
    return minimal_supports_by_answer(program, instance, (answer,))[answer]
