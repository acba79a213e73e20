"""Schemas, identified tuples, and immutable database instances.

An instance is a finite set of ground facts over a relational schema.  Every
fact carries a tuple id (``t1``, ``t2``, ...) and a flag saying whether it is
endogenous (open to hypothetical deletion) or exogenous (taken as given).
All operations are pure: they build new instances and never mutate inputs,
and ids survive deletions unchanged.

Instance text format, one fact per line::

    # hash comments and blank lines are ignored
    E(a, b).              # endogenous fact, id assigned in file order: t1, t2, ...
    E(b, c)!              # '!' terminator marks the fact exogenous
    E(c, d) @exo.         # '@exo' annotation does the same
    E(d, e) @id=t9.       # explicit id; later implicit ids skip taken ones

Arguments are uninterpreted constants.  They may be written bare (any run of
characters other than whitespace, ``( ) , . ! # @`` and quotes) or as a
single- or double-quoted string when they need such characters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    ArityConflictError,
    ArityMismatchError,
    ParseError,
    UnknownPredicateError,
    UnknownTupleIdError,
)

TupleId = str


def id_sort_key(tid: TupleId) -> tuple[int, str]:
    """Sort key that orders ``t2`` before ``t10``."""
    return (len(tid), tid)


def sorted_ids(ids: Iterable[TupleId]) -> tuple[TupleId, ...]:
    return tuple(sorted(ids, key=id_sort_key))


@dataclass(frozen=True)
class Schema:
    """The database predicates and their arities."""

    predicates: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        arities: dict[str, int] = {}
        for name, arity in self.predicates:
            if name in arities:
                raise ArityConflictError(f"predicate {name} declared twice")
            if arity < 1:
                raise ArityConflictError(f"predicate {name} needs arity >= 1, got {arity}")
            arities[name] = arity
        object.__setattr__(self, "_arities", arities)

    @classmethod
    def of(cls, arities: Mapping[str, int]) -> "Schema":
        return cls(tuple(sorted(arities.items())))

    def declares(self, predicate: str) -> bool:
        return predicate in self._arities  # type: ignore[attr-defined]

    def arity(self, predicate: str) -> int:
        try:
            return self._arities[predicate]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownPredicateError(f"predicate {predicate} is not declared") from None

    def names(self) -> frozenset[str]:
        return frozenset(self._arities)  # type: ignore[attr-defined]

    def with_predicate(self, name: str, arity: int) -> "Schema":
        if self.declares(name):
            if self.arity(name) != arity:
                raise ArityConflictError(f"predicate {name} already declared with arity {self.arity(name)}")
            return self
        return Schema(tuple(sorted(self.predicates + ((name, arity),))))


@dataclass(frozen=True)
class Fact:
    """A ground tuple with a stable id and an endogenous/exogenous flag."""

    predicate: str
    args: tuple[str, ...]
    id: TupleId
    endogenous: bool = True

    @property
    def key(self) -> tuple[str, tuple[str, ...]]:
        return (self.predicate, self.args)

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(self.args)})"


@dataclass(frozen=True)
class Instance:
    """An immutable set of facts conforming to a schema.

    Ids are unique, no two facts share (predicate, args), and every fact is
    either endogenous or exogenous; the two parts partition the instance.
    """

    schema: Schema
    facts: tuple[Fact, ...]

    def __post_init__(self) -> None:
        by_id: dict[TupleId, Fact] = {}
        seen_keys: set[tuple[str, tuple[str, ...]]] = set()
        for f in self.facts:
            if not self.schema.declares(f.predicate):
                raise UnknownPredicateError(f"fact {f.id} uses undeclared predicate {f.predicate}")
            if len(f.args) != self.schema.arity(f.predicate):
                raise ArityMismatchError(
                    f"fact {f.id}: {f.predicate} has arity {self.schema.arity(f.predicate)}, got {len(f.args)} arguments"
                )
            if f.id in by_id:
                raise ValueError(f"duplicate tuple id {f.id}")
            if f.key in seen_keys:
                raise ValueError(f"duplicate fact {f}")
            by_id[f.id] = f
            seen_keys.add(f.key)
        object.__setattr__(self, "_by_id", by_id)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self.facts)

    def __len__(self) -> int:
        return len(self.facts)

    def ids(self) -> frozenset[TupleId]:
        return frozenset(self._by_id)  # type: ignore[attr-defined]

    def has_id(self, tid: TupleId) -> bool:
        return tid in self._by_id  # type: ignore[attr-defined]

    def fact(self, tid: TupleId) -> Fact:
        try:
            return self._by_id[tid]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownTupleIdError(f"no tuple with id {tid}") from None

    def endogenous_ids(self) -> frozenset[TupleId]:
        return frozenset(f.id for f in self.facts if f.endogenous)

    def exogenous_ids(self) -> frozenset[TupleId]:
        return frozenset(f.id for f in self.facts if not f.endogenous)

    def tuples_of(self, predicate: str) -> frozenset[tuple[str, ...]]:
        return frozenset(f.args for f in self.facts if f.predicate == predicate)

    def keep(self, ids: Iterable[TupleId]) -> "Instance":
        """Restriction to the given ids (no validation; internal plumbing)."""
        wanted = set(ids)
        return Instance(self.schema, tuple(f for f in self.facts if f.id in wanted))

    def constants(self) -> frozenset[str]:
        out: set[str] = set()
        for f in self.facts:
            out.update(f.args)
        return frozenset(out)


def make_instance(
    schema: Schema,
    entries: Iterable[Sequence],
) -> Instance:
    """Build an instance from (predicate, args[, endogenous]) entries.

    Ids are assigned ``t1``, ``t2``, ... in input order.  Entries repeating an
    earlier (predicate, args) pair are dropped; the first occurrence wins,
    keeping its id and flag.
    """
    facts: list[Fact] = []
    seen: set[tuple[str, tuple[str, ...]]] = set()
    counter = 1
    for entry in entries:
        if len(entry) == 2:
            predicate, args = entry
            endogenous = True
        elif len(entry) == 3:
            predicate, args, endogenous = entry
        else:
            raise ValueError(f"entry {entry!r} is not (predicate, args[, endogenous])")
        if not schema.declares(predicate):
            raise UnknownPredicateError(f"predicate {predicate} is not declared")
        args = tuple(str(a) for a in args)
        if len(args) != schema.arity(predicate):
            raise ArityMismatchError(
                f"{predicate} has arity {schema.arity(predicate)}, got {len(args)} arguments"
            )
        if (predicate, args) in seen:
            continue
        seen.add((predicate, args))
        facts.append(Fact(predicate, args, f"t{counter}", bool(endogenous)))
        counter += 1
    return Instance(schema, tuple(facts))


def remove(instance: Instance, ids: Iterable[TupleId]) -> Instance:
    """A new instance without the given tuples; everything else untouched."""
    gone = set(ids)
    for tid in gone:
        if not instance.has_id(tid):
            raise UnknownTupleIdError(f"no tuple with id {tid}")
    return Instance(instance.schema, tuple(f for f in instance.facts if f.id not in gone))


def endogenous_ids(instance: Instance) -> frozenset[TupleId]:
    return instance.endogenous_ids()


_FACT_HEAD_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(")


def _split_args(body: str, lineno: int) -> tuple[str, ...]:
    args: list[str] = []
    current: list[str] = []
    quote: str | None = None
    for ch in body:
        if quote is not None:
            if ch == quote:
                quote = None
            else:
                current.append(ch)
        elif ch in "'\"":
            quote = ch
        elif ch == ",":
            args.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    if quote is not None:
        raise ParseError("unterminated quote in fact arguments", lineno)
    args.append("".join(current).strip())
    if any(a == "" for a in args):
        raise ParseError("empty argument in fact", lineno)
    return tuple(args)


def _strip_comment(line: str) -> str:
    quote: str | None = None
    for i, ch in enumerate(line):
        if quote is not None:
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _parse_fact_line(line: str, lineno: int) -> tuple[str, tuple[str, ...], bool, TupleId | None]:
    m = _FACT_HEAD_RE.match(line)
    if not m:
        raise ParseError("expected a fact like P(a,b).", lineno)
    predicate = m.group(1)
    depth = 1
    quote: str | None = None
    i = m.end()
    start = i
    while i < len(line):
        ch = line[i]
        if quote is not None:
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                break
        i += 1
    if depth != 0:
        raise ParseError("unbalanced parentheses in fact", lineno)
    args = _split_args(line[start:i], lineno)
    rest = line[i + 1 :].strip()

    endogenous = True
    explicit: TupleId | None = None
    terminated = False
    while rest:
        if rest.startswith("@exo"):
            endogenous = False
            rest = rest[4:].lstrip()
        elif rest.startswith("@id="):
            m2 = re.match(r"@id=([A-Za-z0-9_]+)", rest)
            if not m2:
                raise ParseError("malformed @id annotation", lineno)
            explicit = m2.group(1)
            rest = rest[m2.end() :].lstrip()
        elif rest == ".":
            terminated = True
            rest = ""
        elif rest == "!":
            endogenous = False
            terminated = True
            rest = ""
        else:
            raise ParseError(f"unexpected trailing text {rest!r} after fact", lineno)
    if not terminated:
        raise ParseError("fact is missing its '.' or '!' terminator", lineno)
    return predicate, args, endogenous, explicit


def parse_instance(text: str, schema: Schema | None = None) -> Instance:
    """Parse instance text (grammar in the module docstring).

    Without an explicit schema the predicates and arities are inferred from
    the facts themselves; with one, facts must conform to it.
    """
    parsed: list[tuple[str, tuple[str, ...], bool, TupleId | None, int]] = []
    explicit_ids: set[TupleId] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        predicate, args, endo, tid = _parse_fact_line(line, lineno)
        if tid is not None:
            if tid in explicit_ids:
                raise ParseError(f"duplicate tuple id {tid}", lineno)
            explicit_ids.add(tid)
        parsed.append((predicate, args, endo, tid, lineno))

    inferred: dict[str, int] = {}
    facts: list[Fact] = []
    seen: set[tuple[str, tuple[str, ...]]] = set()
    counter = 1
    for predicate, args, endo, tid, lineno in parsed:
        if schema is not None:
            if not schema.declares(predicate):
                raise UnknownPredicateError(f"line {lineno}: predicate {predicate} is not declared")
            if len(args) != schema.arity(predicate):
                raise ArityMismatchError(
                    f"line {lineno}: {predicate} has arity {schema.arity(predicate)}, got {len(args)}"
                )
        else:
            known = inferred.setdefault(predicate, len(args))
            if known != len(args):
                raise ArityMismatchError(
                    f"line {lineno}: {predicate} used with arity {len(args)}, previously {known}"
                )
        if (predicate, args) in seen:
            continue
        seen.add((predicate, args))
        if tid is None:
            while f"t{counter}" in explicit_ids:
                counter += 1
            tid = f"t{counter}"
            counter += 1
        facts.append(Fact(predicate, args, tid, endo))
    final_schema = schema if schema is not None else Schema.of(inferred)
    return Instance(final_schema, tuple(facts))
