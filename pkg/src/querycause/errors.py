"""Exception types shared across the package."""

from __future__ import annotations


class QueryCauseError(Exception):
    """Base class for every error raised by this library."""


class ParseError(QueryCauseError):
    """Malformed program, instance, constraint, or observation text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class UnsafeRuleError(ParseError):
    """A head or built-in variable is not bound by a positive body atom."""


class ArityConflictError(ParseError):
    """The same predicate is used with two different arities."""


class UnknownPredicateError(QueryCauseError):
    """A predicate is not declared by the schema at hand."""


class ArityMismatchError(QueryCauseError):
    """A tuple's width disagrees with the declared arity."""


class UnknownTupleIdError(QueryCauseError):
    """A tuple id does not occur in the instance."""


class SchemaMismatchError(QueryCauseError):
    """A program and an instance disagree about the database predicates."""


class NotAnAnswerError(QueryCauseError):
    """The designated tuple is not an answer of the query on the instance."""


class ExogenousTupleError(QueryCauseError):
    """The operation needs an endogenous tuple but got an exogenous one."""


class NonBooleanProgramError(QueryCauseError):
    """A decision procedure for Boolean queries got a tuple-returning one."""


class NoDiagnosisError(QueryCauseError):
    """An abduction problem admits no diagnosis at all."""


class InconsistentInstanceError(QueryCauseError):
    """The instance violates the given integrity constraints."""


class NotACQError(QueryCauseError):
    """The operation is defined for single-rule conjunctive queries only."""


class NotAKeySetError(QueryCauseError):
    """A functional dependency passed as a key does not determine its relation."""
