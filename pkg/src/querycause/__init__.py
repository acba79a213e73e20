"""Causes, responsibility, abduction, and delete propagation for query answers.

The package evaluates monotone Datalog queries over annotated relational
instances and answers why-questions about individual results: which facts
caused an answer, at what responsibility, which deletions retract it with
or without side effects, and how the same questions behave under integrity
constraints or when the rest of the view must be preserved.
"""

from .abduction import (
    AbductionProblem,
    causal_abduction_problem,
    causes_via_abduction,
    necessary,
    relevant,
    solve,
)
from .causality import (
    CausalityReport,
    CauseEntry,
    ContingencyFamily,
    actual_causes,
    causality_report,
    counterfactual_causes,
    decide_cdp,
    decide_cfdp,
    decide_rdp,
    minimal_contingencies,
    responsibility,
)
from .constraints import (
    ConstraintSet,
    DenialConstraint,
    FunctionalDependency,
    InclusionDependency,
    ViewInclusion,
    admissible_view_deletions,
    causes_under_ics,
    contingencies_under_ics,
    ic_report,
    is_key_preserving,
    parse_constraints,
    responsibility_under_ics,
    satisfies,
    vc_reduction,
    violations,
)
from .datalog import (
    Atom,
    Program,
    Rule,
    Var,
    boolean_specialization,
    evaluate,
    holds,
    minimal_model,
    minimal_supports,
    minimal_supports_by_answer,
    parse_program,
    parse_rules,
)
from .delete_propagation import (
    decide_vsefp,
    min_source_side_effect,
    view_side_effect_free,
    view_side_effect_free_all,
)
from .errors import (
    ArityConflictError,
    ArityMismatchError,
    ExogenousTupleError,
    InconsistentInstanceError,
    NoDiagnosisError,
    NonBooleanProgramError,
    NotACQError,
    NotAKeySetError,
    NotAnAnswerError,
    ParseError,
    QueryCauseError,
    SchemaMismatchError,
    UnknownPredicateError,
    UnknownTupleIdError,
    UnsafeRuleError,
)
from .relational import (
    Fact,
    Instance,
    Schema,
    make_instance,
    parse_instance,
    remove,
)
from .view_conditioned import (
    decide_vcdp,
    decide_vrdp,
    vc_cause_exists,
    vc_causes,
    vc_responsibility,
    vcc_causes,
    view_condition,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
