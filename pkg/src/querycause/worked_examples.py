"""Built-in worked scenarios with their known analysis results.

Three small instances exercise the main entry points end to end: a path
graph for plain causality, a join for the abduction bridge, and a
university registry for constraints, view-conditioned causality, and
deletion propagation.  ``run_all`` recomputes everything and compares
against the frozen expectations, so the CLI can offer a self-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .abduction import causal_abduction_problem, necessary, relevant, solve
from .causality import causality_report
from .constraints import (
    ConstraintSet,
    admissible_view_deletions,
    causes_under_ics,
    contingencies_under_ics,
    parse_constraints,
)
from .datalog import Program, parse_program
from .delete_propagation import view_side_effect_free
from .relational import Instance, parse_instance
from .view_conditioned import vc_causes, vc_responsibility


@dataclass(frozen=True)
class WorkedExample:
    name: str
    description: str
    program_text: str
    instance_text: str
    answer: tuple
    constraint_text: str = ""

    def program(self) -> Program:
        return parse_program(self.program_text)

    def instance(self) -> Instance:
        return parse_instance(self.instance_text)

    def constraints(self) -> ConstraintSet:
        return parse_constraints(self.constraint_text)


PATH_GRAPH = WorkedExample(
    name="path-graph",
    description="reachability on a seven-edge graph, answer (c,e)",
    program_text="""\
P(x,y) <- E(x,y).
P(x,y) <- P(x,z), E(z,y).
Ans(x,y) <- P(x,y).
""",
    instance_text="""\
E(a,b).  # t1
E(b,e).  # t2
E(e,d).  # t3
E(d,b).  # t4
E(c,a).  # t5
E(c,b).  # t6
E(c,d).  # t7
""",
    answer=("c", "e"),
)

JOIN_PAIRS = WorkedExample(
    name="join-pairs",
    description="Boolean join over R and S, read as an abduction problem",
    program_text="""\
ans <- R(x,y), S(y).
""",
    instance_text="""\
R(a1,a4).  # t1
R(a2,a1).  # t2
R(a3,a3).  # t3
S(a1).     # t4
S(a2).     # t5
S(a3).     # t6
""",
    answer=(),
)

UNIVERSITY = WorkedExample(
    name="university",
    description="departments and courses under an inclusion dependency",
    program_text="""\
Ans(ts) <- Dep(dn,ts), Course(cn,ts,dn).
""",
    instance_text="""\
Dep(Computing,John).                # t1
Dep(Philosophy,Patrick).            # t2
Dep(Math,Kevin).                    # t3
Course(Com08,John,Computing).       # t4
Course(Math01,Kevin,Math).          # t5
Course(Hist02,Patrick,Philosophy).  # t6
Course(Math08,Eli,Math).            # t7
Course(Com01,John,Computing).       # t8
""",
    answer=("John",),
    constraint_text="IND Dep[1,2] -> Course[3,2];\n",
)

EXAMPLES = (PATH_GRAPH, JOIN_PAIRS, UNIVERSITY)


def by_name(name: str) -> WorkedExample:
    for ex in EXAMPLES:
        if ex.name == name:
            return ex
    raise KeyError(name)


def _check_path_graph() -> list:
    ex = PATH_GRAPH
    report = causality_report(ex.program(), ex.instance(), ex.answer)
    checks = []
    checks.append((
        "path-graph causes",
        report.causes() == frozenset({"t1", "t2", "t4", "t5", "t6", "t7"}),
        f"got {sorted(report.causes())}",
    ))
    counterfactual = {t for t, e in report.entries.items() if e.counterfactual}
    checks.append((
        "path-graph counterfactual cause",
        counterfactual == {"t2"},
        f"got {sorted(counterfactual)}",
    ))
    rho = {t: e.responsibility for t, e in report.entries.items()}
    expected = {t: Fraction(1, 3) for t in ("t1", "t4", "t5", "t6", "t7")}
    expected["t2"] = Fraction(1)
    checks.append((
        "path-graph responsibilities",
        rho == expected,
        f"got {sorted(rho.items())}",
    ))
    return checks


def _check_join_pairs() -> list:
    ex = JOIN_PAIRS
    ap = causal_abduction_problem(ex.program(), ex.instance())
    diagnoses = [frozenset(f.id for f in delta) for delta in solve(ap)]
    checks = []
    checks.append((
        "join-pairs diagnoses",
        diagnoses == [frozenset({"t2", "t4"}), frozenset({"t3", "t6"})],
        f"got {[sorted(d) for d in diagnoses]}",
    ))
    rel = frozenset(f.id for f in relevant(ap))
    checks.append((
        "join-pairs relevant hypotheses",
        rel == frozenset({"t2", "t3", "t4", "t6"}),
        f"got {sorted(rel)}",
    ))
    ness = frozenset(f.id for f in necessary(ap))
    checks.append(("join-pairs necessary hypotheses", ness == frozenset(), f"got {sorted(ness)}"))
    return checks


def _check_university() -> list:
    ex = UNIVERSITY
    program, instance = ex.program(), ex.instance()
    sigma = ex.constraints()
    checks = []

    plain = causes_under_ics(program, instance, ex.answer, ConstraintSet.empty())
    checks.append((
        "university causes without constraints",
        plain == frozenset({"t1", "t4", "t8"}),
        f"got {sorted(plain)}",
    ))
    cont_t4 = contingencies_under_ics(program, instance, ex.answer, "t4", ConstraintSet.empty())
    checks.append((
        "university contingency for t4",
        cont_t4.sets == (frozenset({"t8"}),),
        f"got {[sorted(s) for s in cont_t4.sets]}",
    ))

    constrained = causes_under_ics(program, instance, ex.answer, sigma)
    checks.append((
        "university causes under the inclusion dependency",
        constrained == frozenset({"t1"}),
        f"got {sorted(constrained)}",
    ))

    vsef = view_side_effect_free(program, instance, ex.answer)
    checks.append((
        "university smallest side-effect-free deletion",
        vsef == frozenset({"t1"}),
        f"got {sorted(vsef or ())}",
    ))

    vcc = vc_causes(program, instance, ex.answer)
    rho4 = vc_responsibility(program, instance, ex.answer, "t4")
    checks.append((
        "university view-conditioned causes",
        vcc == frozenset({"t1", "t4", "t8"}) and rho4 == Fraction(1, 2),
        f"got {sorted(vcc)} with rho(t4)={rho4}",
    ))

    admissible = admissible_view_deletions(program, instance, ex.answer, sigma)
    checks.append((
        "university admissible deletions under the dependency",
        admissible == (frozenset({"t1"}),),
        f"got {[sorted(s) for s in admissible]}",
    ))
    return checks


def run_all() -> list:
    """Recompute every scenario; returns (check name, passed, detail) rows."""
    rows: list = []
    rows.extend(_check_path_graph())
    rows.extend(_check_join_pairs())
    rows.extend(_check_university())
    return rows
