"""Command-line front end.

Subcommands: eval, causes, vc-causes, abduce, ic-causes, delprop, check,
examples.  Output is deterministic: rows are sorted, responsibilities are
printed as exact fractions, and ``--format json`` emits keys in sorted
order.  Exit status is 0 on success, 1 on domain errors such as asking
about a non-answer, and 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .abduction import AbductionProblem, necessary, relevant, solve
from .causality import (
    causality_report,
    decide_cdp,
    decide_cfdp,
    decide_rdp,
    minimal_contingencies,
)
from .constraints import (
    ConstraintSet,
    contingencies_under_ics,
    ic_report,
    parse_constraints,
    violations,
)
from .datalog import (
    Program,
    boolean_specialization,
    evaluate,
    parse_ground_atoms,
    parse_program,
)
from .delete_propagation import (
    decide_vsefp,
    min_source_side_effect,
    view_side_effect_free,
    view_side_effect_free_all,
)
from .errors import ArityMismatchError, ParseError, QueryCauseError
from .relational import Instance, parse_instance, sorted_ids
from .view_conditioned import (
    decide_vcdp,
    decide_vrdp,
    vc_causes,
    vc_responsibility,
    view_condition,
)
from .worked_examples import run_all


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _load_program(args) -> Program:
    return parse_program(_read(args.program))


def _load_instance(args) -> Instance:
    return parse_instance(_read(args.database))


def _load_constraints(args) -> ConstraintSet:
    if getattr(args, "constraints", None) is None:
        return ConstraintSet.empty()
    return parse_constraints(_read(args.constraints))


def _parse_answer(raw: str | None) -> tuple:
    """Comma-separated constants; empty or missing means the Boolean answer."""
    if raw is None or raw.strip() == "":
        return ()
    parts = [p.strip() for p in raw.split(",")]
    if any(p == "" for p in parts):
        raise ParseError(f"empty constant in answer {raw!r}")
    return tuple(p[1:-1] if len(p) >= 2 and p[0] == p[-1] and p[0] in "'\"" else p for p in parts)


def _parse_rational(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {raw!r}") from None


def _specialized(program: Program, answer: tuple) -> Program:
    if len(answer) != program.answer_arity:
        raise ArityMismatchError(
            f"answer {answer} has width {len(answer)}, query returns {program.answer_arity}"
        )
    return boolean_specialization(program, answer)


def _idset(ids) -> str:
    return "{" + ",".join(sorted_ids(ids)) + "}"


def _family(sets) -> str:
    return " ".join(_idset(s) for s in sets) if sets else "-"


def _table(header: tuple, rows: list) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _decision(args, value: bool) -> int:
    _emit(args, "true" if value else "false", {"decision": value})
    return 0


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_eval(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    answers = evaluate(program, instance)
    if program.is_boolean:
        return _decision(args, bool(answers))
    ordered = sorted(answers)
    _emit(args, "\n".join(",".join(a) for a in ordered) or "(no answers)",
          {"answers": [list(a) for a in ordered]})
    return 0


def _report_payload(report, instance: Instance) -> tuple:
    rows = []
    payload = []
    for tid in sorted_ids(report.entries):
        entry = report.entries[tid]
        sets = entry.contingencies.sets
        rows.append((
            tid,
            str(instance.fact(tid)),
            "yes" if entry.counterfactual else "no",
            str(entry.responsibility),
            _family(sets),
        ))
        payload.append({
            "tuple": tid,
            "fact": str(instance.fact(tid)),
            "counterfactual": entry.counterfactual,
            "responsibility": str(entry.responsibility),
            "contingencies": [sorted_ids(s) for s in sets],
        })
    header = ("tuple", "fact", "counterfactual", "responsibility", "contingencies")
    return _table(header, rows), payload


def _cmd_causes(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    answer = _parse_answer(args.answer)
    if args.mode != "report":
        if args.tau is None:
            raise ParseError(f"--tau is required for mode {args.mode}")
        boolean = _specialized(program, answer)
        if args.mode == "cdp":
            return _decision(args, decide_cdp(boolean, instance, args.tau))
        if args.mode == "cfdp":
            return _decision(args, decide_cfdp(boolean, instance, args.tau))
        if args.v is None:
            raise ParseError("--v is required for mode rdp")
        return _decision(args, decide_rdp(boolean, instance, args.tau, _parse_rational(args.v)))
    if args.tau is not None:
        family = minimal_contingencies(program, instance, answer, args.tau)
        text = "\n".join([
            f"tuple: {args.tau}",
            f"fact: {instance.fact(args.tau)}",
            f"is_cause: {'true' if family.is_cause else 'false'}",
            f"counterfactual: {'true' if family.is_counterfactual else 'false'}",
            f"responsibility: {family.responsibility}",
            f"contingencies: {_family(family.sets)}",
        ])
        _emit(args, text, {
            "tuple": args.tau,
            "fact": str(instance.fact(args.tau)),
            "is_cause": family.is_cause,
            "counterfactual": family.is_counterfactual,
            "responsibility": str(family.responsibility),
            "contingencies": [sorted_ids(s) for s in family.sets],
        })
        return 0
    report = causality_report(program, instance, answer)
    table, payload = _report_payload(report, instance)
    _emit(args, table, {"answer": list(answer), "causes": payload})
    return 0


def _cmd_vc_causes(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    answer = _parse_answer(args.answer)
    strict = args.strict_vc
    if args.tau is not None and args.v is not None:
        return _decision(
            args, decide_vrdp(program, instance, answer, args.tau, _parse_rational(args.v), strict)
        )
    if args.tau is not None:
        return _decision(args, decide_vcdp(program, instance, answer, args.tau, strict))
    causes = vc_causes(program, instance, answer, strict)
    fixed = sorted(view_condition(program, instance, answer))
    rows = []
    payload = []
    for tid in sorted_ids(causes):
        rho = vc_responsibility(program, instance, answer, tid, strict)
        rows.append((tid, str(instance.fact(tid)), str(rho)))
        payload.append({"tuple": tid, "fact": str(instance.fact(tid)), "responsibility": str(rho)})
    condition = "; ".join(",".join(a) for a in fixed) if fixed else "(empty)"
    _emit(args, f"view condition: {condition}\n" + _table(("tuple", "fact", "responsibility"), rows),
          {"answer": list(answer), "view_condition": [list(a) for a in fixed], "causes": payload})
    return 0


def _cmd_abduce(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    observation = parse_ground_atoms(args.obs)
    if args.hyp is None:
        extensional = frozenset(f for f in instance.facts if not f.endogenous)
        hypotheses = frozenset(f for f in instance.facts if f.endogenous)
    else:
        extensional = frozenset(instance.facts)
        hypotheses = frozenset(parse_instance(_read(args.hyp)).facts)
    ap = AbductionProblem(program, extensional, hypotheses, observation)
    sol = solve(ap)

    def fact_line(facts) -> str:
        return ", ".join(f"{f.id} {f}" for f in sorted(facts, key=lambda f: f.key))

    lines = [f"diagnosis: {fact_line(d)}" for d in sol]
    lines.append(f"relevant: {fact_line(relevant(ap)) or '-'}")
    if sol:
        lines.append(f"necessary: {fact_line(necessary(ap)) or '-'}")
    else:
        lines.append("necessary: undefined (no diagnoses)")
    payload = {
        "diagnoses": [[f"{f.id} {f}" for f in sorted(d, key=lambda f: f.key)] for d in sol],
        "relevant": [f"{f.id} {f}" for f in sorted(relevant(ap), key=lambda f: f.key)],
        "necessary": [f"{f.id} {f}" for f in sorted(necessary(ap), key=lambda f: f.key)]
        if sol else None,
    }
    _emit(args, "\n".join(lines), payload)
    return 0


def _cmd_ic_causes(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    sigma = _load_constraints(args)
    answer = _parse_answer(args.answer)
    if args.tau is not None:
        family = contingencies_under_ics(program, instance, answer, args.tau, sigma)
        text = "\n".join([
            f"tuple: {args.tau}",
            f"is_cause: {'true' if family.is_cause else 'false'}",
            f"responsibility: {family.responsibility}",
            f"contingencies: {_family(family.sets)}",
        ])
        _emit(args, text, {
            "tuple": args.tau,
            "is_cause": family.is_cause,
            "responsibility": str(family.responsibility),
            "contingencies": [sorted_ids(s) for s in family.sets],
        })
        return 0
    report = ic_report(program, instance, answer, sigma)
    table, payload = _report_payload(report, instance)
    _emit(args, table, {"answer": list(answer), "causes": payload})
    return 0


def _cmd_delprop(args) -> int:
    program = _load_program(args)
    instance = _load_instance(args)
    answer = _parse_answer(args.answer)
    endo_only = args.endogenous_only
    if args.mode == "decide":
        return _decision(args, decide_vsefp(program, instance, answer, endo_only))
    if args.mode == "side-effect-free":
        best = view_side_effect_free(program, instance, answer, endo_only)
        _emit(args, ",".join(sorted_ids(best)) if best is not None else "none",
              {"deletion": sorted_ids(best) if best is not None else None})
        return 0
    if args.mode == "side-effect-free-all":
        family = view_side_effect_free_all(program, instance, answer, endo_only)
    else:
        family = min_source_side_effect(program, instance, answer, endo_only)
    _emit(args, "\n".join(",".join(sorted_ids(s)) for s in family) or "(none)",
          {"deletions": [sorted_ids(s) for s in family]})
    return 0


def _cmd_check(args) -> int:
    instance = _load_instance(args)
    sigma = _load_constraints(args)
    bad = violations(instance, sigma)
    if bad:
        _emit(args, "inconsistent\n" + "\n".join(bad), {"consistent": False, "violations": bad})
    else:
        _emit(args, "consistent", {"consistent": True, "violations": []})
    return 0


def _cmd_examples(args) -> int:
    rows = run_all()
    lines = []
    failed = 0
    for name, ok, detail in rows:
        if ok:
            lines.append(f"ok   {name}")
        else:
            failed += 1
            lines.append(f"FAIL {name} ({detail})")
    lines.append(f"{len(rows) - failed} of {len(rows)} checks passed")
    _emit(args, "\n".join(lines),
          {"checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in rows]})
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Argument wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="querycause",
        description="Causes, responsibility, abduction, and delete propagation "
        "for Datalog query answers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, program=True, database=True, answer=False, constraints=False):
        if program:
            p.add_argument("-p", "--program", required=True, help="query program file")
        if database:
            p.add_argument("-d", "--database", required=True, help="database instance file")
        if constraints:
            p.add_argument("-c", "--constraints", help="integrity constraints file")
        if answer:
            p.add_argument("-a", "--answer", default="",
                           help="answer tuple, comma-separated constants")
        p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("eval", help="evaluate the query and print its answers")
    common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("causes", help="causes, contingencies, responsibilities")
    common(p, answer=True)
    p.add_argument("--tau", help="tuple id to inspect")
    p.add_argument("--v", help="responsibility threshold (rational, e.g. 1/2)")
    p.add_argument("--mode", choices=("report", "cdp", "rdp", "cfdp"), default="report")
    p.set_defaults(func=_cmd_causes)

    p = sub.add_parser("vc-causes", help="view-conditioned causes")
    common(p, answer=True)
    p.add_argument("--tau", help="tuple id to inspect")
    p.add_argument("--v", help="responsibility threshold (rational)")
    p.add_argument("--strict-vc", action="store_true",
                   help="require contingencies that preserve the rest of the view on their own")
    p.set_defaults(func=_cmd_vc_causes)

    p = sub.add_parser("abduce", help="minimal abductive diagnoses")
    common(p)
    p.add_argument("--hyp", help="hypotheses file; omitted: endogenous facts of -d")
    p.add_argument("--obs", required=True, help='observation, e.g. "ans" or "Ans(c,e)"')
    p.set_defaults(func=_cmd_abduce)

    p = sub.add_parser("ic-causes", help="causes in the presence of integrity constraints")
    common(p, answer=True, constraints=True)
    p.add_argument("--tau", help="tuple id to inspect")
    p.set_defaults(func=_cmd_ic_causes)

    p = sub.add_parser("delprop", help="delete propagation for one answer")
    common(p, answer=True)
    p.add_argument("--mode",
                   choices=("min-source", "side-effect-free", "side-effect-free-all", "decide"),
                   default="min-source")
    p.add_argument("--endogenous-only", action="store_true",
                   help="delete only endogenous facts")
    p.set_defaults(func=_cmd_delprop)

    p = sub.add_parser("check", help="check an instance against constraints")
    common(p, program=False, constraints=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("examples", help="replay the built-in worked examples")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QueryCauseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
