"""Command-line front end.

Exit codes: 0 success (proved / checked), 1 check failed or search
exhausted, 2 parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import fixtures
from .formulas import Sequent
from .kernel import VARIANT_NAMES, VARIANTS, CheckReport, LogicVariant, RuleName, check_derivation, rule_enabled
from .search import Equiv, Exhausted, Proved, SearchConfig, SearchResult, equivalent, prove
from .semantics import BellKind, epr_trials
from .syntax import ParseError, parse_blf, parse_derivation, parse_formula, parse_sequent, print_derivation

OK, FAILED, USAGE = 0, 1, 2
DEFAULT_DEPTH = 8


def default_depth() -> int:
    raw = os.environ.get("BASIQ_DEPTH")
    if raw is None:
        return DEFAULT_DEPTH
    try:
        depth = int(raw)
    except ValueError:
        raise SystemExit(f"BASIQ_DEPTH must be an integer, got {raw!r}")
    return depth


def _emit(args, text: str, payload: dict):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _report_json(report: CheckReport) -> dict:
    bad = {f.path: f for f in report.failures}
    return {
        "variant": report.variant.name,
        "ok": report.ok,
        "nodes": [
            {
                "path": ".".join(map(str, path)) or "root",
                "rule": node.rule,
                "label": node.label,
                "sequent": str(node.conclusion),
                "ok": path not in bad,
                "error": bad[path].kind.value if path in bad else None,
                "reason": bad[path].reason if path in bad else None,
            }
            for path, node in report.nodes
        ],
    }


def _report_text(report: CheckReport) -> str:
    bad = {f.path: f for f in report.failures}
    lines = []
    for path, node in report.nodes:
        name = node.rule if node.label is None else f"{node.rule} [{node.label}]"
        indent = "  " * len(path)
        status = "ok  " if path not in bad else "FAIL"
        lines.append(f"{status} {indent}{name}: {node.conclusion}")
        if path in bad:
            lines.append(f"     {indent}  {bad[path].reason}")
    verdict = "checked" if report.ok else f"{len(report.failures)} failing node(s)"
    lines.append(f"{report.variant}: {verdict}")
    return "\n".join(lines)


def _result_json(result: SearchResult) -> dict:
    if isinstance(result, Proved):
        return {
            "outcome": "proved",
            "depth": result.depth,
            "nodes_explored": result.nodes_explored,
            "derivation": print_derivation(result.derivation),
        }
    return {
        "outcome": "exhausted",
        "depth": result.depth,
        "nodes_explored": result.nodes_explored,
        "limit_hit": result.limit_hit,
        "note": "no proof within the search bounds; not a proof of underivability",
    }


def _exhausted_text(goal: Sequent, r: Exhausted, v: LogicVariant) -> str:
    scope = "node limit reached" if r.limit_hit else "all branches explored"
    return (
        f"no proof of {goal} in {v} up to depth {r.depth} "
        f"({r.nodes_explored} nodes, {scope}); bounded evidence only"
    )


def cmd_check(args) -> int:
    path = fixtures.resolve(args.file)
    d = parse_derivation(path.read_bytes())
    report = check_derivation(d, args.variant)
    _emit(args, _report_text(report), _report_json(report))
    return OK if report.ok else FAILED


def _goals(arg: str) -> List[Sequent]:
    p = Path(arg)
    if arg.endswith(".blf") and p.exists():
        items = parse_blf(p.read_bytes())
        return [it for it in items if isinstance(it, Sequent)]
    return [parse_sequent(arg)]


def cmd_prove(args) -> int:
    cfg = SearchConfig(max_depth=args.depth, max_nodes=args.max_nodes)
    code = OK
    payload = []
    texts = []
    for goal in _goals(args.sequent):
        r = prove(goal, args.variant, cfg)
        payload.append({"goal": str(goal), "variant": args.variant.name, **_result_json(r)})
        if isinstance(r, Proved):
            texts.append(print_derivation(r.derivation).rstrip("\n"))
        else:
            texts.append(_exhausted_text(goal, r, args.variant))
            code = FAILED
    _emit(args, "\n\n".join(texts), payload[0] if len(payload) == 1 else {"results": payload})
    return code


def cmd_equiv(args) -> int:
    f, g = parse_formula(args.f), parse_formula(args.g)
    cfg = SearchConfig(max_depth=args.depth, max_nodes=args.max_nodes)
    res = equivalent(f, g, args.variant, cfg)
    payload = {
        "f": str(f),
        "g": str(g),
        "variant": args.variant.name,
        "verdict": "equiv" if isinstance(res, Equiv) else "unresolved",
        "left_to_right": _result_json(res.left_to_right),
        "right_to_left": _result_json(res.right_to_left),
    }
    if isinstance(res, Equiv):
        text = "\n".join(
            [
                f"Equiv: {f} and {g} are interderivable in {args.variant}",
                print_derivation(res.left_to_right.derivation),
                print_derivation(res.right_to_left.derivation),
            ]
        )
    else:
        lines = [f"Unresolved: {f} vs {g} in {args.variant} (bounded evidence only)"]
        for goal, r in (
            (Sequent((f,), (g,)), res.left_to_right),
            (Sequent((g,), (f,)), res.right_to_left),
        ):
            if isinstance(r, Proved):
                lines.append(f"proved {goal} at depth {r.depth}")
            else:
                lines.append(_exhausted_text(goal, r, args.variant))
        text = "\n".join(lines)
    _emit(args, text, payload)
    return OK if isinstance(res, Equiv) else FAILED


def cmd_epr_demo(args) -> int:
    pairs = epr_trials(args.kind, args.trials, args.seed)
    corr = sum(a == b for a, b in pairs) / len(pairs)
    report = check_derivation(fixtures.load("epr_rule"), VARIANTS["B"])
    lines = [f"Bell state {args.kind.value}, {args.trials} trial(s), seed {args.seed}"]
    for t, (a, b) in enumerate(pairs[:10]):
        lines.append(f"trial {t}: Alice measures {a}, Bob then measures {b}")
    lines.append(f"equal-outcome fraction: {corr}")
    lines.append("logical side, EPR rule derivation:")
    lines.append(_report_text(report))
    payload = {
        "kind": args.kind.value,
        "trials": args.trials,
        "seed": args.seed,
        "first_trials": [{"alice": a, "bob": b} for a, b in pairs[:10]],
        "correlation": corr,
        "epr_fixture": _report_json(report),
    }
    _emit(args, "\n".join(lines), payload)
    return OK if report.ok else FAILED


_FAMILIES = [
    ("exchange", [RuleName.EXCH_L, RuleName.EXCH_R]),
    ("cut", [RuleName.CUT]),
    ("connectives", [RuleName.WITH_FORM, RuleName.PAR_FORM]),
    ("@/$", [RuleName.ENT_FORM]),
    ("EPR", [RuleName.EPR]),
    ("contraction/weakening", [RuleName.CONTR_L]),
]


def cmd_variants(args) -> int:
    rows = []
    for v in VARIANTS.values():
        rows.append(
            {
                "name": v.name,
                "reading": VARIANT_NAMES[v.name],
                "structural": v.structural,
                "left_context": v.left_context,
                "right_context": v.right_context,
                "rules": {fam: all(rule_enabled(r, v) for r in rules) for fam, rules in _FAMILIES},
            }
        )
    lines = [f"{'variant':8} {'S':2} {'L':2} {'R':2} enabled rule families"]
    for row in rows:
        flags = " ".join(f"{'y' if row[k] else '-':2}" for k in ("structural", "left_context", "right_context"))
        fams = ", ".join(fam for fam, on in row["rules"].items() if on)
        lines.append(f"{row['name']:8} {flags} {fams}  ({row['reading']})")
    _emit(args, "\n".join(lines), {"variants": rows})
    return OK


def _variant(name: str) -> LogicVariant:
    try:
        return LogicVariant.from_name(name)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive(raw: str) -> int:
    n = int(raw)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    depth = default_depth()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="output format (default: text)")

    logic = argparse.ArgumentParser(add_help=False)
    logic.add_argument(
        "--variant", type=_variant, default=VARIANTS["B"], metavar="{" + ",".join(VARIANTS) + "}",
        help="vertex of the cube of logics (default: B)",
    )

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--depth", type=_positive, default=depth, help=f"search depth (default: {depth}; env BASIQ_DEPTH)")
    bounds.add_argument("--max-nodes", type=_positive, default=1_000_000, help="node budget (default: 1000000)")

    p = argparse.ArgumentParser(prog="basiq", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common, logic], help="check a .blp derivation")
    c.add_argument("file", help="derivation script, or the name of a bundled fixture")
    c.set_defaults(func=cmd_check)

    pr = sub.add_parser("prove", parents=[common, logic, bounds], help="search for a proof of a sequent")
    pr.add_argument("sequent", help="sequent text, or a .blf file of sequents")
    pr.set_defaults(func=cmd_prove)

    e = sub.add_parser("equiv", parents=[common, logic, bounds], help="test mutual derivability")
    e.add_argument("f")
    e.add_argument("g")
    e.set_defaults(func=cmd_equiv)

    d = sub.add_parser("epr-demo", parents=[common], help="measure Bell pairs next to the EPR derivation")
    d.add_argument("--kind", type=BellKind, default=BellKind.PHI_PLUS, metavar="{" + ",".join(k.value for k in BellKind) + "}")
    d.add_argument("--trials", type=_positive, default=10)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_epr_demo)

    var = sub.add_parser("variants", parents=[common], help="list the cube of logics")
    var.set_defaults(func=cmd_variants)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return USAGE
    except (FileNotFoundError, IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
