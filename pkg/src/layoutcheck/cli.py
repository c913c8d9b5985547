"""``layoutcheck`` command line.

Exit codes: 0 deserializable (or success), 1 not deserializable,
2 invalid layout, 3 syntax error, 4 oracle disagreement.
"""
from __future__ import annotations

import argparse
import json
import sys

from .checker import check, check_flat, check_flat_unsound
from .dsl import ParseError, parse_layout
from .model import LayoutError, format_label, validate
from .oracle import cross_check_unwindings, naive_closure
from .preprocess import is_forward_only, prune_pointers, shrink_pointers
from .trace import export_graph, format_art, format_trace, kb_to_json, render_trace
from .transform import DEFAULT_UNWIND_CAP, UnwindLimitError, unwind

EXIT_OK, EXIT_REJECTED, EXIT_INVALID, EXIT_SYNTAX, EXIT_ORACLE = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str):
    layout = parse_layout(_read(path))
    report = validate(layout)
    for w in report.warnings:
        print(f"warning: {format_label(w.label)}: {w.message}", file=sys.stderr)
    if not report.valid:
        for v in report.violations:
            print(f"invalid: {format_label(v.label)} [{v.constraint}] {v.message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return layout


def _verdict_code(verdict) -> int:
    return EXIT_OK if verdict.deserializable else EXIT_REJECTED


def cmd_check(args) -> int:
    layout = _load(args.file)
    if args.flat:
        verdict = check_flat(layout)
    elif args.unsound:
        verdict = check_flat_unsound(layout)
    else:
        verdict = check(layout)
    out = verdict.to_json()
    code = _verdict_code(verdict)

    if args.oracle:
        problems = []
        if naive_closure(verdict.kb) != verdict.closure:
            problems.append("engine closure differs from the naive fixpoint")
        if not layout.is_flat and not (args.flat or args.unsound):
            try:
                report = cross_check_unwindings(layout, 2)
            except UnwindLimitError as exc:
                out["oracleNotes"] = [str(exc)]
            else:
                problems.extend(f"unwinding {m} is not deserializable" for m in report.violations)
                out["oracleNotes"] = report.notes
        out["oracle"] = "ok" if not problems else problems
        if problems:
            code = EXIT_ORACLE

    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(out["status"])
        for m in out["missing"]:
            src = "" if m["source"] == m["label"] else f" (source {m['source']})"
            print(f"  unknown {m['kind']} at {m['label']}{src}")
        if args.oracle:
            print(f"oracle: {out['oracle'] if out['oracle'] == 'ok' else '; '.join(out['oracle'])}")
            for note in out.get("oracleNotes", []):
                print(f"  note: {note}")
    return code


def cmd_trace(args) -> int:
    layout = _load(args.file)
    verdict = check(layout)
    rows = render_trace(verdict.graph, verdict.layout)
    print(format_art(rows, verdict.layout) if args.art else format_trace(rows))
    return EXIT_OK


def cmd_graph(args) -> int:
    layout = _load(args.file)
    verdict = check(layout)
    if args.kb:
        print(json.dumps(kb_to_json(verdict.kb), indent=2))
    else:
        sys.stdout.write(export_graph(verdict.graph, args.format))
    return EXIT_OK


def cmd_preprocess(args) -> int:
    layout = _load(args.file)
    if args.forward_only:
        print("forward-only" if is_forward_only(layout) else "has backward pointers")
    default = not (args.shrink or args.prune or args.forward_only)
    if args.shrink or (default and layout.is_flat):
        layout = shrink_pointers(layout)
    if args.prune or default:
        layout = prune_pointers(layout)
    if args.shrink or args.prune or default:
        print(layout)
    return EXIT_OK


def cmd_unwind(args) -> int:
    layout = _load(args.file)
    for member in unwind(layout, args.n, args.cap):
        print(member)
    return EXIT_OK


def cmd_fmt(args) -> int:
    print(parse_layout(_read(args.file)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layoutcheck", description="Decide whether a bit layout can be parsed unambiguously.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="print the verdict")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--flat", action="store_true", help="repetition-free check only")
    mode.add_argument("--unsound", action="store_true", help="do not double repetition bodies")
    p.add_argument("--oracle", action="store_true", help="cross-check with the naive fixpoint and unwindings")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="print the derivation steps")
    p.add_argument("file")
    p.add_argument("--art", action="store_true", help="consumed/buffered chart instead of a list")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("graph", help="export the inference graph")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--kb", action="store_true", help="export the ground knowledge base (JSON) instead")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("preprocess", help="shrink and prune pointers")
    p.add_argument("file")
    p.add_argument("--shrink", action="store_true")
    p.add_argument("--prune", action="store_true")
    p.add_argument("--forward-only", action="store_true", help="report whether all pointers point forward")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("unwind", help="list flat unwindings")
    p.add_argument("file")
    p.add_argument("-n", type=int, default=2, help="maximum copies per repetition")
    p.add_argument("--cap", type=int, default=DEFAULT_UNWIND_CAP)
    p.set_defaults(func=cmd_unwind)

    p = sub.add_parser("fmt", help="print the layout in canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_fmt)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except (LayoutError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
