"""Command-line entry point.

Subcommands: analyze (invariants and K-groups), verify (operator identity
suites on a truncated word basis), kappa (specification counting and
enumeration), tiles (the tile alphabet, optionally as Wang-tile JSON),
subshift (rectangle counting).  Input is a JSON document:

    {"A": [[...]], "B": [[...]], "kappa": "lex" | "exchange" | [[[...]]]}

where an explicit kappa lists [[alpha_id, b_id], [a_id, beta_id]] pairs.
Exit codes: 0 success, 1 a verified identity failed, 2 invalid input or
an exceeded cap, 3 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .errors import CrossCheckFailure, QuadtexError, TruncationTooShallow
from .fock import DEFAULT_BASIS_CAP, ck_generators, fock_basis, verify_fock_identities, verify_relations_hk
from .ktheory import analyze_system
from .subshift import DEFAULT_ROW_CAP, count_rectangles, enumerate_rectangles, wang_tile_list
from .textile import build_system, count_specifications, enumerate_kappas

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_CROSS_CHECK = 3

# the CLI only runs identities whose compared block reaches a level with
# content; shallower ones are reported as skipped by name
CLI_HEADROOM = 2


def _load_input(path: str, kappa_override: str | None):
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if "A" not in doc or "B" not in doc:
        raise QuadtexError('input document needs "A" and "B" matrices')
    kappa = doc.get("kappa", "lex")
    if kappa_override and kappa_override != "explicit":
        kappa = kappa_override
    if kappa == "explicit":
        kappa = doc.get("kappa")
        if not isinstance(kappa, list):
            raise QuadtexError('kappa "explicit" needs a pair list in the input document')
    return build_system(doc["A"], doc["B"], kappa)


def _emit(payload: dict, fmt: str, render_text) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        render_text(payload)


def _matrix_lines(name: str, matrix) -> list[str]:
    lines = [f"{name} ="]
    for row in matrix:
        lines.append("  [" + " ".join(str(v) for v in row) + "]")
    return lines


def cmd_analyze(args) -> int:
    ts = _load_input(args.input, args.kappa)
    payload = analyze_system(ts)
    payload["command"] = "analyze"

    def render(p):
        print(f"corner pairs: n = {p['n']}")
        for line in _matrix_lines("A_kappa", p["A_kappa"]):
            print(line)
        for line in _matrix_lines("B_kappa", p["B_kappa"]):
            print(line)
        print(f"K0 = {p['K0_text']}, K1 = {p['K1_text']}")
        structure = p["structure"]
        print(
            "structure: irreducible={irreducible} condition_I={condition_I} "
            "has_zero_row={has_zero_row}".format(**structure)
        )
        print(f"cross-check: {p['cross_check']}")
        for warning in p["warnings"]:
            print(f"warning: {warning}")

    _emit(payload, args.format, render)
    return EXIT_OK


def cmd_verify(args) -> int:
    ts = _load_input(args.input, args.kappa)
    cap = int(os.environ.get("QUADTEX_BASIS_CAP", DEFAULT_BASIS_CAP))
    tf = fock_basis(ts, args.level, cap=cap)
    reports = [
        verify_fock_identities(tf, headroom=CLI_HEADROOM),
        verify_relations_hk(tf),
        ck_generators(tf)[2],
    ]
    payload = {
        "command": "verify",
        "max_level": args.level,
        "reports": [r.to_jsonable() for r in reports],
        "passed": all(r.passed for r in reports),
    }

    def render(p):
        for report in p["reports"]:
            print(f"== {report['title']} (levels up to {report['max_level']}) ==")
            for check in report["identities"]:
                line = f"  [{check['status']:>7}] {check['identity_id']}: {check['formula']}"
                if check.get("notice"):
                    line += f"  ({check['notice']})"
                print(line)
                if check.get("witness"):
                    print(f"           witness: {check['witness']}")
        print("all passed" if p["passed"] else "FAILURES above")

    _emit(payload, args.format, render)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


def cmd_kappa(args) -> int:
    ts = _load_input(args.input, args.kappa)
    total = count_specifications(ts.matrix_a, ts.matrix_b)
    shown = []
    for spec in enumerate_kappas(ts.matrix_a, ts.matrix_b, limit=args.limit):
        shown.append(
            [[[pre[0].id, pre[1].id], [img[0].id, img[1].id]] for pre, img in spec.pairs]
        )
    payload = {
        "command": "kappa",
        "count": total,
        "listed": len(shown),
        "specifications": shown,
    }

    def render(p):
        print(f"{p['count']} specifications")
        for i, spec in enumerate(p["specifications"]):
            pairs = ", ".join(f"({a},{b})->({c},{d})" for (a, b), (c, d) in spec)
            print(f"  #{i}: {pairs}")

    _emit(payload, args.format, render)
    return EXIT_OK


def cmd_tiles(args) -> int:
    ts = _load_input(args.input, args.kappa)
    records = wang_tile_list(ts)
    if args.emit == "wang":
        text = json.dumps(records, indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    payload = {"command": "tiles", "count": len(records), "tiles": records}

    def render(p):
        print(f"{p['count']} tiles")
        for record in p["tiles"]:
            print(
                "  #{id}: top={top} right={right} left={left} bottom={bottom} "
                "vertex={vertex}".format(**record)
            )

    _emit(payload, args.format, render)
    return EXIT_OK


def cmd_subshift(args) -> int:
    ts = _load_input(args.input, args.kappa)
    count = count_rectangles(ts, args.rows, args.cols, cap=args.cap)
    payload = {
        "command": "subshift",
        "rows": args.rows,
        "cols": args.cols,
        "count": count,
    }
    if args.limit:
        patches = []
        for rect in enumerate_rectangles(ts, args.rows, args.cols, limit=args.limit, cap=args.cap):
            patches.append(
                [[ts.tile_index[t] for t in row] for row in rect.cells]
            )
        payload["patches"] = patches

    def render(p):
        print(f"{p['rows']}x{p['cols']} patches: {p['count']}")
        for patch in p.get("patches", []):
            print("  " + "; ".join(" ".join(str(t) for t in row) for row in patch))

    _emit(payload, args.format, render)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadtex",
        description="Invariants and operator identity checks for commuting-matrix tile systems.",
    )
    parser.add_argument("--version", action="version", version=f"quadtex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="path to the JSON input document")
        p.add_argument(
            "--kappa",
            choices=["lex", "exchange", "explicit"],
            default=None,
            help="override the specification strategy from the input document",
        )
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("analyze", help="transition matrices, K-groups, structure checks")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="operator identity suites on the truncated word basis")
    common(p)
    p.add_argument("--level", type=int, default=4, help="truncation level (default 4)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kappa", help="count and enumerate specifications")
    common(p)
    p.add_argument("--limit", type=int, default=10, help="how many to list (default 10)")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("tiles", help="list the tile alphabet")
    common(p)
    p.add_argument("--emit", choices=["wang"], default=None, help="emit Wang-tile JSON records")
    p.add_argument("--out", default=None, help="write the emitted JSON to a file")
    p.set_defaults(func=cmd_tiles)

    p = sub.add_parser("subshift", help="count admissible rectangular patches")
    common(p)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--limit", type=int, default=0, help="also list up to this many patches")
    p.add_argument("--cap", type=int, default=DEFAULT_ROW_CAP)
    p.set_defaults(func=cmd_subshift)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TruncationTooShallow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CrossCheckFailure as exc:
        print(f"internal cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSS_CHECK
    except (QuadtexError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
