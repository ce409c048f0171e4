"""Command line front end: ``ppmod {enumerate,decompose,characters,verify} --n N``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import perm_core
from . import pipeline as pl
from .fps_calculus import MuLabel
from .gf2_engine import DEFAULT_PRECISION, EnumerationBound

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep the message terse
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppmod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, need_n: bool = True) -> None:
        p.add_argument("--n", type=int, required=need_n, help="half the degree, 1..5")
        p.add_argument("--json", metavar="PATH", help="write the JSON report here")
        p.add_argument("--max-elements", type=int, default=perm_core.DEFAULT_CAP,
                       help="cap on any enumerated group")

    p = sub.add_parser("enumerate", help="list labels, W sets and vertices")
    common(p)
    p = sub.add_parser("decompose", help="split k Xi_2n into indecomposables")
    common(p)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="lift modulo 2^k")
    p = sub.add_parser("characters", help="closed-form component characters")
    common(p, need_n=False)
    p.add_argument("--mu", help="single label written (4t,2s)")
    p = sub.add_parser("verify", help="run every acceptance check for one n")
    common(p)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="lift modulo 2^k")
    p.add_argument("--skip-decompose", action="store_true",
                   help="only run checks that do not need the decomposition")
    p.add_argument("--timings", action="store_true", help="include timings in the JSON report")
    return parser


def _render_enumerate(data: dict[str, Any]) -> str:
    rows = [[r["mu"], r["s"], r["t"], len(r["W_members"]), r["vertex"], r["vertex_order"]]
            for r in data["labels"]]
    return pl.render_table(["mu", "s", "t", "|W|", "vertex", "order"], rows)


def _render_decompose(data: dict[str, Any]) -> str:
    rows = [[c["dimension"], c["mu"], c["vertex"], c["vertex_order"],
             " ".join(f"{k}:{v}" for k, v in c["brauer_quotient_dims"].items())]
            for c in data["components"]]
    return pl.render_table(["dim", "phi match", "vertex", "order", "Brauer quotient dims"], rows)


def _render_characters(data: dict[str, Any]) -> str:
    classes = data["classes"]
    rows = [[r["mu"]] + [r["values"][c] for c in classes] for r in data["rows"]]
    out = pl.render_table(["mu"] + classes, rows)
    if "sum_equals_permutation_character" in data:
        out += f"\nsum equals permutation character: {data['sum_equals_permutation_character']}"
    return out


def _render_verify(report: pl.VerificationReport) -> str:
    lines = [f"{name:26s} {res.status.upper()}" for name, res in report.checks.items()]
    lines.append(f"{'overall':26s} {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines)


def _write_json(path: str | None, payload: dict[str, Any]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_elements < 1:
        print("ppmod: --max-elements must be positive", file=sys.stderr)
        return EXIT_USAGE
    saved_cap, perm_core.DEFAULT_CAP = perm_core.DEFAULT_CAP, args.max_elements
    try:
        if args.command == "enumerate":
            data = pl.cmd_enumerate(args.n)
            print(_render_enumerate(data))
            _write_json(args.json, {"schema": pl.SCHEMA_VERSION, **data})
            return EXIT_PASS
        if args.command == "decompose":
            data = pl.cmd_decompose(args.n, args.precision)
            print(_render_decompose(data))
            _write_json(args.json, {"schema": pl.SCHEMA_VERSION, **data})
            return EXIT_PASS if all(c["mu"] for c in data["components"]) else EXIT_FAIL
        if args.command == "characters":
            mu = MuLabel.parse(args.mu) if args.mu else None
            data = pl.cmd_character(args.n, mu)
            print(_render_characters(data))
            _write_json(args.json, {"schema": pl.SCHEMA_VERSION, **data})
            return EXIT_PASS
        report = pl.cmd_verify(args.n, args.precision, args.skip_decompose)
        print(_render_verify(report))
        _write_json(args.json, report.to_json(with_timings=args.timings))
        return EXIT_PASS if report.passed else EXIT_FAIL
    except (pl.UsageError, perm_core.GroupTooLarge, EnumerationBound, ValueError) as exc:
        print(f"ppmod: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        perm_core.DEFAULT_CAP = saved_cap


if __name__ == "__main__":
    sys.exit(main())
