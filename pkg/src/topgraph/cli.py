"""Command line entry point: ``topgraph <command> GRAPH [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .graph import GraphError
from .io import (
    COMMANDS,
    EXIT_INPUT,
    Options,
    dumps_report,
    generate_report,
    parse_family_file,
    parse_graph_file,
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topgraph",
                                description="Analyze finite discrete topological graphs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("graph", type=Path, help="graph file ('vertex'/'edge' lines)")
    p.add_argument("family", type=Path, nargs="?",
                   help="JSON operator family (check-family only)")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--depth", type=int, default=4, help="Fock truncation / path depth")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-dim", type=int, default=20000, help="Fock dimension cap")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized relation checks")
    p.add_argument("--toeplitz-only", action="store_true",
                   help="check-family: skip the Cuntz-Krieger fullness relation")
    return p


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.3e}"
    if isinstance(x, list):
        return "[" + ", ".join(_fmt(y) for y in x) + "]"
    return str(x)


def render_text(report: dict) -> str:
    lines = []
    for section, body in report.items():
        if section == "command":
            continue
        lines.append(f"== {section} ==")
        if section == "paths":
            for n, c in body["counts"].items():
                lines.append(f"  |E^{n}| = {c}")
            continue
        for key, val in body.items():
            if isinstance(val, dict):
                lines.append(f"  {key}:")
                for k2, v2 in val.items():
                    lines.append(f"    {k2:<26} {_fmt(v2)}")
            else:
                lines.append(f"  {key:<28} {_fmt(val)}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(depth=args.depth, tol=args.tol, max_dim=args.max_dim, seed=args.seed,
                   toeplitz_only=args.toeplitz_only)
    try:
        g = parse_graph_file(args.graph.read_text(encoding="utf-8"))
        if args.command == "check-family":
            if args.family is None:
                raise GraphError("check-family needs a FAMILY argument")
            opts.family, opts.restrict = parse_family_file(args.family.read_text(encoding="utf-8"))
        elif args.family is not None:
            raise GraphError(f"{args.command} takes no family file")
        report, code = generate_report(args.command, g, opts)
    except (GraphError, OSError, ValueError) as exc:
        print(f"topgraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(dumps_report(report) if args.json else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
