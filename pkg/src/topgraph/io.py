"""Graph and family file formats, and the JSON reports behind the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .fock import (
    build_truncated_fock,
    ck_defect_check,
    conditional_expectation,
    random_element,
    relation_suite,
    sigma1,
    t_n,
)
from .graph import OMEGA, Graph, GraphError, build_graph, classify_vertices
from .hilbert import VertexFunction
from .ktheory import k_groups
from .paths import cycles_without_entrances, path_space
from .verify import OperatorFamily, verify_ck_family, verify_toeplitz_family

COMMANDS = ("analyze", "ktheory", "fock", "paths", "check-family")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class ParseError(GraphError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def parse_graph_file(text: str) -> Graph:
    vertices: list[str] = []
    edges: list[tuple] = []
    lines: dict[str, int] = {}
    vline: dict[str, int] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "vertex":
            if len(tok) != 2:
                raise ParseError("expected 'vertex <id>'", no)
            if tok[1] in vline:
                raise ParseError(f"duplicate vertex id {tok[1]!r}", no)
            vline[tok[1]] = no
            vertices.append(tok[1])
        elif tok[0] == "edge":
            if len(tok) not in (4, 5):
                raise ParseError("expected 'edge <id> <dom> <ran> [<mult>|inf]'", no)
            mult: Any = 1
            if len(tok) == 5:
                if tok[4] in ("inf", "omega"):
                    mult = OMEGA
                else:
                    try:
                        mult = int(tok[4])
                    except ValueError:
                        raise ParseError(f"bad multiplicity {tok[4]!r}", no) from None
                    if mult < 1:
                        raise ParseError(f"multiplicity must be >= 1, got {mult}", no)
            if tok[1] in lines:
                raise ParseError(f"duplicate edge id {tok[1]!r}", no)
            lines[tok[1]] = no
            edges.append((tok[1], tok[2], tok[3], mult))
        else:
            raise ParseError(f"unknown directive {tok[0]!r}", no)
    declared = set(vertices)
    for eid, dom, ran, _ in edges:
        for v in (dom, ran):
            if v not in declared:
                raise ParseError(f"edge {eid!r}: undeclared vertex {v!r}", lines[eid])
    try:
        return build_graph(vertices, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_graph(g: Graph) -> str:
    out = [f"vertex {v}" for v in g.vertices]
    for e in g.edges:
        tail = "" if e.mult == 1 else (" inf" if e.infinite else f" {int(e.mult)}")
        out.append(f"edge {e.id} {e.dom} {e.ran}{tail}")
    return "\n".join(out) + "\n"


def _matrix_from_json(obj, dim: int, where: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: entries must be [re, im] pairs") from None
    if arr.shape != (dim, dim, 2):
        raise ParseError(f"{where}: expected a {dim}x{dim} matrix of [re, im] pairs, "
                         f"got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def parse_family_file(text: str) -> tuple[OperatorFamily, list[int] | None]:
    """``{"dim": k, "P": {v: M}, "S": {e: M}, "restrict": [i, ...]}``; ``restrict`` optional."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict) or not {"dim", "P", "S"} <= obj.keys():
        raise ParseError("family file needs keys 'dim', 'P' and 'S'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("'dim' must be a positive integer")
    P = {str(k): _matrix_from_json(v, dim, f"P[{k}]") for k, v in obj["P"].items()}
    S = {str(k): _matrix_from_json(v, dim, f"S[{k}]") for k, v in obj["S"].items()}
    restrict = obj.get("restrict")
    if restrict is not None and not all(isinstance(i, int) for i in restrict):
        raise ParseError("'restrict' must be a list of integer indices")
    return OperatorFamily(dim, P, S), restrict


def format_family(fam: OperatorFamily, restrict=None) -> str:
    obj: dict[str, Any] = {
        "dim": fam.space_dim,
        "P": {k: matrix_to_json(m) for k, m in sorted(fam.P.items())},
        "S": {k: matrix_to_json(m) for k, m in sorted(fam.S.items())},
    }
    if restrict is not None:
        obj["restrict"] = list(map(int, restrict))
    return json.dumps(obj)


@dataclass
class Options:
    depth: int = 4
    tol: float = 1e-9
    max_dim: int = 20000
    seed: int = 0
    family: OperatorFamily | None = None
    restrict: list[int] | None = None
    toeplitz_only: bool = False


def classification_section(g: Graph) -> dict:
    c = classify_vertices(g)
    return {k: sorted(getattr(c, k)) for k in ("sce", "fin", "inf", "rg", "sg")}


def condition_l_section(g: Graph) -> dict:
    loops = cycles_without_entrances(g)
    return {
        "topologically_free": not loops,
        "witness": [list(lp.edges) for lp in loops],
        "base_points": [lp.base_point for lp in loops],
    }


def k_theory_section(g: Graph) -> dict:
    kg = k_groups(g)
    return {
        "K0": kg.K0.as_dict(),
        "K1": kg.K1.as_dict(),
        "delta": {"rows": list(kg.delta.rows), "cols": list(kg.delta.cols),
                  "entries": kg.delta.entries},
    }


def fock_section(g: Graph, opts: Options) -> dict:
    b = build_truncated_fock(g, opts.depth, opts.max_dim)
    rng = np.random.default_rng(opts.seed)
    res = relation_suite(b, rng)
    rg = classify_vertices(g).rg
    f = VertexFunction.from_dict(
        g, {v: complex(*rng.standard_normal(2)) for v in sorted(rg)})
    defect, defect_ok = ck_defect_check(b, f)
    upper = np.abs(defect.matrix[:, b.offsets[1]:]).max(initial=0.0) if b.depth else 0.0
    res["defect_upper_levels"] = float(upper)
    if b.depth:
        x = t_n(b, random_element(g, 1, rng)) @ sigma1(b, random_element(g, 1, rng)).H
        e1 = conditional_expectation(b, x)
        res["expectation_idempotence"] = float(
            np.abs(conditional_expectation(b, e1).matrix - e1.matrix).max(initial=0.0))
    res = {k: float(v) for k, v in res.items()}
    return {
        "depth": opts.depth,
        "dimension": b.dim,
        "tol": opts.tol,
        "seed": opts.seed,
        "residuals": res,
        "defect_identity": defect_ok,
        "passed": defect_ok and all(v <= opts.tol for v in res.values()),
    }


def paths_section(g: Graph, opts: Options) -> dict:
    if not g.finite:
        raise GraphError("path enumeration needs finite multiplicities")
    levels = {}
    for n in range(opts.depth + 1):
        levels[str(n)] = [{"edges": list(p.edges), "dom": p.dom, "ran": p.ran}
                          for p in path_space(g, n)]
    return {"depth": opts.depth,
            "counts": {k: len(v) for k, v in levels.items()},
            "levels": levels}


def family_section(g: Graph, opts: Options) -> dict:
    if opts.family is None:
        raise GraphError("check-family needs a family file")
    check = verify_toeplitz_family if opts.toeplitz_only else verify_ck_family
    rep = check(g, opts.family, opts.tol, opts.restrict)
    out = rep.as_dict()
    out["mode"] = "toeplitz" if opts.toeplitz_only else "cuntz-krieger"
    out["restricted"] = opts.restrict is not None
    return out


def generate_report(command: str, g: Graph, opts: Options | None = None) -> tuple[dict, int]:
    """Build the report for ``command``; returns ``(report, exit_code)``.

    Input problems raise :class:`GraphError`; the CLI maps them to exit code 2.
    """
    opts = opts or Options()
    if command not in COMMANDS:
        raise GraphError(f"unknown command {command!r}")
    report: dict[str, Any] = {"command": command}
    code = EXIT_OK
    if command == "analyze":
        report["classification"] = classification_section(g)
        report["condition_l"] = condition_l_section(g)
        report["k_theory"] = k_theory_section(g)
    elif command == "ktheory":
        report["k_theory"] = k_theory_section(g)
    elif command == "fock":
        if not g.finite:
            raise GraphError("the Fock representation needs finite multiplicities")
        report["fock"] = fock_section(g, opts)
        code = EXIT_OK if report["fock"]["passed"] else EXIT_FAIL
    elif command == "paths":
        report["paths"] = paths_section(g, opts)
    else:
        report["family"] = family_section(g, opts)
        code = EXIT_OK if report["family"]["ok"] else EXIT_FAIL
    return report, code


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
