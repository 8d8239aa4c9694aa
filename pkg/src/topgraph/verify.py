"""Check operator families {P_v}, {S_e} against the Toeplitz and Cuntz-Krieger relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .fock import FockBasis, opnorm, sigma0, sigma1
from .graph import Graph, GraphError, classify_vertices
from .hilbert import ModuleElement, VertexFunction

TOEPLITZ_RELATIONS = ("projection", "orthogonal_projections", "isometry",
                      "orthogonal_ranges", "range")


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    space_dim: int
    P: Mapping[str, np.ndarray]
    S: Mapping[str, np.ndarray]

    def __post_init__(self):
        for name, mats in (("P", self.P), ("S", self.S)):
            for k, m in mats.items():
                if np.shape(m) != (self.space_dim, self.space_dim):
                    raise GraphError(
                        f"{name}[{k}] has shape {np.shape(m)}, expected "
                        f"{(self.space_dim, self.space_dim)}")

    def conjugate(self, u: np.ndarray) -> "OperatorFamily":
        uh = u.conj().T
        return OperatorFamily(self.space_dim,
                              {k: u @ m @ uh for k, m in self.P.items()},
                              {k: u @ m @ uh for k, m in self.S.items()})


@dataclass
class CheckReport:
    residuals: dict[str, float]
    tol: float
    injective: bool
    worst: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> dict[str, bool]:
        return {k: r <= self.tol for k, r in self.residuals.items()}

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def as_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "passed": self.passed,
            "ok": self.ok,
            "injective": self.injective,
            "tol": self.tol,
            "worst": dict(self.worst),
        }


def _keys(g: Graph, fam: OperatorFamily):
    g = g.expanded()
    missing_p = sorted(set(g.vertices) - set(fam.P))
    missing_s = sorted(set(g.edge_ids) - set(fam.S))
    extra = sorted(set(fam.P) - set(g.vertices)) + sorted(set(fam.S) - set(g.edge_ids))
    if missing_p or missing_s or extra:
        raise GraphError(f"family does not match the graph: missing P {missing_p}, "
                         f"missing S {missing_s}, unknown {extra}")
    return g


def _restrictor(fam: OperatorFamily, restrict):
    if restrict is None:
        return lambda m: m
    cols = np.asarray(sorted(restrict), dtype=np.intp)
    if cols.size and (cols.min() < 0 or cols.max() >= fam.space_dim):
        raise GraphError("restriction indices out of range")
    return lambda m: m[:, cols]


def verify_toeplitz_family(g: Graph, fam: OperatorFamily, tol: float = 1e-9,
                           restrict=None) -> CheckReport:
    """Operator-norm residuals of the edge-wise Toeplitz relations.

    ``restrict`` optionally lists basis indices; every residual is then
    measured on the span of those basis vectors only (domain restriction).
    """
    g = _keys(g, fam)
    cut = _restrictor(fam, restrict)
    P = {k: np.asarray(m, dtype=complex) for k, m in fam.P.items()}
    S = {k: np.asarray(m, dtype=complex) for k, m in fam.S.items()}
    res = dict.fromkeys(TOEPLITZ_RELATIONS, 0.0)
    worst: dict[str, str] = {}

    def bump(name, where, m):
        r = opnorm(cut(m))
        if r > res[name]:
            res[name], worst[name] = r, where

    vs = g.vertices
    for v in vs:
        p = P[v]
        bump("projection", v, p @ p - p)
        bump("projection", v, p.conj().T - p)
        for w in vs:
            if w != v:
                bump("orthogonal_projections", f"{v},{w}", p @ P[w])
    for e in g.edges:
        s = S[e.id]
        bump("isometry", e.id, s.conj().T @ s - P[e.dom])
        bump("range", e.id, P[e.ran] @ s - s)
        for f in g.edges:
            if f.id != e.id:
                bump("orthogonal_ranges", f"{e.id},{f.id}", s.conj().T @ S[f.id])
    injective = all(opnorm(P[v]) > tol for v in vs)
    return CheckReport(res, tol, injective, worst)


def verify_ck_family(g: Graph, fam: OperatorFamily, tol: float = 1e-9,
                     restrict=None) -> CheckReport:
    """Toeplitz relations plus P_v = sum over r(e) = v of S_e S_e* at every regular v."""
    rep = verify_toeplitz_family(g, fam, tol, restrict)
    ge = g.expanded()
    cut = _restrictor(fam, restrict)
    rep.residuals["fullness"] = 0.0
    for v in sorted(classify_vertices(g).rg):
        acc = np.zeros((fam.space_dim, fam.space_dim), dtype=complex)
        for e in ge.edges:
            if e.ran == v:
                s = np.asarray(fam.S[e.id], dtype=complex)
                acc += s @ s.conj().T
        r = opnorm(cut(np.asarray(fam.P[v], dtype=complex) - acc))
        if r > rep.residuals["fullness"]:
            rep.residuals["fullness"], rep.worst["fullness"] = r, v
    return rep


def fock_family(b: FockBasis) -> tuple[OperatorFamily, list[int]]:
    """P_v = sigma0(delta_v), S_e = sigma1(delta_e) on the truncated Fock space.

    Also returns the basis indices of levels 0..N-1, where the Toeplitz
    relations hold despite the truncation.
    """
    g = b.graph.expanded()
    P = {v: sigma0(b, VertexFunction.delta(b.graph, v)).matrix for v in g.vertices}
    S = {e: sigma1(b, ModuleElement.delta(b.graph, e)).matrix for e in g.edge_ids}
    keep = list(range(b.offsets[b.depth])) if b.depth else list(range(b.dim))
    return OperatorFamily(b.dim, P, S), keep


def matrix_unit_family(g: Graph) -> OperatorFamily:
    """P_v = E_vv and S_e = E_{r(e), d(e)} in |E0| x |E0| matrices.

    Satisfies the relations when every vertex emits at most one edge and
    receives at most one edge, e.g. for cycles and permutation graphs.
    """
    g = g.expanded()
    idx = {v: i for i, v in enumerate(g.vertices)}
    k = len(idx)

    def unit(i, j):
        m = np.zeros((k, k), dtype=complex)
        m[i, j] = 1
        return m

    return OperatorFamily(k, {v: unit(i, i) for v, i in idx.items()},
                          {e.id: unit(idx[e.ran], idx[e.dom]) for e in g.edges})


def zero_family(g: Graph, dim: int = 1) -> OperatorFamily:
    g = g.expanded()
    z = np.zeros((dim, dim), dtype=complex)
    return OperatorFamily(dim, {v: z for v in g.vertices}, {e: z for e in g.edge_ids})
