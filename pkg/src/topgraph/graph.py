"""Finite discrete topological graphs and correspondences.

A correspondence from E0 to F0 is a finite edge list where every edge carries a
domain in E0, a range in F0 and a multiplicity.  A multiplicity of ``OMEGA``
stands for infinitely many parallel copies of the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

OMEGA = math.inf

Mult = Union[int, float]


class GraphError(ValueError):
    """Raised for malformed graph or correspondence data."""


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    dom: str
    ran: str
    mult: Mult = 1

    @property
    def infinite(self) -> bool:
        return self.mult == OMEGA


def _as_edge(rec) -> Edge:
    if isinstance(rec, Edge):
        return rec
    if isinstance(rec, Mapping):
        return Edge(str(rec["id"]), str(rec["dom"]), str(rec["ran"]), rec.get("mult", 1))
    rec = tuple(rec)
    if len(rec) == 3:
        return Edge(str(rec[0]), str(rec[1]), str(rec[2]))
    if len(rec) == 4:
        return Edge(str(rec[0]), str(rec[1]), str(rec[2]), rec[3])
    raise GraphError(f"cannot interpret edge record {rec!r}")


def _check_mult(e: Edge) -> Edge:
    m = e.mult
    if m == OMEGA:
        return e
    if isinstance(m, bool) or not float(m).is_integer():
        raise GraphError(f"edge {e.id!r}: multiplicity must be a positive integer or OMEGA")
    m = int(m)
    if m < 1:
        raise GraphError(f"edge {e.id!r}: multiplicity must be >= 1, got {m}")
    return Edge(e.id, e.dom, e.ran, m)


@dataclass(frozen=True)
class Correspondence:
    """Edges from ``dom_vertices`` to ``ran_vertices``, canonically ordered."""

    dom_vertices: tuple[str, ...]
    ran_vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        dom = tuple(sorted(set(self.dom_vertices)))
        ran = tuple(sorted(set(self.ran_vertices)))
        if len(dom) != len(self.dom_vertices) or len(ran) != len(self.ran_vertices):
            raise GraphError("duplicate vertex id")
        edges = tuple(sorted(_check_mult(_as_edge(e)) for e in self.edges))
        seen = set()
        ds, rs = set(dom), set(ran)
        for e in edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.dom not in ds:
                raise GraphError(f"edge {e.id!r}: undeclared domain vertex {e.dom!r}")
            if e.ran not in rs:
                raise GraphError(f"edge {e.id!r}: undeclared range vertex {e.ran!r}")
        object.__setattr__(self, "dom_vertices", dom)
        object.__setattr__(self, "ran_vertices", ran)
        object.__setattr__(self, "edges", edges)

    @property
    def finite(self) -> bool:
        return not any(e.infinite for e in self.edges)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def total_multiplicity(self) -> Mult:
        return sum(e.mult for e in self.edges)

    def in_degree(self) -> dict[str, Mult]:
        """|r^{-1}(v)| counted with multiplicity (``OMEGA`` if infinite)."""
        deg: dict[str, Mult] = {v: 0 for v in self.ran_vertices}
        for e in self.edges:
            deg[e.ran] += e.mult
        return deg

    def out_degree(self) -> dict[str, Mult]:
        deg: dict[str, Mult] = {v: 0 for v in self.dom_vertices}
        for e in self.edges:
            deg[e.dom] += e.mult
        return deg

    def expanded(self) -> "Correspondence":
        """One record per edge; an edge ``e`` of multiplicity k becomes ``e#1 .. e#k``."""
        if not self.finite:
            raise GraphError("cannot expand an edge of infinite multiplicity")
        if all(e.mult == 1 for e in self.edges):
            return self
        out = []
        for e in self.edges:
            if e.mult == 1:
                out.append(e)
            else:
                out.extend(Edge(f"{e.id}#{k}", e.dom, e.ran) for k in range(1, int(e.mult) + 1))
        return type(self)._rebuild(self, out)

    @staticmethod
    def _rebuild(template: "Correspondence", edges) -> "Correspondence":
        if isinstance(template, Graph):
            return Graph(template.vertices, tuple(edges))
        return Correspondence(template.dom_vertices, template.ran_vertices, tuple(edges))


@dataclass(frozen=True, init=False)
class Graph(Correspondence):
    """A self-correspondence E = (E0, E1, d, r)."""

    def __init__(self, vertices: Sequence[str], edges: Iterable):
        vs = tuple(vertices)
        super().__init__(vs, vs, tuple(edges))

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.dom_vertices

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self.vertices)}, edges={len(self.edges)})"


def build_graph(vertices: Iterable, edges: Iterable) -> Graph:
    """Validate and canonically order a graph.

    ``edges`` may hold :class:`Edge` objects, ``(id, dom, ran[, mult])`` tuples
    or mappings with those keys.
    """
    return Graph(tuple(str(v) for v in vertices), tuple(_as_edge(e) for e in edges))


def identity_correspondence(vertices: Iterable) -> Correspondence:
    vs = tuple(str(v) for v in vertices)
    return Correspondence(vs, vs, tuple(Edge(v, v, v) for v in vs))


@dataclass(frozen=True)
class VertexClassification:
    sce: frozenset[str]
    fin: frozenset[str]
    inf: frozenset[str]
    rg: frozenset[str]
    sg: frozenset[str]


def classify_vertices(g: Graph) -> VertexClassification:
    deg = g.in_degree()
    allv = frozenset(g.vertices)
    sce = frozenset(v for v, k in deg.items() if k == 0)
    fin = frozenset(v for v, k in deg.items() if k != OMEGA)
    rg = fin - sce
    return VertexClassification(sce=sce, fin=fin, inf=allv - fin, rg=rg, sg=allv - rg)


def opposite_graph(g: Graph) -> Graph:
    return Graph(g.vertices, tuple(Edge(e.id, e.ran, e.dom, e.mult) for e in g.edges))


def from_dynamical_system(points: Iterable, sigma) -> Graph:
    """Graph with E0 = E1 = X, d = id and r = sigma.

    ``sigma`` is a mapping or a callable on the points.  Edge ids coincide with
    point ids.
    """
    points = list(points)
    pts = [str(x) for x in points]
    lookup = dict(zip(pts, points))
    edges = []
    for p in pts:
        x = lookup[p]
        try:
            y = sigma[x] if isinstance(sigma, Mapping) else sigma(x)
        except (KeyError, IndexError) as exc:
            raise GraphError(f"sigma is not defined at {p!r}") from exc
        if str(y) not in lookup:
            raise GraphError(f"sigma maps {p!r} outside the point set (to {y!r})")
        edges.append(Edge(p, p, str(y)))
    return Graph(pts, edges)


def is_dynamical(g: Graph) -> bool:
    """True when every vertex emits exactly one edge (d is a bijection E1 -> E0)."""
    return g.finite and all(k == 1 for k in g.out_degree().values())


def adjacency_counts(g: Correspondence) -> list[list[Mult]]:
    """A[i][j] = number of edges from vertex j to vertex i (range row, domain column)."""
    ri = {v: i for i, v in enumerate(g.ran_vertices)}
    di = {v: j for j, v in enumerate(g.dom_vertices)}
    a: list[list[Mult]] = [[0] * len(di) for _ in ri]
    for e in g.edges:
        a[ri[e.ran]][di[e.dom]] += e.mult
    return a

