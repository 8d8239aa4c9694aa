"""Path spaces E^n, composition of correspondences, loops and Condition L."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .graph import OMEGA, Correspondence, Edge, Graph, GraphError


@dataclass(frozen=True)
class Path:
    """Edges stored range-side first: ``(e_n, ..., e_1)`` with d(e_{k+1}) = r(e_k).

    A level-0 path is a bare vertex: ``edges == ()`` and ``dom == ran``.
    """

    edges: tuple[str, ...]
    dom: str
    ran: str

    @classmethod
    def vertex(cls, v: str) -> "Path":
        return cls((), v, v)

    @property
    def level(self) -> int:
        return len(self.edges)

    @property
    def first(self) -> str:
        """e_1, the edge at the domain end."""
        return self.edges[-1]

    def sort_key(self):
        if not self.edges:
            return (0, (self.dom,))
        return (len(self.edges), self.edges[::-1])

    def is_loop(self) -> bool:
        return bool(self.edges) and self.dom == self.ran

    def is_returning(self) -> bool:
        return self.first in self.edges[:-1]

    def __str__(self) -> str:
        if not self.edges:
            return self.dom
        return "(" + ",".join(self.edges) + ")"


def concat(q: Path, p: Path) -> Path:
    """The path q p: first traverse p, then q.  Requires d(q) = r(p)."""
    if q.dom != p.ran:
        raise GraphError(f"paths {q} and {p} are not composable")
    return Path(q.edges + p.edges, p.dom, q.ran)


@dataclass(frozen=True)
class Loop:
    path: Path
    base_point: str

    @property
    def edges(self) -> tuple[str, ...]:
        return self.path.edges


def _require_finite(g: Correspondence) -> Correspondence:
    if not g.finite:
        raise GraphError("operation needs finite multiplicities (graph has an OMEGA edge)")
    return g.expanded()


def compose(g: Correspondence, h: Correspondence) -> Correspondence:
    """Fiber product: edges (e', e) with e in g, e' in h and d'(e') = r(e)."""
    if tuple(g.ran_vertices) != tuple(h.dom_vertices):
        raise GraphError("range vertices of the first correspondence must equal "
                         "domain vertices of the second")
    g, h = _require_finite(g), _require_finite(h)
    by_dom: dict[str, list[Edge]] = {}
    for e2 in h.edges:
        by_dom.setdefault(e2.dom, []).append(e2)
    edges = [Edge(f"({e2.id},{e.id})", e.dom, e2.ran)
             for e in g.edges for e2 in by_dom.get(e.ran, ())]
    return Correspondence(g.dom_vertices, h.ran_vertices, tuple(edges))


@lru_cache(maxsize=16)
def _levels(g: Graph, n: int) -> tuple[tuple[Path, ...], ...]:
    g = _require_finite(g)
    by_dom: dict[str, list[Edge]] = {}
    for e in g.edges:
        by_dom.setdefault(e.dom, []).append(e)
    levels = [tuple(Path.vertex(v) for v in g.vertices)]
    cur = levels[0]
    for _ in range(n):
        nxt = [Path((e.id,) + p.edges, p.dom, e.ran)
               for p in cur for e in by_dom.get(p.ran, ())]
        cur = tuple(sorted(nxt, key=Path.sort_key))
        levels.append(cur)
    return tuple(levels)


def path_space(g: Graph, n: int) -> list[Path]:
    """All length-n paths in canonical order; level 0 gives the vertices."""
    if n < 0:
        raise ValueError("level must be non-negative")
    return list(_levels(g, n)[n])


def path_correspondence(g: Graph, n: int) -> Correspondence:
    """E^n viewed as a correspondence (E^n, d^n, r^n) over E0."""
    edges = [Edge(",".join(p.edges), p.dom, p.ran) for p in path_space(g, n)] if n else \
        [Edge(v, v, v) for v in g.vertices]
    return Correspondence(g.vertices, g.vertices, tuple(edges))


def _in_edges(g: Graph) -> dict[str, list[Edge]]:
    inc: dict[str, list[Edge]] = {v: [] for v in g.vertices}
    for e in g.edges:
        inc[e.ran].append(e)
    return inc


def cycles_without_entrances(g: Graph) -> list[Loop]:
    """Simple cycles all of whose vertices have total in-degree exactly 1.

    Each vertex of in-degree 1 has a unique incoming edge; following those
    backwards gives a functional graph whose cycles are exactly the loops
    without entrances.  The loop is reported with base point the smallest
    vertex id on it.
    """
    inc = _in_edges(g)
    deg = g.in_degree()
    pred = {v: inc[v][0] for v in g.vertices if deg[v] == 1}
    state: dict[str, int] = {}
    loops = []
    for start in g.vertices:
        trail = []
        v = start
        while v in pred and v not in state:
            state[v] = 1
            trail.append(v)
            v = pred[v].dom
        if v in pred and state.get(v) == 1:
            cyc = trail[trail.index(v):]
            base = min(cyc)
            # walk forward from base: the edge leaving u on the cycle is pred[next]
            succ = {pred[u].dom: u for u in cyc}
            edges = []
            u = base
            while True:
                w = succ[u]
                edges.append(pred[w].id)
                u = w
                if u == base:
                    break
            loops.append(Loop(Path(tuple(reversed(edges)), base, base), base))
        for u in trail:
            state[u] = 2
    return sorted(loops, key=lambda lp: lp.base_point)


def is_topologically_free(g: Graph) -> bool:
    return not cycles_without_entrances(g)


def find_non_returning_path(g: Graph, targets, n: int) -> Path | None:
    """A shortest non-returning path of length m >= n with range in ``targets``.

    The search covers n <= m <= n + |E1| + |E0|.  A path e_1 followed by a
    walk of length m - 1 avoiding e_1 can have its cycles cut out while staying
    at length >= n, so some witness of length <= n + |E0| exists whenever any
    witness exists; the bound is therefore never the reason for ``None``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g = _require_finite(g)
    targets = set(targets)
    bound = n + len(g.edges) + len(g.vertices)
    by_dom: dict[str, list[Edge]] = {}
    for e in g.edges:
        by_dom.setdefault(e.dom, []).append(e)

    best: Path | None = None
    for first in g.edges:
        # layer k holds vertices reachable by a k-step walk from r(first) avoiding first
        parents: list[dict[str, tuple[str, str]]] = [{first.ran: ("", "")}]
        for k in range(0, bound):
            m = k + 1
            if best is not None and m > best.level:
                break
            layer = parents[k]
            if m >= n:
                hit = sorted(v for v in layer if v in targets)
                if hit:
                    cand = _unwind(parents, k, hit[0], first)
                    if best is None or Path.sort_key(cand) < Path.sort_key(best):
                        best = cand
                    break
            nxt: dict[str, tuple[str, str]] = {}
            for v in sorted(layer):
                for e in by_dom.get(v, ()):
                    if e.id != first.id and e.ran not in nxt:
                        nxt[e.ran] = (v, e.id)
            if not nxt:
                break
            parents.append(nxt)
    return best


def _unwind(parents, k: int, v: str, first: Edge) -> Path:
    edges = []
    end = v
    for j in range(k, 0, -1):
        prev, eid = parents[j][v]
        edges.append(eid)
        v = prev
    edges.append(first.id)
    return Path(tuple(edges), first.dom, end)


__all__ = [
    "OMEGA", "Path", "Loop", "concat", "compose", "path_space", "path_correspondence",
    "cycles_without_entrances", "is_topologically_free", "find_non_returning_path",
]
