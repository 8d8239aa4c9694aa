"""The Hilbert C0(E0)-modules C_d(E^n) of a finite discrete graph.

Elements are complex vectors indexed by the canonical basis of E^n, vertex
functions are complex vectors indexed by E0.  Operators are dense matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .graph import Graph, GraphError
from .paths import Path, concat, path_space

ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class LevelSpace:
    """Canonical basis of E^n together with index arrays for d^n and r^n."""

    graph: Graph
    level: int
    paths: tuple[Path, ...]
    index: dict = field(repr=False)
    dom: np.ndarray = field(repr=False)
    ran: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.paths)

    @property
    def nvert(self) -> int:
        return len(self.graph.vertices)


@lru_cache(maxsize=64)
def level_space(g: Graph, n: int) -> LevelSpace:
    paths = tuple(path_space(g, n))
    vidx = {v: i for i, v in enumerate(g.vertices)}
    dom = np.array([vidx[p.dom] for p in paths], dtype=np.intp)
    ran = np.array([vidx[p.ran] for p in paths], dtype=np.intp)
    return LevelSpace(g, n, paths, {p.edges if n else p.dom: i for i, p in enumerate(paths)},
                      dom, ran)


@dataclass(frozen=True, eq=False)
class VertexFunction:
    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(self.graph.vertices),):
            raise ValueError("vertex function must have one value per vertex")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict(cls, g: Graph, values: dict) -> "VertexFunction":
        return cls(g, np.array([values.get(v, 0) for v in g.vertices], dtype=complex))

    @classmethod
    def delta(cls, g: Graph, v: str) -> "VertexFunction":
        return cls.from_dict(g, {v: 1})

    @classmethod
    def constant(cls, g: Graph, c: complex = 1) -> "VertexFunction":
        return cls(g, np.full(len(g.vertices), c, dtype=complex))

    def support(self) -> list[str]:
        return [v for v, x in zip(self.graph.vertices, self.values) if x != 0]

    def as_dict(self) -> dict[str, complex]:
        return dict(zip(self.graph.vertices, self.values))

    def __mul__(self, other: "VertexFunction") -> "VertexFunction":
        return VertexFunction(self.graph, self.values * other.values)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """An element of C_d(E^n); level 0 elements double as vertex functions."""

    space: LevelSpace
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.space.dim,):
            raise ValueError(f"expected {self.space.dim} values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def level(self) -> int:
        return self.space.level

    @property
    def graph(self) -> Graph:
        return self.space.graph

    @classmethod
    def from_dict(cls, g: Graph, n: int, values: dict) -> "ModuleElement":
        """Keys are edge-id tuples ``(e_n, ..., e_1)`` (vertex ids at level 0)."""
        sp = level_space(g, n)
        vals = np.zeros(sp.dim, dtype=complex)
        for key, x in values.items():
            if n and isinstance(key, str):
                key = (key,)
            try:
                vals[sp.index[key]] = x
            except KeyError:
                raise GraphError(f"{key!r} is not a path of length {n}") from None
        return cls(sp, vals)

    @classmethod
    def delta(cls, g: Graph, path) -> "ModuleElement":
        if isinstance(path, Path):
            return cls.from_dict(g, path.level, {path.edges if path.level else path.dom: 1})
        key = (path,) if isinstance(path, str) else tuple(path)
        return cls.from_dict(g, len(key), {key: 1})

    @classmethod
    def from_vertex_function(cls, f: VertexFunction) -> "ModuleElement":
        return cls(level_space(f.graph, 0), f.values)

    def __add__(self, other):
        _same_level(self, other)
        return ModuleElement(self.space, self.values + other.values)

    def __sub__(self, other):
        _same_level(self, other)
        return ModuleElement(self.space, self.values - other.values)

    def __rmul__(self, c):
        return ModuleElement(self.space, c * self.values)


@dataclass(frozen=True, eq=False)
class ModuleOperator:
    space: LevelSpace
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator matrix must be square of the level dimension")
        object.__setattr__(self, "matrix", mat)

    @property
    def level(self) -> int:
        return self.space.level

    def __call__(self, xi: ModuleElement) -> ModuleElement:
        _same_level(self, xi)
        return ModuleElement(self.space, self.matrix @ xi.values)

    def __matmul__(self, other: "ModuleOperator") -> "ModuleOperator":
        _same_level(self, other)
        return ModuleOperator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleOperator") -> "ModuleOperator":
        _same_level(self, other)
        return ModuleOperator(self.space, self.matrix + other.matrix)

    def __rmul__(self, c) -> "ModuleOperator":
        return ModuleOperator(self.space, c * self.matrix)

    def adjoint(self) -> "ModuleOperator":
        return ModuleOperator(self.space, self.matrix.conj().T)


def _same_level(a, b) -> None:
    if a.space.graph != b.space.graph or a.level != b.level:
        raise GraphError(f"level mismatch: {a.level} vs {b.level}")


def inner_product(xi: ModuleElement, eta: ModuleElement) -> VertexFunction:
    """<xi, eta>(v) = sum over d(e) = v of conj(xi(e)) eta(e)."""
    _same_level(xi, eta)
    out = np.zeros(xi.space.nvert, dtype=complex)
    np.add.at(out, xi.space.dom, xi.values.conj() * eta.values)
    return VertexFunction(xi.graph, out)


def module_norm(xi: ModuleElement) -> float:
    ip = inner_product(xi, xi).values.real
    return float(np.sqrt(ip.max())) if ip.size else 0.0


def right_action(xi: ModuleElement, f: VertexFunction) -> ModuleElement:
    """(xi f)(e) = xi(e) f(d(e))."""
    return ModuleElement(xi.space, xi.values * f.values[xi.space.dom])


def left_action(f: VertexFunction, xi: ModuleElement) -> ModuleElement:
    """(pi_r(f) xi)(e) = f(r(e)) xi(e)."""
    return ModuleElement(xi.space, f.values[xi.space.ran] * xi.values)


def theta_op(xi: ModuleElement, eta: ModuleElement) -> ModuleOperator:
    """Matrix of zeta -> xi <eta, zeta>."""
    _same_level(xi, eta)
    sp = xi.space
    same = sp.dom[:, None] == sp.dom[None, :]
    return ModuleOperator(sp, np.where(same, np.outer(xi.values, eta.values.conj()), 0))


def matrix_unit(g: Graph, e, f) -> ModuleOperator:
    """u_{e,f} = theta(delta_e, delta_f)."""
    return theta_op(ModuleElement.delta(g, e), ModuleElement.delta(g, f))


def pi_r(g: Graph, f: VertexFunction, level: int = 1) -> ModuleOperator:
    sp = level_space(g, level)
    return ModuleOperator(sp, np.diag(f.values[sp.ran]))


def tensor(xi: ModuleElement, eta: ModuleElement) -> ModuleElement:
    """(xi (x) eta)(q, p) = xi(q) eta(p) for d(q) = r(p)."""
    g = xi.graph
    if eta.graph != g:
        raise GraphError("elements live over different graphs")
    sp = level_space(g, xi.level + eta.level)
    vals = np.zeros(sp.dim, dtype=complex)
    by_dom: dict[str, list[int]] = {}
    for i, q in enumerate(xi.space.paths):
        by_dom.setdefault(q.dom, []).append(i)
    for j, p in enumerate(eta.space.paths):
        for i in by_dom.get(p.ran, ()):
            qp = concat(xi.space.paths[i], p)
            vals[sp.index[qp.edges if sp.level else qp.dom]] = xi.values[i] * eta.values[j]
    return ModuleElement(sp, vals)


def block_structure(g: Graph) -> dict[str, tuple[list[str], int]]:
    """Partition of E1 by domain vertex; the block at v is M_k with k = |d^{-1}(v)|."""
    g = g.expanded()
    blocks: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        blocks[e.dom].append(e.id)
    return {v: (es, len(es) ** 2) for v, es in blocks.items()}


def compact_dimension(g: Graph) -> int:
    return sum(dim for _, dim in block_structure(g).values())
