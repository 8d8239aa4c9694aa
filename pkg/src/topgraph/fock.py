"""Truncated Fock representation of a finite graph.

The Fock space C_d(E*) is cut off at depth N: the basis is every path of
length 0..N.  Creation operators send level N to zero, so identities that
involve an adjoint of a creation operator only hold after restricting the
domain to low enough levels (see :func:`compress`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError, classify_vertices, is_dynamical
from .hilbert import (
    ATOL,
    LevelSpace,
    ModuleElement,
    ModuleOperator,
    VertexFunction,
    level_space,
    pi_r,
)
from .paths import Path

DEFAULT_MAX_DIM = 20000


class DimensionCapError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class FockBasis:
    graph: Graph
    depth: int
    levels: tuple[LevelSpace, ...] = field(repr=False)
    offsets: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    @property
    def paths(self) -> list[Path]:
        return [p for sp in self.levels for p in sp.paths]

    def level_range(self, n: int) -> range:
        return range(self.offsets[n], self.offsets[n + 1])

    def level_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.depth + 1), np.diff(self.offsets))

    def ran(self) -> np.ndarray:
        return np.concatenate([sp.ran for sp in self.levels])

    def index(self, path: Path) -> int:
        sp = self.levels[path.level]
        return self.offsets[path.level] + sp.index[path.edges if path.level else path.dom]

    def projection(self, max_level: int) -> np.ndarray:
        """Orthogonal projection onto levels 0..max_level."""
        return np.diag((self.level_of() <= max_level).astype(complex))


@dataclass(frozen=True, eq=False)
class FockOperator:
    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.basis.dim, self.basis.dim):
            raise ValueError("operator does not match the Fock basis dimension")
        object.__setattr__(self, "matrix", mat)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.matrix @ other.matrix)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.matrix - other.matrix)

    def __rmul__(self, c) -> "FockOperator":
        return FockOperator(self.basis, c * self.matrix)

    @property
    def H(self) -> "FockOperator":
        return FockOperator(self.basis, self.matrix.conj().T)

    def block(self, n: int, m: int) -> np.ndarray:
        return self.matrix[np.ix_(self.basis.level_range(n), self.basis.level_range(m))]


def build_truncated_fock(g: Graph, depth: int, max_dim: int = DEFAULT_MAX_DIM) -> FockBasis:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not g.finite:
        raise GraphError("Fock space needs finite multiplicities")
    offsets = [0]
    levels = []
    for n in range(depth + 1):
        sp = level_space(g, n)
        if offsets[-1] + sp.dim > max_dim:
            raise DimensionCapError(
                f"Fock dimension exceeds cap {max_dim} at level {n}; lower the depth or raise max_dim")
        levels.append(sp)
        offsets.append(offsets[-1] + sp.dim)
    return FockBasis(g, depth, tuple(levels), tuple(offsets))


def _check_basis(b: FockBasis, x) -> None:
    if x.graph != b.graph:
        raise GraphError("element lives over a different graph than the Fock basis")


def sigma0(b: FockBasis, f: VertexFunction) -> FockOperator:
    """Left action: multiply each basis path by f(r(path))."""
    return FockOperator(b, np.diag(f.values[b.ran()]))


def _fibers(sp: LevelSpace) -> dict[int, list[int]]:
    by_dom: dict[int, list[int]] = {}
    for i, d in enumerate(sp.dom):
        by_dom.setdefault(int(d), []).append(i)
    return by_dom


def t_n(b: FockBasis, xi: ModuleElement) -> FockOperator:
    """T^n(xi): p -> sum over q in E^n with d(q) = r(p) of xi(q) (q p)."""
    _check_basis(b, xi)
    n = xi.level
    if n > b.depth:
        raise GraphError(f"level {n} exceeds Fock depth {b.depth}")
    mat = np.zeros((b.dim, b.dim), dtype=complex)
    qsp = xi.space
    fib = _fibers(qsp)
    nz = {int(d): [i for i in idx if xi.values[i] != 0] for d, idx in fib.items()}
    for k in range(0, b.depth - n + 1):
        src, dst = b.levels[k], b.levels[k + n]
        for j, p in enumerate(src.paths):
            for i in nz.get(int(src.ran[j]), ()):
                q = qsp.paths[i]
                key = q.edges + p.edges if k + n else p.dom
                mat[b.offsets[k + n] + dst.index[key], b.offsets[k] + j] += xi.values[i]
    return FockOperator(b, mat)


def sigma1(b: FockBasis, xi: ModuleElement) -> FockOperator:
    """Creation operator for xi in C_d(E1)."""
    if xi.level != 1:
        raise GraphError("sigma1 takes a level-1 element")
    return t_n(b, xi)


def phi_n(b: FockBasis, x: ModuleOperator) -> FockOperator:
    """Phi^n(x): act by x on the leading n edges of every path of length >= n.

    Only entries x[q', q] with d(q') = d(q) contribute, i.e. x is read as an
    element of the compacts on C_d(E^n).
    """
    _check_basis(b, x.space)
    n = x.level
    if n > b.depth:
        raise GraphError(f"level {n} exceeds Fock depth {b.depth}")
    sp = x.space
    fib = _fibers(sp)
    mat = np.zeros((b.dim, b.dim), dtype=complex)
    for k in range(n, b.depth + 1):
        lev = b.levels[k]
        off = b.offsets[k]
        for j, path in enumerate(lev.paths):
            if n == 0:
                mat[off + j, off + j] = x.matrix[lev.ran[j], lev.ran[j]]
                continue
            q, tail = path.edges[:n], path.edges[n:]
            qi = sp.index[q]
            for qj in fib[int(sp.dom[qi])]:
                mat[off + lev.index[sp.paths[qj].edges + tail], off + j] = x.matrix[qj, qi]
    return FockOperator(b, mat)


def contract(b: FockBasis, xi: ModuleElement, eta: ModuleElement) -> ModuleElement:
    """zeta(e) = sum over e' in E^n with d(e') = r(e) of conj(xi(e')) eta(e' e)."""
    _check_basis(b, xi)
    _check_basis(b, eta)
    n, m = xi.level, eta.level
    if not 0 <= n < m <= b.depth:
        raise GraphError(f"contract needs n < m <= depth, got n={n}, m={m}, depth={b.depth}")
    out = level_space(b.graph, m - n)
    vals = np.zeros(out.dim, dtype=complex)
    for i, full in enumerate(eta.space.paths):
        lead = full.edges[:n] if n else full.ran
        tail = full.edges[n:]
        vals[out.index[tail if m - n else full.dom]] += (
            xi.values[xi.space.index[lead]].conj() * eta.values[i])
    return ModuleElement(out, vals)


def fock_theta(b: FockBasis, xi: ModuleElement, eta: ModuleElement) -> FockOperator:
    """Rank-one operator zeta -> xi <eta, zeta> on the Fock module.

    Different levels are orthogonal, so only the block (level xi, level eta)
    is non-zero; inside it entries with d(a) = d(b) survive.
    """
    _check_basis(b, xi)
    _check_basis(b, eta)
    mat = np.zeros((b.dim, b.dim), dtype=complex)
    same = xi.space.dom[:, None] == eta.space.dom[None, :]
    mat[np.ix_(b.level_range(xi.level), b.level_range(eta.level))] = np.where(
        same, np.outer(xi.values, eta.values.conj()), 0)
    return FockOperator(b, mat)


def ck_defect_check(b: FockBasis, f: VertexFunction, atol: float = ATOL):
    """sigma0(f) - Phi^1(pi_r(f)) against theta(f, 1_supp f) at level 0.

    Returns ``(defect, passed)``.
    """
    rg = classify_vertices(b.graph).rg
    off = [v for v in f.support() if v not in rg]
    if off:
        raise GraphError(f"f must be supported on regular vertices; off support: {off}")
    defect = sigma0(b, f) - phi_n(b, pi_r(b.graph, f, 1))
    g0 = level_space(b.graph, 0)
    xi0 = ModuleElement(g0, f.values)
    eta0 = ModuleElement(g0, (f.values != 0).astype(complex))
    expected = fock_theta(b, xi0, eta0)
    upper = defect.matrix[:, b.offsets[1]:] if b.depth else np.zeros((b.dim, 0))
    passed = bool(np.abs(defect.matrix - expected.matrix).max(initial=0.0) <= atol
                  and not np.any(upper))
    return defect, passed


def gauge_unitary(b: FockBasis, z: complex) -> np.ndarray:
    return z ** b.level_of().astype(float)


def gauge_apply(b: FockBasis, z: complex, a: FockOperator) -> FockOperator:
    """U_z A U_z* with U_z = z^n on level n."""
    if abs(abs(z) - 1) > ATOL:
        raise ValueError(f"gauge parameter must have modulus 1, got |z| = {abs(z)}")
    u = gauge_unitary(b, complex(z))
    return FockOperator(b, u[:, None] * a.matrix * u.conj()[None, :])


def conditional_expectation(b: FockBasis, a: FockOperator) -> FockOperator:
    """Average of the gauge action over the (2N+1)-th roots of unity.

    Matrix entries between levels k and l pick up z^(k-l) with |k-l| <= N,
    which the discrete average kills unless k = l.
    """
    m = 2 * b.depth + 1
    acc = np.zeros_like(a.matrix)
    for j in range(m):
        acc += gauge_apply(b, np.exp(2j * np.pi * j / m), a).matrix
    return FockOperator(b, acc / m)


def compress(a: FockOperator, max_level: int) -> np.ndarray:
    """Restrict the domain of ``a`` to levels 0..max_level."""
    return a.matrix @ a.basis.projection(max_level)


def opnorm(m: np.ndarray) -> float:
    if m.size == 0 or not np.any(m):
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass
class DynIsometryReport:
    depth: int
    isometry_residual: float
    covariance_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.isometry_residual <= self.tol and self.covariance_residual <= self.tol


def dyn_isometry_check(b: FockBasis, tol: float = ATOL) -> DynIsometryReport:
    """U = sigma1(1) is an isometry and T0(f) U = U T0(f o sigma), both below level N."""
    g = b.graph
    if not is_dynamical(g):
        raise GraphError("graph is not of the form d = id, r = sigma")
    one = ModuleElement(level_space(g, 1), np.ones(len(g.edges)))
    u = sigma1(b, one)
    top = b.depth - 1
    eye = np.eye(b.dim)
    iso = opnorm(compress(u.H @ u, top) - eye @ b.projection(top))
    sigma = {e.dom: e.ran for e in g.edges}
    cov = 0.0
    for v in g.vertices:
        f = VertexFunction.delta(g, v)
        f_sigma = VertexFunction.from_dict(g, {x: f.as_dict()[sigma[x]] for x in g.vertices})
        lhs = sigma0(b, f) @ u
        rhs = u @ sigma0(b, f_sigma)
        cov = max(cov, opnorm(compress(lhs - rhs, top)))
    return DynIsometryReport(b.depth, iso, cov, tol)


def random_element(g: Graph, n: int, rng: np.random.Generator) -> ModuleElement:
    sp = level_space(g, n)
    return ModuleElement(sp, rng.standard_normal(sp.dim) + 1j * rng.standard_normal(sp.dim))


def random_function(g: Graph, rng: np.random.Generator) -> VertexFunction:
    k = len(g.vertices)
    return VertexFunction(g, rng.standard_normal(k) + 1j * rng.standard_normal(k))


def relation_suite(b: FockBasis, rng: np.random.Generator | None = None) -> dict[str, float]:
    """Largest operator-norm residual of each Toeplitz / T^n / Phi^n identity.

    Identities involving an annihilation operator of degree k are checked with
    the domain restricted to levels <= N - k.
    """
    from .hilbert import inner_product, left_action, tensor, theta_op

    rng = rng if rng is not None else np.random.default_rng(0)
    g, top = b.graph, b.depth
    res = {name: 0.0 for name in (
        "toeplitz_i", "toeplitz_ii", "tn_i", "tn_ii", "tn_iii", "tn_iv", "tn_v",
        "phi_theta", "contraction")}

    def bump(name, m):
        res[name] = max(res[name], opnorm(m))

    if top < 1:
        return res
    t = {}
    for n in range(0, top + 1):
        xi = random_element(g, n, rng)
        t[n] = (xi, t_n(b, xi))
    f = random_function(g, rng)
    s0f = sigma0(b, f)

    xi1, eta1 = random_element(g, 1, rng), random_element(g, 1, rng)
    s_xi, s_eta = sigma1(b, xi1), sigma1(b, eta1)
    bump("toeplitz_i", compress(s_xi.H @ s_eta - sigma0(b, inner_product(xi1, eta1)), top - 1))
    bump("toeplitz_ii", (s0f @ s_xi - sigma1(b, left_action(f, xi1))).matrix)

    for n in range(1, top + 1):
        xi, txi = t[n]
        for m in range(1, top - n + 1):
            eta, teta = t[m]
            bump("tn_i", (txi @ teta - t_n(b, tensor(xi, eta))).matrix)
        zeta = random_element(g, n, rng)
        tz = t_n(b, zeta)
        bump("tn_ii", compress(tz.H @ txi - sigma0(b, inner_product(zeta, xi)), top - n))
        bump("tn_iii", (s0f @ txi - t_n(b, left_action(f, xi))).matrix)
        a, c = random_element(g, n, rng), random_element(g, n, rng)
        x = theta_op(a, c) + theta_op(zeta, xi)
        phix = phi_n(b, x)
        bump("tn_iv", (s0f @ phix - phi_n(b, pi_r(g, f, n) @ x)).matrix)
        bump("tn_v", (phix @ txi - t_n(b, x(xi))).matrix)
        bump("phi_theta", (phi_n(b, theta_op(a, c)) - t_n(b, a) @ t_n(b, c).H).matrix)
        for m in range(n + 1, top + 1):
            eta, teta = t[m]
            zeta = contract(b, xi, eta)
            bump("contraction", compress(txi.H @ teta - t_n(b, zeta), top - m))
    return res
