"""K-groups of graph algebras: K0 = coker Delta, K1 = ker Delta, via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, classify_vertices

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass(frozen=True)
class DeltaMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: IntMatrix


@dataclass(frozen=True)
class SnfResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(self.rank)]


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}


def delta_matrix(g: Graph) -> DeltaMatrix:
    """Columns indexed by regular vertices v: delta_v - sum over r(e) = v of delta_{d(e)}."""
    rg = sorted(classify_vertices(g).rg)
    row = {v: i for i, v in enumerate(g.vertices)}
    col = {v: j for j, v in enumerate(rg)}
    m = [[0] * len(rg) for _ in g.vertices]
    for v, j in col.items():
        m[row[v]][j] += 1
    for e in g.edges:
        if e.ran in col:
            m[row[e.dom]][col[e.ran]] -= int(e.mult)
    return DeltaMatrix(tuple(g.vertices), tuple(rg), m)


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Unimodular U, V with U M V = S diagonal and d_1 | d_2 | ... | d_r > 0.

    Pivots are taken at the smallest non-zero absolute value in the remaining
    block; rows and columns are reduced until the pivot divides every entry
    of the block.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    U, V = identity(nr), identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for mat in (a, V):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        for mat in (a, U):
            rd, rs = mat[dst], mat[src]
            for k in range(len(rd)):
                rd[k] -= q * rs[k]

    def add_col(dst, src, q):  # col dst -= q * col src
        for mat in (a, V):
            for row in mat:
                row[dst] -= q * row[src]

    rank = 0
    for t in range(min(nr, nc)):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        done = False
            if not done:
                nz = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
                nz += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
                _, pi, pj = min(nz)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            p = a[t][t]
            bad = next((i for i in range(t + 1, nr)
                        if any(a[i][j] % p for j in range(t + 1, nc))), None)
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            for mat in (a, U):
                mat[t] = [-x for x in mat[t]]
        rank += 1
    return SnfResult(a, U, V, rank)


def check_snf(m: IntMatrix, res: SnfResult) -> None:
    """Raise AssertionError unless ``res`` is a valid Smith form of ``m``."""
    if matmul(matmul(res.U, m), res.V) != res.S:
        raise AssertionError("U M V != S")
    for i, row in enumerate(res.S):
        for j, x in enumerate(row):
            if i != j and x:
                raise AssertionError("S is not diagonal")
    d = res.diagonal
    if any(x <= 0 for x in d):
        raise AssertionError("non-positive invariant factor")
    if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
        raise AssertionError("divisibility chain broken")
    if any(res.S[i][i] for i in range(res.rank, min(len(res.S), len(res.S[0]) if res.S else 0))):
        raise AssertionError("non-zero entry beyond the rank")
    if abs(det(res.U)) != 1 or abs(det(res.V)) != 1:
        raise AssertionError("transform is not unimodular")


@dataclass(frozen=True)
class KGroups:
    K0: AbelianGroupPresentation
    K1: AbelianGroupPresentation
    delta: DeltaMatrix
    k1_generators: tuple[tuple[int, ...], ...] = ()


def k_groups(g: Graph, generators: bool = False) -> KGroups:
    dm = delta_matrix(g)
    snf = smith_normal_form(dm.entries)
    check_snf(dm.entries, snf)
    k0 = AbelianGroupPresentation(len(dm.rows) - snf.rank,
                                  tuple(d for d in snf.diagonal if d > 1))
    k1 = AbelianGroupPresentation(len(dm.cols) - snf.rank)
    gens = ()
    if generators:
        # columns of V past the rank span ker(Delta)
        gens = tuple(tuple(snf.V[i][j] for i in range(len(dm.cols)))
                     for j in range(snf.rank, len(dm.cols)))
    return KGroups(k0, k1, dm, gens)

