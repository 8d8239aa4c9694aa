import random

import pytest
from hypothesis import given, settings, strategies as st

from topgraph.graph import OMEGA, build_graph, classify_vertices, from_dynamical_system
from topgraph.ktheory import (
    AbelianGroupPresentation,
    check_snf,
    delta_matrix,
    k_groups,
    matmul,
    smith_normal_form,
)

from conftest import on_graph
from oracles import determinantal_invariants, integer_rank, random_graph


def test_delta_examples(o2, loop1, edge_wv):
    assert delta_matrix(o2).entries == [[-1]]
    assert delta_matrix(loop1).entries == [[0]]
    dm = delta_matrix(edge_wv)
    assert dm.rows == ("v", "w") and dm.cols == ("v",)
    assert dm.entries == [[1], [-1]]


def test_delta_omega_contributes_no_column():
    g = build_graph(["u", "v"], [("e", "u", "v", OMEGA), ("f", "v", "u", 2)])
    dm = delta_matrix(g)
    assert dm.cols == ("u",) and dm.entries == [[1], [-2]]


@pytest.mark.parametrize("m, diag", [
    ([[3, 0], [0, 5]], [1, 15]),
    ([[2, 4], [6, 8]], [2, 4]),
])
def test_snf_examples(m, diag):
    # frozen from the determinant-divisor oracle
    assert determinantal_invariants(m) == diag
    r = smith_normal_form(m)
    check_snf(m, r)
    assert r.diagonal == diag


def test_snf_zero():
    r = smith_normal_form([[0, 0], [0, 0], [0, 0]])
    assert r.rank == 0 and r.U == [[1, 0, 0], [0, 1, 0], [0, 0, 1]] and r.V == [[1, 0], [0, 1]]


def test_snf_empty_shapes():
    r = smith_normal_form([[], []])
    assert r.rank == 0 and r.U == [[1, 0], [0, 1]] and r.V == []


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                       min_size=r, max_size=r))))
def test_snf_matches_determinantal_oracle(m):
    r = smith_normal_form(m)
    check_snf(m, r)
    assert r.diagonal == determinantal_invariants(m)


def test_snf_big_entries_exact():
    m = [[10**30 + 1, 10**29], [3, 7 * 10**25]]
    r = smith_normal_form(m)
    check_snf(m, r)
    assert r.diagonal == determinantal_invariants(m)


def test_check_snf_catches_errors():
    m = [[2, 0], [0, 3]]
    r = smith_normal_form(m)
    bad = type(r)([[2, 0], [0, 3]], r.U, r.V, 2)
    with pytest.raises(AssertionError):
        check_snf(m, bad)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_on_graphs(n):
    kg = k_groups(on_graph(n))
    assert kg.K0 == AbelianGroupPresentation(0, () if n == 2 else (n - 1,))
    assert kg.K1 == AbelianGroupPresentation(0)


def test_single_loop(loop1):
    kg = k_groups(loop1)
    assert kg.K0.free_rank == 1 and kg.K1.free_rank == 1 and str(kg.K0) == "Z"


def test_permutation_3_2():
    perm = {0: 1, 1: 2, 2: 0, 3: 4, 4: 3}
    kg = k_groups(from_dynamical_system(range(5), perm))
    assert kg.K0 == AbelianGroupPresentation(2) and kg.K1 == AbelianGroupPresentation(2)


def test_k1_generators_in_kernel(loop1):
    g = build_graph(["a", "b"], [("x", "a", "b"), ("y", "b", "a"), ("z", "a", "a")])
    for graph in (loop1, from_dynamical_system(range(4), {0: 1, 1: 0, 2: 3, 3: 2}), g):
        kg = k_groups(graph, generators=True)
        assert len(kg.k1_generators) == kg.K1.free_rank
        for vec in kg.k1_generators:
            col = [[x] for x in vec]
            assert all(row == [0] for row in matmul(kg.delta.entries, col))


def test_euler_characteristic_random():
    rng = random.Random(17)
    for _ in range(200):
        g = random_graph(rng, 6, 12, max_mult=3, omega_rate=0.1)
        kg = k_groups(g)
        rg = classify_vertices(g).rg
        assert kg.K0.free_rank - kg.K1.free_rank == len(g.vertices) - len(rg)
        assert kg.K1.free_rank == len(rg) - integer_rank(kg.delta.entries)


def test_relabeling_invariance():
    rng = random.Random(19)
    for _ in range(50):
        g = random_graph(rng, 5, 9, max_mult=2, omega_rate=0.1)
        names = list(g.vertices)
        shuffled = names[:]
        rng.shuffle(shuffled)
        ren = dict(zip(names, (f"z{s}" for s in shuffled)))
        h = build_graph(ren.values(), [(f"q{e.id}", ren[e.dom], ren[e.ran], e.mult) for e in g.edges])
        assert k_groups(g).K0 == k_groups(h).K0 and k_groups(g).K1 == k_groups(h).K1


def test_permutation_free_ranks_equal_cycles():
    rng = random.Random(23)
    for _ in range(40):
        k = rng.randint(1, 8)
        img = list(range(k))
        rng.shuffle(img)
        perm = dict(enumerate(img))
        seen, cycles = set(), 0
        for s in range(k):
            if s not in seen:
                cycles += 1
                while s not in seen:
                    seen.add(s)
                    s = perm[s]
        kg = k_groups(from_dynamical_system(range(k), perm))
        assert kg.K0.free_rank == kg.K1.free_rank == cycles
        assert kg.K0.invariant_factors == ()
