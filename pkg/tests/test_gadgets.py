import itertools
import math

import numpy as np
import pytest

from graphlet_ldp.gadgets import (
    ScaleError,
    build_clique_gadget,
    build_cycle_gadget,
    build_triangle_gadget,
    clique_lemma_check,
    cycle_structure_check,
    random_clique_inputs,
)
from graphlet_ldp.patterns import exact_count, preset_pattern

TRIANGLE = preset_pattern("triangle")


def bits(t, value):
    return np.full(t, value, dtype=bool)


def count_cycles_through(graph, k, required):
    """k-cycles (as edge sets) containing every edge in ``required``, by brute force."""
    adj = graph.dense
    found = set()
    for tup in itertools.permutations(range(graph.n), k):
        if tup[0] != min(tup):
            continue
        ring = [frozenset((tup[i], tup[(i + 1) % k])) for i in range(k)]
        if all(adj[tuple(e)] for e in map(tuple, ring)):
            found.add(frozenset(ring))
    return sum(1 for c in found if {frozenset(e) for e in required} <= c)


def test_triangle_gadget_all_ones():
    g = build_triangle_gadget(6, bits(2, 1), bits(2, 1), np.ones((2, 2), bool))
    adj = g.dense
    U, Y, W = slice(0, 2), slice(2, 4), slice(4, 6)
    assert adj[U, Y].all() and adj[U, W].all() and adj[Y, W].all()
    assert not adj[U, U].any() and not adj[Y, Y].any() and not adj[W, W].any()
    assert exact_count(g, TRIANGLE) == 8


def test_triangle_gadget_all_zeros():
    g = build_triangle_gadget(9, bits(3, 0), bits(3, 0), np.zeros((3, 3), bool))
    assert g.edge_count == 0 and exact_count(g, TRIANGLE) == 0


def test_mu_connects_whole_block():
    mu = np.array([True, False, True])
    g = build_triangle_gadget(9, mu, bits(3, 0), np.zeros((3, 3), bool))
    for i in range(3):
        assert (g.degree(i) >= 3) == bool(mu[i])
        assert g.dense[i, 6:].all() == bool(mu[i])


@pytest.mark.parametrize("k,n", [(3, 6), (4, 6), (5, 9), (6, 3)])
def test_clique_gadget_rules(k, n):
    rng = np.random.default_rng(k * 10 + n)
    mu, ups, X = random_clique_inputs(n, rng)
    g = build_clique_gadget(k, n, mu, ups, X)
    t = n // 3
    assert g.n == k * t
    adj = g.dense
    U, Y = range(0, t), range(t, 2 * t)
    W = [range((2 + p) * t, (3 + p) * t) for p in range(k - 2)]
    for i, j in itertools.product(range(t), range(t)):
        assert adj[U[i], Y[j]] == X[i, j]
        for p in range(k - 2):
            assert adj[U[i], W[p][j]] == mu[i]
            assert adj[Y[i], W[p][j]] == ups[i]
            for q in range(k - 2):
                if p != q:
                    assert adj[W[p][i], W[q][j]]
    for block in [U, Y] + W:
        assert not adj[np.ix_(list(block), list(block))].any()


def test_clique_gadget_k3_is_triangle_gadget():
    rng = np.random.default_rng(0)
    for _ in range(20):
        args = random_clique_inputs(9, rng)
        assert build_clique_gadget(3, 9, *args) == build_triangle_gadget(9, *args)


def test_clique_gadget_all_ones_k4():
    ones = (bits(2, 1), bits(2, 1), np.ones((2, 2), bool))
    g = build_clique_gadget(4, 6, *ones)
    assert g.n == 8
    assert exact_count(g, preset_pattern("clique", 4)) == 16


def test_clique_lemma_exhaustive_n6():
    rng = np.random.default_rng(6)
    t = 2
    for mu_bits in itertools.product([0, 1], repeat=t):
        for ups_bits in itertools.product([0, 1], repeat=t):
            for _ in range(20):
                X = rng.integers(0, 2, (t, t)).astype(bool)
                r = clique_lemma_check(4, 6, np.array(mu_bits, bool), np.array(ups_bits, bool), X)
                assert r.holds, r


def test_clique_lemma_degenerate_cases():
    rng = np.random.default_rng(1)
    mu, ups, _ = random_clique_inputs(9, rng)
    r = clique_lemma_check(5, 9, mu, ups, np.zeros((3, 3), bool))
    assert r.clique_count == r.triangle_count == 0 and r.holds
    r3 = clique_lemma_check(3, 9, *random_clique_inputs(9, rng))
    assert r3.multiplier == 1 and r3.holds


def test_gadget_validation():
    with pytest.raises(ValueError):
        build_triangle_gadget(7, bits(2, 0), bits(2, 0), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        build_triangle_gadget(6, bits(3, 0), bits(2, 0), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        build_clique_gadget(2, 6, bits(2, 0), bits(2, 0), np.zeros((2, 2)))
    with pytest.raises(ScaleError):
        clique_lemma_check(6, 6, bits(2, 0), bits(2, 0), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        build_cycle_gadget(5, bits(2, 0))
    with pytest.raises(ValueError):
        build_cycle_gadget(6, bits(2, 0))


def test_cycle_gadget_shapes():
    assert build_cycle_gadget(8, bits(4, 1)).edge_count == 28
    g0 = build_cycle_gadget(8, bits(4, 0))
    assert g0.edge_count == math.comb(8, 2) - 4
    assert not any(g0.has_edge(2 * i, 2 * i + 1) for i in range(4))
    rng = np.random.default_rng(2)
    for _ in range(100):
        x = rng.integers(0, 2, 3).astype(bool)
        assert build_cycle_gadget(6, x).edge_count == math.comb(6, 2) - 3 + int(x.sum())


def test_cycle_count_depends_on_popcount_only():
    c4 = preset_pattern("cycle", 4)
    rng = np.random.default_rng(3)
    for s in range(5):
        base = np.zeros(4, bool)
        base[:s] = True
        ref = exact_count(build_cycle_gadget(8, base), c4)
        for _ in range(5):
            assert exact_count(build_cycle_gadget(8, rng.permutation(base)), c4) == ref


def test_single_edge_coefficient_n8_k4():
    x = np.array([1, 0, 0, 0], bool)
    direct = count_cycles_through(build_cycle_gadget(8, x), 4, [(0, 1)])
    report = cycle_structure_check(8, 4, pairs=0)
    assert direct == 24
    assert report.coefficients[0] == direct


def test_cycle_structure_n8_k4():
    r = cycle_structure_check(8, 4, pairs=100, seed=0)
    assert [s for s, _, _ in r.closed_form_rows] == [0, 1, 2, 3, 4]
    assert r.closed_form_holds and r.popcount_invariant
    assert r.difference_pairs == 100 and r.difference_bound_holds
    assert r.holds


@pytest.mark.parametrize("n,k", [(6, 3), (8, 5), (10, 4), (6, 5)])
def test_cycle_structure_other_sizes(n, k):
    assert cycle_structure_check(n, k, pairs=30, seed=n + k).holds


def test_superset_coefficients_from_complete_gadget_overcount():
    # counting cycles through E_p inside the fully restored gadget lets them use
    # other matching edges too, which double-counts across the binomial terms
    complete_gadget = build_cycle_gadget(8, bits(4, 1))
    c1 = count_cycles_through(complete_gadget, 4, [(0, 1)])
    r = cycle_structure_check(8, 4, pairs=0)
    assert c1 > r.coefficients[0]
    direct_one = r.closed_form_rows[1][1]
    assert r.base_count + c1 != direct_one


def test_cycle_structure_scale_guard():
    with pytest.raises(ScaleError):
        cycle_structure_check(12, 4)
    with pytest.raises(ValueError):
        cycle_structure_check(8, 9)
