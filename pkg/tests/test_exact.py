import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from udmis import graph as G
from udmis.exact import (BitsetMIS, SolverTimeout, brute_force, count_independent_sets, is_independent,
                         solve_exact)
from udmis.graph import UnitDiskGraph

from conftest import triangle


def test_empty_graph():
    g = UnitDiskGraph.from_points(np.zeros((0, 2)))
    assert solve_exact(g)[0] == 0
    assert brute_force(g)[0] == 0


def test_small_cases():
    assert solve_exact(triangle())[0] == 1
    edge = UnitDiskGraph.from_points([(0, 0), (0.5, 0)])
    size, w = brute_force(edge)
    assert size == 1 and w.sum() == 1
    square = UnitDiskGraph.from_points([(0, 0), (0.9, 0), (0.9, 0.9), (0, 0.9)])
    size, w = brute_force(square)
    assert size == 2 and (w.tolist() in ([1, 0, 1, 0], [0, 1, 0, 1]))


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force(G.generate(25, seed=0))


def test_is_independent():
    g = triangle()
    assert is_independent(g, [0, 0, 0])
    assert not is_independent(g, [1, 1, 0])
    with pytest.raises(ValueError):
        is_independent(g, [1, 0])


def test_matches_brute_force_n12():
    for seed in range(100):
        g = G.generate(12, seed=seed)
        size, w = solve_exact(g)
        assert size == brute_force(g)[0]
        assert is_independent(g, w) and w.sum() == size


@settings(max_examples=60)
@given(st.integers(1, 20), st.integers(0, 10**6))
def test_matches_brute_force_property(n, seed):
    g = G.generate(n, seed=seed)
    size, w = solve_exact(g)
    assert size == brute_force(g)[0]
    assert is_independent(g, w)


def test_deterministic():
    g = G.generate(80, seed=3)
    assert np.array_equal(solve_exact(g)[1], solve_exact(g)[1])


def test_larger_instance_consistent_with_reductions_off():
    # cross-check on n=40 against an independent plain include/exclude search
    g = G.generate(40, seed=9)
    adj = g.neighbor_masks()

    def plain(mask):
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        return max(1 + plain(mask & ~adj[v] & ~(1 << v)), plain(mask & ~(1 << v)))

    assert solve_exact(g)[0] == plain((1 << g.n) - 1)


def test_count_independent_sets():
    assert count_independent_sets(triangle()) == 4


def test_timeout():
    # dense instance that needs thousands of branch-and-bound nodes
    g = G.generate(300, density=6.0, exclusion=0.1, seed=0)
    with pytest.raises(SolverTimeout):
        solve_exact(g, timeout_s=0.05)


def test_sub_mask_solve():
    g = G.generate(30, seed=1)
    mask = sum(1 << v for v in range(0, 30, 2))
    s = BitsetMIS(g.neighbor_masks()).solve(mask)
    assert s & ~mask == 0
    sub, idx = G.induced_subgraph(g, range(0, 30, 2))
    assert bin(s).count("1") == brute_force(sub)[0]
