import numpy as np
import pytest

from udmis import graph as G
from udmis.anneal import (OptimizerConfig, TfTableRow, coefficient_of_variation, optimize_tf, tf_scan,
                          tf_vs_natoms)
from udmis.rydberg import AnnealConfig, build_is_basis, simulate

CFG = OptimizerConfig(n_traj=30, max_iters=12)


@pytest.fixture(scope="module")
def g6():
    return G.generate(6, seed=3)


def test_single_point_scan_matches_simulate(g6):
    e = tf_scan(g6, 0.3, [1.2], n_traj=20, seed=5)
    assert e.shape == (1,)
    assert e[0] == simulate(g6, AnnealConfig(t_f=1.2), 0.3, n_traj=20, seed=5).mean_energy
    with pytest.raises(ValueError):
        tf_scan(g6, 0.3, [])


def test_optimizer_returns_best_of_history(g6):
    res = optimize_tf(g6, 3.0, CFG)
    assert res.e_star == min(e for _, e in res.history)
    assert 0.1 <= res.tf_star <= 20
    assert res.to_json()["tf_star"] == res.tf_star
    again = optimize_tf(g6, 3.0, CFG)
    assert again.tf_star == res.tf_star and again.history == res.history


def test_optimizer_clamps_and_validates(g6):
    res = optimize_tf(g6, 0.0, OptimizerConfig(t0=50.0, max_iters=3, n_traj=1))
    assert all(0.1 <= t <= 20 for t, _ in res.history)
    assert res.history[0][0] == 20.0
    with pytest.raises(ValueError):
        optimize_tf(g6, 0.0, OptimizerConfig(t0=0.0))


def test_noisy_interior_optimum(g6):
    basis = build_is_basis(g6)
    res = optimize_tf(g6, 3.0, CFG, basis=basis)
    ends = tf_scan(g6, 3.0, [0.1, 20.0], n_traj=CFG.n_traj, seed=CFG.seed, basis=basis)
    assert res.e_star < ends.min()
    assert 0.1 < res.tf_star < 20


def test_noiseless_energy_decreases_with_tf(g6):
    grid = [0.2, 0.5, 1.0, 2.0, 4.0]
    e = tf_scan(g6, 0.0, grid)
    # allow 1% wiggle between neighbours
    assert np.all(np.diff(e) <= 0.01 * np.abs(e[:-1]))
    assert e[-1] < e[0]


def test_table_single_graph(g6):
    rows = tf_vs_natoms({6: [g6]}, 3.0, OptimizerConfig(n_traj=10, max_iters=4))
    assert len(rows) == 1 and rows[0].count == 1 and rows[0].tf_std == 0
    assert coefficient_of_variation(rows) == 0.0
    assert coefficient_of_variation([TfTableRow(6, 1.0, 0, 1), TfTableRow(8, 1.0, 0, 1)]) == 0.0


@pytest.mark.parametrize("gamma", [0.3, 3.0])
def test_converges_within_ten_evaluations(g6, gamma):
    res = optimize_tf(g6, gamma, OptimizerConfig(n_traj=30, max_iters=30))
    first = min(e for _, e in res.history[:10])
    assert first <= res.e_star + 0.01 * abs(res.e_star)
