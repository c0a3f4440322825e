import json
from pathlib import Path

import numpy as np
import pytest

from udmis import bench as B
from udmis import graph as G
from udmis.exact import solve_exact
from udmis.rydberg import enumerate_independent_sets
from udmis.shots import from_probabilities
from udmis.stats import ExtrapFit

from conftest import path_graph

FIXTURES = json.loads((Path(__file__).parent / "data" / "reference_frontier.json").read_text())


def fixture_points(budget):
    return [B.ClassicalPoint(**p) for p in FIXTURES[budget]]


def test_policy():
    assert B.BudgetPolicy(0.2).n_shots == 1
    assert B.BudgetPolicy(2.0).n_shots == 10
    for bad in ({"budget_s": 0}, {"repetition_rate_hz": -1}, {"timing": "cpu"}):
        with pytest.raises(ValueError):
            B.BudgetPolicy(**bad)


def test_run_seed_is_counter_based():
    assert B.run_seed(1, 0) == B.run_seed(1, 0)
    assert len({B.run_seed(1, k) for k in range(100)}) == 100


def test_classical_session_small_graph():
    g = path_graph(6)
    s = B.run_classical_budgeted(g, 0, B.BudgetPolicy(0.3), seed=2, exact_size=3)
    assert s.completed > 50 and not s.best.over_budget
    assert s.best.ratio >= s.ratios[0]
    assert np.all(np.diff(s.best_so_far) >= 0)
    assert sum(s.durations) <= 0.3
    assert s.best.extra["subinstance_sizes"]


def test_classical_session_over_budget():
    g = G.generate(120, seed=1)
    s = B.run_classical_budgeted(g, 15, B.BudgetPolicy(1e-4), exact_size=None, max_runs=5)
    assert s.best.over_budget and s.completed == 0
    assert len(s.durations) == 1 and s.best.ratio is not None


def test_completed_runs_shrink_with_n():
    counts = []
    for n in (20, 80):
        g = G.generate(n, seed=0)
        counts.append(B.run_classical_budgeted(g, 2, B.BudgetPolicy(0.2), exact_size=1).completed)
    assert counts[0] > counts[1]


def test_budget_accounting_bound():
    g = G.generate(40, seed=4)
    budget = B.BudgetPolicy(0.05)
    s = B.run_classical_budgeted(g, 3, budget, exact_size=1)
    assert sum(s.durations) <= budget.budget_s + max(s.durations)


def test_quantum_budgeted():
    g = G.generate(5, seed=0)
    size, _ = solve_exact(g)
    rng = np.random.default_rng(0)
    states = enumerate_independent_sets(g)
    dist = from_probabilities(g, states, rng.dirichlet(np.ones(len(states))), gamma=0.3, t_f=1.0, seed=0)
    one = B.run_quantum_budgeted(dist, B.BudgetPolicy(0.2), size)
    assert one.n_runs == 1 and one.ratio == pytest.approx(one.extra["one_shot_ratio"])
    ten = B.run_quantum_budgeted(dist, B.BudgetPolicy(2.0), size)
    assert ten.n_runs == 10 and ten.model_time_s == pytest.approx(2.0)
    assert ten.ratio >= ten.extra["one_shot_ratio"]
    with pytest.raises(B.BudgetError):
        B.run_quantum_budgeted(dist, B.BudgetPolicy(0.1), size)
    assert B.valid_shots(10, 0.0) == 10
    assert B.valid_shots(10, 0.5) == 5


def test_reference_corner_2s():
    rep = B.breakeven_report(fixture_points("2.0"), None, B.BudgetPolicy(2.0))
    assert (rep.corner.n_max, rep.corner.ratio) == (8000, 0.95)
    assert rep.quantum == {}
    assert "# budget_s=2.0" in rep.to_csv()


def test_reference_frontier_02s():
    rep = B.breakeven_report(fixture_points("0.2"), None, B.BudgetPolicy(0.2))
    ns = [p.n_max for p in rep.staircase]
    assert min(ns) == 1000 and max(ns) == 1200


def test_staircase_properties():
    pts = [B.ClassicalPoint(0, 100, 0.8), B.ClassicalPoint(1, 50, 0.9), B.ClassicalPoint(2, 60, 0.85),
           B.ClassicalPoint(3, 40, 0.88)]
    st = B.pareto_staircase(pts)
    assert [p.d for p in st] == [1, 2, 0]
    assert all(a.n_max < b.n_max and a.ratio > b.ratio for a, b in zip(st, st[1:]))
    assert B.frontier_ratio(st, 55) == 0.85
    assert B.frontier_ratio(st, 101) == -np.inf
    with pytest.raises(ValueError):
        B.breakeven_report([], None, B.BudgetPolicy())


def test_report_with_quantum_line(tmp_path):
    fit = ExtrapFit(alpha_sat=0.9, beta=0.5, s2=1e-4, sxx=1.0, dof=5)
    rep = B.breakeven_report(fixture_points("2.0"), {"0.3": fit}, B.BudgetPolicy(2.0), n_grid=[1000, 8000, 20000])
    rows = rep.quantum["0.3"]
    assert rows[-1]["ahead"]  # beyond every classical reach
    assert all(r["lo"] <= r["ratio"] <= r["hi"] for r in rows)
    rep.save(tmp_path)
    assert json.loads((tmp_path / "breakeven.json").read_text())["corner"]["n_max"] == 8000
    assert (tmp_path / "breakeven.csv").read_text().startswith("# budget_s")


def test_classical_points_and_records_roundtrip(tmp_path):
    recs = [B.RunRecord("heuristic-d2", f"g{n}", 0, {"d": 2}, wall_ms=1.0, size=5, ratio=r, n=n, over_budget=o)
            for n, r, o in ((10, 0.9, False), (20, 0.85, False), (40, 0.8, True))]
    pts = B.classical_points(recs, ratio_from_largest=1)
    assert pts == [B.ClassicalPoint(2, 20, 0.85)]
    path = tmp_path / "records.jsonl"
    B.write_records(path, recs)
    assert B.read_records(path) == recs
    B.write_manifest(tmp_path / "manifest.json", ["a.udg"], [0, 1])
    assert json.loads((tmp_path / "manifest.json").read_text())["seeds"] == [0, 1]


def test_corpus_stats():
    r = B.RunRecord("heuristic-d15", "g", 0, {"d": 15}, ratio=1.0, n=12, extra={"subinstance_sizes": [12, 12]})
    (row,) = B.corpus_stats([r])
    assert row["mean_ratio"] == 1.0 and row["sem"] == 0 and row["q90_subinstance"] == 12
    g = G.generate(15, seed=2)
    s = B.run_classical_budgeted(g, 15, B.BudgetPolicy(0.5), exact_size=None, max_runs=3)
    (row,) = B.corpus_stats([s.best])
    assert row["q90_subinstance"] >= 0.9 * g.n - 1


def test_worker_count(monkeypatch):
    monkeypatch.setenv("UDMIS_THREADS", "4")
    assert B.worker_count() == 4
    monkeypatch.setenv("UDMIS_THREADS", "x")
    assert B.worker_count() == 1
