"""Heuristic approximation ratio vs graph size, and the largest size each d
finishes within a time budget.

    python3 scripts/classical_ratio_vs_n.py --sizes 50,100,200,400 --d 0,2,5,8 --graphs 20
"""
import argparse

import numpy as np

from udmis import bench, graph
from udmis.exact import solve_exact
from udmis.heuristic import HeuristicConfig, run

from _common import out_dir, write_csv, write_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--d", default="0,2,5,8")
    ap.add_argument("--graphs", type=int, default=20)
    ap.add_argument("--budget", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/classical")
    a = ap.parse_args()
    sizes = [int(x) for x in a.sizes.split(",")]
    ds = [int(x) for x in a.d.split(",")]
    out = out_dir(a.out)

    rows, records = [], []
    policy = bench.BudgetPolicy(a.budget)
    for n in sizes:
        gs = graph.corpus(n, a.graphs, seed=a.seed + 1000 * n)
        exact = [solve_exact(g)[0] for g in gs]
        for d in ds:
            r = np.array([run(g, HeuristicConfig(d=d, seed=k))[0].sum() / s for k, (g, s) in enumerate(zip(gs, exact))])
            sess = bench.run_classical_budgeted(gs[0], d, policy, a.seed, exact[0], graph_id=f"n{n}")
            records.append(sess.best)
            rows.append([n, d, r.mean(), r.std(ddof=1) / np.sqrt(len(r)), sess.completed, sess.best.ratio])
            print(f"n={n:5d} d={d:2d} ratio={r.mean():.4f} runs_in_budget={sess.completed}", flush=True)

    write_csv(out / "ratio_vs_n.csv", ["n", "d", "mean_ratio", "sem", "runs_in_budget", "best_of_budget"], rows)
    bench.write_records(out / "sessions.jsonl", records)
    pts = bench.classical_points(records)
    write_json(out / "frontier.json", {"budget_s": a.budget,
                                       "points": [p.__dict__ for p in pts],
                                       "staircase": [p.__dict__ for p in bench.pareto_staircase(pts)]})


if __name__ == "__main__":
    main()
