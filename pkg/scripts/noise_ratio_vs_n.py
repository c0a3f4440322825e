"""Simulated one-shot and best-of-10 ratios vs atom count for several dephasing rates,
each at its optimized annealing time.

    python3 scripts/noise_ratio_vs_n.py --sizes 6,8,10,12 --gammas 0,0.3,3 --graphs 3
"""
import argparse

import numpy as np

from udmis import graph, rydberg
from udmis.anneal import OptimizerConfig, optimize_tf
from udmis.exact import solve_exact
from udmis.stats import expected_max_ratio, mean_ratio

from _common import out_dir, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="6,8,10,12")
    ap.add_argument("--gammas", default="0,0.3,3")
    ap.add_argument("--graphs", type=int, default=3)
    ap.add_argument("--ntraj", type=int, default=100)
    ap.add_argument("--max-iters", type=int, default=10)
    ap.add_argument("--shots", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/noise")
    a = ap.parse_args()
    cfg = OptimizerConfig(n_traj=a.ntraj, max_iters=a.max_iters, seed=a.seed)
    out = out_dir(a.out)

    rows = []
    for n in map(int, a.sizes.split(",")):
        for k, g in enumerate(graph.corpus(n, a.graphs, seed=a.seed + 100 * n)):
            size = solve_exact(g)[0]
            basis = rydberg.build_is_basis(g)
            for gamma in map(float, a.gammas.split(",")):
                res = optimize_tf(g, gamma, cfg, basis=basis)
                dist = rydberg.simulate(g, rydberg.AnnealConfig(t_f=res.tf_star), gamma, a.ntraj, a.seed, basis=basis)
                one, best = mean_ratio(dist, size), expected_max_ratio(dist, a.shots, size)
                rows.append([n, k, gamma, res.tf_star, one, best])
                print(f"n={n} graph={k} gamma={gamma} t_f*={res.tf_star:.2f} one={one:.3f} best{a.shots}={best:.3f}",
                      flush=True)
    write_csv(out / "ratio_vs_n.csv", ["n", "graph", "gamma", "tf_star", "one_shot", f"best_of_{a.shots}"], rows)

    arr = np.array(rows, dtype=float)
    for gamma in np.unique(arr[:, 2]):
        sel = arr[arr[:, 2] == gamma]
        means = [f"n={int(n)}: {sel[sel[:, 0] == n, 4].mean():.3f}" for n in np.unique(sel[:, 0])]
        print(f"gamma={gamma}: " + ", ".join(means))


if __name__ == "__main__":
    main()
