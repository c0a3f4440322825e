"""Target energy vs annealing time per dephasing rate (corpus mean), plus the
optimized t_f per atom count.

    python3 scripts/tf_scan.py --n 8 --graphs 3
    python3 scripts/tf_scan.py --table 6,8,10,12 --gamma 3
"""
import argparse

import numpy as np

from udmis import graph
from udmis.anneal import OptimizerConfig, coefficient_of_variation, corpus_tf_scan, tf_vs_natoms

from _common import out_dir, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--graphs", type=int, default=3)
    ap.add_argument("--gammas", default="0,0.3,3")
    ap.add_argument("--grid", default="0.1,0.2,0.5,1,1.5,2,3,4,6,10,20")
    ap.add_argument("--ntraj", type=int, default=100)
    ap.add_argument("--table", help="comma-separated atom counts: optimize t_f per n instead of scanning")
    ap.add_argument("--gamma", type=float, default=3.0, help="dephasing rate for --table")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/tf")
    a = ap.parse_args()
    out = out_dir(a.out)

    if a.table:
        corpus = {n: graph.corpus(n, a.graphs, seed=a.seed + 100 * n) for n in map(int, a.table.split(","))}
        rows = tf_vs_natoms(corpus, a.gamma, OptimizerConfig(n_traj=a.ntraj, max_iters=10, seed=a.seed))
        write_csv(out / f"tf_vs_n_gamma{a.gamma}.csv", ["n", "tf_mean", "tf_std", "count"],
                  [[r.n, r.tf_mean, r.tf_std, r.count] for r in rows])
        for r in rows:
            print(f"n={r.n:3d} t_f*={r.tf_mean:.2f} +- {r.tf_std:.2f}")
        print(f"coefficient of variation across n: {coefficient_of_variation(rows):.3f}")
        return

    grid = np.array([float(x) for x in a.grid.split(",")])
    graphs = graph.corpus(a.n, a.graphs, seed=a.seed)
    rows = [[t] for t in grid]
    gammas = [float(x) for x in a.gammas.split(",")]
    for gamma in gammas:
        e = corpus_tf_scan(graphs, gamma, grid, a.ntraj, a.seed)
        for row, v in zip(rows, e):
            row.append(v)
        print(f"gamma={gamma}: " + " ".join(f"{t:g}:{v:.3f}" for t, v in zip(grid, e)), flush=True)
    write_csv(out / f"scan_n{a.n}.csv", ["t_f"] + [f"E_gamma{g}" for g in gammas], rows)


if __name__ == "__main__":
    main()
