"""Independent-set-restricted vs full-Hilbert-space target energies at the optimized t_f.

Also lists each graph's longest edge: edges longer than (V / delta_max)^(1/6)
are not blockaded at the end of the sweep in the full model.

    python3 scripts/is_vs_full.py --cases 6:0,6:1,8:0,8:1,10:0
"""
import argparse

from udmis import graph, rydberg
from udmis.anneal import OptimizerConfig, optimize_tf

from _common import out_dir, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", default="6:0,6:1,8:0,8:1,10:0", help="n:seed pairs")
    ap.add_argument("--gammas", default="0,0.3")
    ap.add_argument("--ntraj", type=int, default=100)
    ap.add_argument("--out", default="results/is_vs_full")
    a = ap.parse_args()
    c0 = rydberg.AnnealConfig()
    r_block = (c0.V / c0.delta_max) ** (1 / 6)
    rows = []
    for case in a.cases.split(","):
        n, seed = map(int, case.split(":"))
        g = graph.generate(n, seed=seed)
        e = g.edges
        longest = float(g.distances()[e[:, 0], e[:, 1]].max()) if len(e) else 0.0
        basis = rydberg.build_is_basis(g)
        for gamma in map(float, a.gammas.split(",")):
            res = optimize_tf(g, gamma, OptimizerConfig(n_traj=a.ntraj, max_iters=10), basis=basis)
            c = c0.with_tf(res.tf_star)
            e_is = rydberg.simulate(g, c, gamma, a.ntraj, 0, basis=basis).mean_energy
            e_full = rydberg.simulate(g, c, gamma, a.ntraj, 0, full_hilbert=True).mean_energy
            rel = abs(e_is - e_full) / abs(e_is)
            rows.append([n, seed, gamma, res.tf_star, e_is, e_full, rel, longest])
            print(f"n={n} seed={seed} gamma={gamma} t_f={res.tf_star:.2f} IS={e_is:.4f} full={e_full:.4f} "
                  f"rel={100 * rel:.2f}% longest_edge={longest:.3f} (blockade radius {r_block:.3f})", flush=True)
    write_csv(out_dir(a.out) / "is_vs_full.csv",
              ["n", "seed", "gamma", "tf_star", "E_is", "E_full", "rel_gap", "longest_edge"], rows)


if __name__ == "__main__":
    main()
