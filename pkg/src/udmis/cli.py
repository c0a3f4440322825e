"""Command-line entry point: `udmis <subcommand> ...`.

Exit codes: 0 success, 2 usage error, 3 budget or feasibility failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import bench, graph, heuristic, rydberg, shots, stats
from .anneal import OptimizerConfig, optimize_tf
from .exact import SolverTimeout, solve_exact

EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _graph_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(path.glob("*.udg"))
    return [path]


# --- subcommands -----------------------------------------------------------------

def cmd_gen_graphs(a) -> int:
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for k in range(a.count):
        g = graph.generate(a.n, a.nu, a.r, a.seed + k)
        p = out / f"udg_n{a.n}_s{a.seed + k}.udg"
        graph.save(g, p)
        files.append(p.name)
    bench.write_manifest(out / "manifest.json", files, [a.seed + k for k in range(a.count)],
                         n=a.n, nu=a.nu, r=a.r)
    _emit({"written": len(files), "out_dir": str(out)})
    return 0


def cmd_solve_exact(a) -> int:
    g = graph.load(a.graph)
    t0 = time.perf_counter()
    size, witness = solve_exact(g, None if a.timeout_ms is None else a.timeout_ms / 1e3)
    wall = 1e3 * (time.perf_counter() - t0)
    _emit({"size": size, "witness": "".join(map(str, witness.tolist())), "wall_ms": wall})
    return 0


def cmd_run_heuristic(a) -> int:
    g = graph.load(a.graph)
    exact = solve_exact(g)[0]
    for k in range(a.repeat):
        seed = a.seed + k
        t0 = time.perf_counter()
        sol, trace = heuristic.run(g, heuristic.HeuristicConfig(d=a.d, seed=seed))
        wall = 1e3 * (time.perf_counter() - t0)
        rec = bench.RunRecord(algo=f"heuristic-d{a.d}", graph_id=Path(a.graph).name, seed=seed,
                              params={"d": a.d}, wall_ms=wall, size=int(sol.sum()),
                              ratio=float(sol.sum()) / exact if exact else 1.0, n=g.n,
                              extra={"exact_size": exact, "subinstance_sizes": trace.subinstance_sizes,
                                     "solve_ms": 1e3 * trace.solve_time})
        _emit(rec.to_json())
    return 0


def cmd_simulate(a) -> int:
    g = graph.load(a.graph)
    c = rydberg.AnnealConfig().with_tf(a.tf)
    dist = rydberg.simulate(g, c, a.gamma, a.ntraj, a.seed, full_hilbert=a.full_hilbert)
    exact = solve_exact(g)[0]
    mass = 0.0
    if a.readout:
        eps, epsp = _floats(a.readout)
        dist = shots.apply_readout(dist, g, eps, epsp, rng=a.seed)
        dist, mass = shots.discard_and_renormalize(dist, g)
    obj = dist.to_json()
    obj["summary"] = {"e_target": dist.mean_energy, "ratio": stats.mean_ratio(dist, exact) if exact else None,
                      "exact_size": exact, "discarded_mass": mass}
    if a.out:
        Path(a.out).write_text(json.dumps(obj), encoding="utf-8")
        _emit(obj["summary"])
    else:
        _emit(obj)
    return 0


def cmd_optimize_tf(a) -> int:
    g = graph.load(a.graph)
    res = optimize_tf(g, a.gamma, OptimizerConfig(t0=a.t0, max_iters=a.max_iters, n_traj=a.ntraj, seed=a.seed))
    _emit(res.to_json())
    return 0


def cmd_analyze_corr(a) -> int:
    files = sorted(Path(a.dists).glob("*.json"))
    if not files:
        raise UsageError(f"no distribution files in {a.dists}")
    samples = []
    for f in files:
        d = shots.ShotDistribution.load(f)
        if d.points is None:
            raise UsageError(f"{f} carries no atom positions")
        samples.append((stats.spin_correlations(d), d.points))
    curve = stats.binned_g2(samples, a.delta_r, a.mode)
    _emit(stats.fit_xi(curve, density=a.nu).to_json())
    return 0


def cmd_fit_extrap(a) -> int:
    with open(a.samples, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows and not rows[0][0].replace(".", "", 1).isdigit():
        rows = rows[1:]
    fit = stats.fit_extrapolation([[float(x) for x in r[:3]] for r in rows], a.alpha_sat)
    out = fit.to_json()
    if a.predict:
        n, s = _floats(a.predict)
        y, lo, hi = fit.predict(n, s)
        out["prediction"] = {"n": n, "n_shots": s, "ratio": float(y), "lo": float(lo), "hi": float(hi)}
    _emit(out)
    return 0


def cmd_bound_check(a) -> int:
    rows = stats.gaussian_bound_check(_ints(a.sizes), _ints(a.shots), a.slack)
    w = csv.writer(sys.stdout)
    w.writerow(["S", "N", "alpha", "bound", "S_alpha_minus_half_sq", "half_log_N", "ok"])
    for r in rows:
        w.writerow([r.S, r.N, f"{r.alpha:.12g}", f"{r.bound:.12g}", f"{r.scaled:.12g}", f"{r.half_log_n:.12g}", int(r.ok)])
    return 0 if all(r.ok for r in rows) else EXIT_BUDGET


def cmd_budget_run(a) -> int:
    policy = bench.BudgetPolicy(a.budget, a.rate, a.timing)
    files = _graph_files(Path(a.graphs))
    if not files:
        raise UsageError(f"no graphs under {a.graphs}")
    records = []
    for f in files:
        g = graph.load(f)
        exact = solve_exact(g)[0]
        for d in _ints(a.d):
            sess = bench.run_classical_budgeted(g, d, policy, a.seed, exact, graph_id=f.name)
            records.append(sess.best)
            _emit(sess.best.to_json())
    if a.out:
        bench.write_records(a.out, records)
        bench.write_manifest(Path(a.out).with_suffix(".manifest.json"), [str(f) for f in files], [a.seed],
                             budget_s=a.budget, rate_hz=a.rate, d=_ints(a.d))
    return EXIT_BUDGET if records and all(r.over_budget for r in records) else 0


def _read_points(path) -> list[bench.ClassicalPoint]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(fh)]
    return [bench.ClassicalPoint(int(r["d"]), int(float(r["n_max"])), float(r["ratio"])) for r in rows]


def cmd_breakeven(a) -> int:
    policy = bench.BudgetPolicy(a.budget, a.rate)
    if a.points:
        points = _read_points(a.points)
    elif a.records:
        points = bench.classical_points(bench.read_records(a.records))
    else:
        raise UsageError("pass --points or --records")
    if not points:
        return EXIT_BUDGET
    fits = {}
    for spec in a.fit or []:
        key, _, path = spec.partition("=")
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        fits[key] = stats.ExtrapFit(obj["alpha_sat"], obj["beta"], obj["s2"], obj["sxx"], obj["dof"], obj.get("level", 0.95))
    rep = bench.breakeven_report(points, fits, policy)
    if a.out_dir:
        rep.save(a.out_dir)
    _emit(rep.to_json())
    return 0


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udmis", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen-graphs", help="generate random unit-disk graphs")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--nu", type=float, default=2.0)
    s.add_argument("--r", type=float, default=0.3)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(fn=cmd_gen_graphs)

    s = sub.add_parser("solve-exact", help="exact MIS of one graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--timeout-ms", type=float)
    s.set_defaults(fn=cmd_solve_exact)

    s = sub.add_parser("run-heuristic", help="locality heuristic, JSON lines of run records")
    s.add_argument("--graph", required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--repeat", type=int, default=1)
    s.set_defaults(fn=cmd_run_heuristic)

    s = sub.add_parser("simulate", help="noisy annealer simulation")
    s.add_argument("--graph", required=True)
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("--tf", type=float, required=True)
    s.add_argument("--ntraj", type=int, default=100)
    s.add_argument("--readout", help="eps,eps_prime")
    s.add_argument("--full-hilbert", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("optimize-tf", help="optimize the annealing time")
    s.add_argument("--graph", required=True)
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("--t0", type=float, default=1.0)
    s.add_argument("--max-iters", type=int, default=30)
    s.add_argument("--ntraj", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_optimize_tf)

    s = sub.add_parser("analyze-corr", help="correlation length from saved distributions")
    s.add_argument("--dists", required=True)
    s.add_argument("--delta-r", type=float, default=0.04)
    s.add_argument("--mode", choices=["max", "mean"], default="max")
    s.add_argument("--nu", type=float, default=2.0)
    s.set_defaults(fn=cmd_analyze_corr)

    s = sub.add_parser("fit-extrap", help="fit the n_shots / n_atoms extrapolation")
    s.add_argument("--samples", required=True, help="CSV rows: n_atoms,n_shots,ratio")
    s.add_argument("--alpha-sat", type=float, required=True)
    s.add_argument("--predict", help="n_atoms,n_shots")
    s.set_defaults(fn=cmd_fit_extrap)

    s = sub.add_parser("bound-check", help="binomial expected max vs Gaussian bound (CSV)")
    s.add_argument("--sizes", default="16,64,256")
    s.add_argument("--shots", default="1,10,100,1000")
    s.add_argument("--slack", type=float, default=0.05)
    s.set_defaults(fn=cmd_bound_check)

    s = sub.add_parser("budget-run", help="budgeted classical sessions")
    s.add_argument("--graphs", required=True, help="graph file or directory of .udg files")
    s.add_argument("--d", default="0,2,5")
    s.add_argument("--budget", type=float, default=2.0)
    s.add_argument("--rate", type=float, default=5.0)
    s.add_argument("--timing", choices=["wall", "solver"], default="wall")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="JSON-lines output file")
    s.set_defaults(fn=cmd_budget_run)

    s = sub.add_parser("breakeven", help="break-even report (CSV + JSON)")
    s.add_argument("--points", help="CSV with columns d,n_max,ratio")
    s.add_argument("--records", help="JSON-lines records from budget-run")
    s.add_argument("--fit", action="append", help="label=path to fit-extrap JSON")
    s.add_argument("--budget", type=float, default=2.0)
    s.add_argument("--rate", type=float, default=5.0)
    s.add_argument("--out-dir")
    s.set_defaults(fn=cmd_breakeven)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.fn(a)
    except (bench.BudgetError, SolverTimeout, graph.GraphGenerationError, rydberg.BasisTooLargeError,
            shots.DegenerateDistributionError) as e:
        print(f"udmis {a.cmd}: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, FileNotFoundError, ValueError) as e:
        print(f"udmis {a.cmd}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
