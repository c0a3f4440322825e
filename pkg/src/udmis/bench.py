"""Time-budget accounting, best-of-n selection and break-even reports."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .exact import solve_exact
from .graph import UnitDiskGraph
from .heuristic import HeuristicConfig, run as run_heuristic
from .shots import ShotDistribution, compensated_shots
from .stats import ExtrapFit, expected_max_ratio, mean_ratio

QUANTUM_TIME_NOTE = ("quantum time is modeled as n_shots / repetition_rate "
                     "(annealing duration neglected), not measured wall-clock")


class BudgetError(RuntimeError):
    """Budget too small for a single shot or run."""


@dataclass
class RunRecord:
    algo: str
    graph_id: str
    seed: int
    params: dict = field(default_factory=dict)
    wall_ms: float | None = None
    model_time_s: float | None = None
    size: int | None = None
    ratio: float | None = None
    n: int | None = None
    n_runs: int = 1
    over_budget: bool = False
    timestamp: float = field(default_factory=time.time)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "RunRecord":
        return cls(**obj)


@dataclass(frozen=True)
class BudgetPolicy:
    budget_s: float = 2.0
    repetition_rate_hz: float = 5.0
    timing: str = "wall"  # "wall": whole heuristic call; "solver": exact sub-solves only

    def __post_init__(self):
        if not self.budget_s > 0:
            raise ValueError("budget must be > 0")
        if not self.repetition_rate_hz > 0:
            raise ValueError("repetition rate must be > 0")
        if self.timing not in ("wall", "solver"):
            raise ValueError("timing must be 'wall' or 'solver'")

    @property
    def n_shots(self) -> int:
        return int(math.floor(self.budget_s * self.repetition_rate_hz + 1e-9))


def run_seed(seed: int, k: int) -> int:
    """Seed of the k-th run in a session, derived by counter from the session seed."""
    return int(np.random.SeedSequence([int(seed), int(k)]).generate_state(1, dtype=np.uint64)[0])


@dataclass
class ClassicalSession:
    best: RunRecord
    completed: int
    durations: list[float]
    ratios: list[float]

    @property
    def best_so_far(self) -> np.ndarray:
        return np.maximum.accumulate(self.ratios) if self.ratios else np.zeros(0)


def run_classical_budgeted(g: UnitDiskGraph, d: int, budget: BudgetPolicy, seed: int = 0,
                           exact_size: int | None = None, graph_id: str = "", max_runs: int | None = None) -> ClassicalSession:
    """Repeat the heuristic until the next run would overflow the budget; keep the best.

    A run is counted only if the cumulative time after it stays within budget,
    except the very first run, which is always reported (flagged over_budget
    when it alone exceeds the budget).
    """
    if exact_size is None:
        exact_size = solve_exact(g)[0]
    elapsed = 0.0
    durations, ratios, sizes = [], [], []
    subs: list[int] = []
    over = False
    k = 0
    while max_runs is None or k < max_runs:
        t0 = time.perf_counter()
        sol, trace = run_heuristic(g, HeuristicConfig(d=d, seed=run_seed(seed, k)))
        dt = time.perf_counter() - t0
        if budget.timing == "solver":
            dt = trace.solve_time
        if k == 0:
            subs = list(trace.subinstance_sizes)
        if elapsed + dt > budget.budget_s:
            if k == 0:
                over = True
                durations.append(dt)
                sizes.append(int(sol.sum()))
                ratios.append(sizes[-1] / exact_size if exact_size else 1.0)
            break
        elapsed += dt
        durations.append(dt)
        sizes.append(int(sol.sum()))
        ratios.append(sizes[-1] / exact_size if exact_size else 1.0)
        k += 1
    i = int(np.argmax(ratios))
    best = RunRecord(
        algo=f"heuristic-d{d}", graph_id=graph_id, seed=seed, params={"d": d, "budget_s": budget.budget_s,
                                                                          "timing": budget.timing},
        wall_ms=1e3 * float(sum(durations)), size=sizes[i], ratio=float(ratios[i]), n=g.n,
        n_runs=len(durations) if not over else 0, over_budget=over,
        extra={"exact_size": exact_size, "single_run_ratio": float(ratios[0]),
               "mean_run_ms": 1e3 * float(np.mean(durations)), "subinstance_sizes": subs},
    )
    return ClassicalSession(best, best.n_runs, durations, ratios)


def valid_shots(n_shots: int, discarded_mass: float) -> int:
    """Largest k whose compensated repetition count fits into `n_shots`."""
    if discarded_mass <= 0:
        return n_shots
    k = int(math.floor(n_shots * (1 - discarded_mass)))
    while k > 0 and compensated_shots(k, discarded_mass) > n_shots:
        k -= 1
    return k


def run_quantum_budgeted(dist: ShotDistribution, budget: BudgetPolicy, exact_size: int,
                         graph_id: str = "", discarded_mass: float = 0.0) -> RunRecord:
    n_shots = budget.n_shots
    if n_shots < 1:
        raise BudgetError(f"budget {budget.budget_s}s at {budget.repetition_rate_hz} Hz allows no shot")
    k = valid_shots(n_shots, discarded_mass)
    if k < 1:
        raise BudgetError("no valid shot survives the readout discard")
    one = mean_ratio(dist, exact_size)
    best = expected_max_ratio(dist, k, exact_size)
    prov = dist.provenance
    return RunRecord(
        algo=f"quantum-g{prov.get('gamma', 'na')}", graph_id=graph_id, seed=int(prov.get("seed", 0) or 0),
        params={"gamma": prov.get("gamma"), "t_f": prov.get("t_f"), "budget_s": budget.budget_s,
                "rate_hz": budget.repetition_rate_hz},
        model_time_s=n_shots / budget.repetition_rate_hz, ratio=float(best), n=dist.n, n_runs=n_shots,
        extra={"one_shot_ratio": float(one), "valid_shots": k, "discarded_mass": discarded_mass,
               "time_model": QUANTUM_TIME_NOTE},
    )


# --- frontier ---------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalPoint:
    d: int
    n_max: int
    ratio: float


def max_reachable_n(records: list[RunRecord]) -> int:
    """Largest n among sessions that completed within budget (0 if none)."""
    ok = [r.n for r in records if not r.over_budget and r.n is not None]
    return max(ok) if ok else 0


def classical_points(records: list[RunRecord], ratio_from_largest: int = 3) -> list[ClassicalPoint]:
    """Per-d (max reachable n, ratio) from budgeted sessions.

    The ratio is the mean best-of ratio over the `ratio_from_largest` largest
    in-budget sizes, a desk-scale stand-in for the asymptotic value.
    """
    by_d: dict[int, list[RunRecord]] = {}
    for r in records:
        by_d.setdefault(int(r.params["d"]), []).append(r)
    pts = []
    for d, rs in sorted(by_d.items()):
        nmax = max_reachable_n(rs)
        if nmax == 0:
            continue
        sizes = sorted({r.n for r in rs if not r.over_budget})[-ratio_from_largest:]
        ratio = float(np.mean([r.ratio for r in rs if not r.over_budget and r.n in sizes]))
        pts.append(ClassicalPoint(d, nmax, ratio))
    return pts


def pareto_staircase(points: list[ClassicalPoint]) -> list[ClassicalPoint]:
    """Points not dominated in both reachable size and ratio, sorted by n ascending.

    Along the result, ratio strictly decreases as n grows.
    """
    pts = sorted(points, key=lambda p: (-p.n_max, -p.ratio))
    out, best = [], -math.inf
    for p in pts:
        if p.ratio > best:
            out.append(p)
            best = p.ratio
    return out[::-1]


def frontier_ratio(staircase: list[ClassicalPoint], n: float) -> float:
    """Best classical ratio reachable at size n within the budget (-inf beyond reach)."""
    vals = [p.ratio for p in staircase if p.n_max >= n]
    return max(vals) if vals else -math.inf


@dataclass
class BreakevenReport:
    budget_s: float
    points: list[ClassicalPoint]
    staircase: list[ClassicalPoint]
    quantum: dict[str, list[dict]]
    note: str = QUANTUM_TIME_NOTE

    @property
    def corner(self) -> ClassicalPoint | None:
        return self.staircase[-1] if self.staircase else None

    def to_json(self) -> dict:
        return {
            "budget_s": self.budget_s,
            "note": self.note,
            "points": [asdict(p) for p in self.points],
            "staircase": [asdict(p) for p in self.staircase],
            "corner": asdict(self.corner) if self.corner else None,
            "quantum": self.quantum,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# budget_s={self.budget_s}; {self.note}\n")
        w = csv.writer(buf)
        w.writerow(["series", "d_or_gamma", "n", "ratio", "lo", "hi", "on_frontier", "quantum_ahead"])
        on = {(p.d, p.n_max) for p in self.staircase}
        for p in self.points:
            w.writerow(["classical", p.d, p.n_max, p.ratio, "", "", int((p.d, p.n_max) in on), ""])
        for key, rows in self.quantum.items():
            for r in rows:
                w.writerow(["quantum", key, r["n"], r["ratio"], r["lo"], r["hi"], "", int(r["ahead"])])
        return buf.getvalue()

    def save(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "breakeven.json").write_text(json.dumps(self.to_json(), indent=2), encoding="utf-8")
        (out / "breakeven.csv").write_text(self.to_csv(), encoding="utf-8")


def breakeven_report(points: list[ClassicalPoint], quantum: dict[str, ExtrapFit] | None, budget: BudgetPolicy,
                     n_grid=None) -> BreakevenReport:
    """Classical staircase plus extrapolated quantum lines on `n_grid`.

    A quantum point is "ahead" when its ratio beats every classical point that
    can reach that size within the budget.
    """
    if not points:
        raise ValueError("no classical points")
    stair = pareto_staircase(points)
    if n_grid is None:
        top = max(p.n_max for p in points)
        n_grid = np.unique(np.geomspace(10, 2 * top, 40).astype(int))
    lines = {}
    for key, fit in (quantum or {}).items():
        y, lo, hi = fit.predict(np.asarray(n_grid, dtype=float), budget.n_shots)
        lines[str(key)] = [
            {"n": int(n), "ratio": float(a), "lo": float(b), "hi": float(c),
             "ahead": bool(a > frontier_ratio(stair, n))}
            for n, a, b, c in zip(n_grid, y, lo, hi)
        ]
    return BreakevenReport(budget.budget_s, list(points), stair, lines)


# --- corpus summaries and persistence --------------------------------------

def corpus_stats(records: list[RunRecord]) -> list[dict]:
    """Mean ratio, standard error and sub-instance-size 0.9-quantile per (algo, n, params)."""
    groups: dict[tuple, list[RunRecord]] = {}
    for r in records:
        key = (r.algo, r.n, json.dumps({k: v for k, v in r.params.items() if k != "seed"}, sort_keys=True))
        groups.setdefault(key, []).append(r)
    out = []
    for (algo, n, params), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0, kv[0][2])):
        ratios = np.array([r.ratio for r in rs], dtype=float)
        sem = float(ratios.std(ddof=1) / math.sqrt(len(ratios))) if len(ratios) > 1 else 0.0
        subs = [s for r in rs for s in r.extra.get("subinstance_sizes", [])]
        out.append({
            "algo": algo, "n": n, "params": json.loads(params), "count": len(rs),
            "mean_ratio": float(ratios.mean()), "sem": sem,
            "q90_subinstance": float(np.quantile(subs, 0.9)) if subs else None,
        })
    return out


def write_records(path, records: list[RunRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json()) + "\n")


def read_records(path) -> list[RunRecord]:
    with open(path, encoding="utf-8") as fh:
        return [RunRecord.from_json(json.loads(line)) for line in fh if line.strip()]


def write_manifest(path, graph_files: list[str], seeds: list[int], **extra) -> None:
    Path(path).write_text(json.dumps({"graphs": graph_files, "seeds": seeds, **extra}, indent=2), encoding="utf-8")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("UDMIS_THREADS", "1")))
    except ValueError:
        return 1
