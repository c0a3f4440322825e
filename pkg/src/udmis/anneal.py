"""Annealing-time optimization: a one-parameter variational loop over t_f."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .graph import UnitDiskGraph
from .rydberg import AnnealConfig, Basis, NoiseModel, build_is_basis, simulate

TF_BOUNDS = (0.1, 20.0)


@dataclass(frozen=True)
class OptimizerConfig:
    t0: float = 1.0
    max_iters: int = 30
    rhobeg: float = 0.3
    tol: float = 0.02
    bounds: tuple[float, float] = TF_BOUNDS
    n_traj: int = 100
    seed: int = 0


@dataclass
class TfResult:
    tf_star: float
    e_star: float
    history: list[tuple[float, float]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"tf_star": self.tf_star, "e_star": self.e_star,
                "history": [[t, e] for t, e in self.history]}


class _Objective:
    """Target energy as a function of t_f, with a cache and an evaluation log.

    The trajectory seed is held fixed across evaluations (common random numbers),
    which makes the objective deterministic and smooth enough for a local method.
    """

    def __init__(self, g, noise, base: AnnealConfig, n_traj, seed, bounds, basis=None):
        self.g = g
        self.noise = noise
        self.base = base
        self.n_traj = n_traj
        self.seed = seed
        self.bounds = bounds
        self.basis = basis if basis is not None else build_is_basis(g, base.V, base.u)
        self.cache: dict[float, float] = {}
        self.history: list[tuple[float, float]] = []

    def clamp(self, t: float) -> float:
        return float(np.clip(t, *self.bounds))

    def __call__(self, t_f: float) -> float:
        t = self.clamp(float(np.ravel(t_f)[0]))
        if t not in self.cache:
            dist = simulate(self.g, self.base.with_tf(t), self.noise, self.n_traj, self.seed, basis=self.basis)
            self.cache[t] = dist.mean_energy
        self.history.append((t, self.cache[t]))
        return self.cache[t]


def optimize_tf(g: UnitDiskGraph, noise: NoiseModel | float, cfg: OptimizerConfig = OptimizerConfig(),
                base: AnnealConfig | None = None, basis: Basis | None = None) -> TfResult:
    """Minimize the simulated target energy over t_f with COBYLA.

    Proposals outside `cfg.bounds` are clamped. The returned point is the best
    one in the evaluation history, not necessarily COBYLA's last iterate.
    """
    if not cfg.t0 > 0:
        raise ValueError("t0 must be > 0")
    base = base or AnnealConfig()
    obj = _Objective(g, noise, base, cfg.n_traj, cfg.seed, cfg.bounds, basis)
    lo, hi = cfg.bounds
    cons = [{"type": "ineq", "fun": lambda x: x[0] - lo}, {"type": "ineq", "fun": lambda x: hi - x[0]}]
    minimize(obj, x0=[obj.clamp(cfg.t0)], method="COBYLA", constraints=cons,
             options={"rhobeg": cfg.rhobeg, "tol": cfg.tol, "maxiter": cfg.max_iters})
    t_best, e_best = min(obj.history, key=lambda p: p[1])
    return TfResult(t_best, e_best, obj.history)


def tf_scan(g: UnitDiskGraph, noise: NoiseModel | float, grid, n_traj: int = 100, seed: int = 0,
            base: AnnealConfig | None = None, basis: Basis | None = None) -> np.ndarray:
    """Target energy at each t_f in `grid`."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("empty t_f grid")
    base = base or AnnealConfig()
    basis = basis if basis is not None else build_is_basis(g, base.V, base.u)
    return np.array([simulate(g, base.with_tf(t), noise, n_traj, seed, basis=basis).mean_energy for t in grid])


def corpus_tf_scan(graphs, noise, grid, n_traj: int = 100, seed: int = 0) -> np.ndarray:
    """Corpus-mean energy curve over `grid`."""
    return np.mean([tf_scan(g, noise, grid, n_traj, seed) for g in graphs], axis=0)


@dataclass
class TfTableRow:
    n: int
    tf_mean: float
    tf_std: float
    count: int


def tf_vs_natoms(corpus: dict[int, list[UnitDiskGraph]], noise: NoiseModel | float,
                 cfg: OptimizerConfig = OptimizerConfig()) -> list[TfTableRow]:
    """Mean optimal annealing time per atom count."""
    rows = []
    for n in sorted(corpus):
        ts = [optimize_tf(g, noise, cfg).tf_star for g in corpus[n]]
        rows.append(TfTableRow(n, float(np.mean(ts)), float(np.std(ts)), len(ts)))
    return rows


def coefficient_of_variation(rows: list[TfTableRow]) -> float:
    """Spread of the per-n mean optimal times (0 for a single row)."""
    means = np.array([r.tf_mean for r in rows])
    if len(means) < 2:
        return 0.0
    return float(means.std(ddof=1) / means.mean())
