"""Randomized locality-based UD-MIS heuristic.

Repeatedly pick a random remaining vertex u, solve MIS exactly on the ball of
hop radius d around u (within the remaining graph), keep that local solution,
and delete the ball together with every remaining vertex adjacent to the
selected vertices (the "border").
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .exact import BitsetMIS, _bits
from .graph import UnitDiskGraph


@dataclass(frozen=True)
class HeuristicConfig:
    d: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("d must be >= 0")


@dataclass
class HeuristicTrace:
    seeds_chosen: list[int] = field(default_factory=list)
    subinstance_sizes: list[int] = field(default_factory=list)
    border_removed: list[int] = field(default_factory=list)
    solve_times: list[float] = field(default_factory=list)
    spheres: list[list[int]] = field(default_factory=list)
    borders: list[list[int]] = field(default_factory=list)

    @property
    def solve_time(self) -> float:
        return float(sum(self.solve_times))


def constrained_border(g: UnitDiskGraph, active, sphere, local_mis) -> set[int]:
    """Active vertices outside `sphere` adjacent to a selected vertex of `local_mis`.

    `local_mis` is an iterable of selected vertex ids (original labels).
    """
    act = set(active)
    sph = set(sphere)
    out = set()
    for v in local_mis:
        for w in g.adjacency[v]:
            if w in act and w not in sph:
                out.add(w)
    return out


def run(g: UnitDiskGraph, cfg: HeuristicConfig, keep_sets: bool = False) -> tuple[np.ndarray, HeuristicTrace]:
    rng = np.random.default_rng(cfg.seed)
    adj = g.masks
    adjl = g.adjacency
    n = g.n
    d = cfg.d
    # swap-remove pool for O(1) uniform picks
    pool = list(range(n))
    pos = list(range(n))
    alive = [True] * n

    def remove(v):
        alive[v] = False
        i = pos[v]
        last = pool.pop()
        if last != v:
            pool[i] = last
            pos[last] = i

    solution = np.zeros(n, dtype=np.uint8)
    trace = HeuristicTrace()
    solver = BitsetMIS(adj)
    while pool:
        u = pool[int(rng.integers(len(pool)))]
        sphere = [u]
        seen = {u}
        frontier = [u]
        for _ in range(d):
            nxt = []
            for v in frontier:
                for w in adjl[v]:
                    if alive[w] and w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if not nxt:
                break
            sphere.extend(nxt)
            frontier = nxt
        mask = 0
        for v in sphere:
            mask |= 1 << v
        t0 = time.perf_counter()
        local = solver.solve(mask) if len(sphere) > 1 else mask
        trace.solve_times.append(time.perf_counter() - t0)
        chosen = list(_bits(local))
        border = set()
        for v in chosen:
            solution[v] = 1
            for w in adjl[v]:
                if alive[w] and w not in seen:
                    border.add(w)
        for v in sphere:
            remove(v)
        for v in border:
            remove(v)
        trace.seeds_chosen.append(u)
        trace.subinstance_sizes.append(len(sphere))
        trace.border_removed.append(len(border))
        if keep_sets:
            trace.spheres.append(sorted(sphere))
            trace.borders.append(sorted(border))
    return solution, trace
