"""UD-MIS cost functions and the Lagrangian-relaxed target energy."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import UnitDiskGraph, as_bits

DEFAULT_U = 1.35


@dataclass(frozen=True, eq=False)
class TargetModel:
    graph: UnitDiskGraph
    u: float = DEFAULT_U

    def __post_init__(self):
        if not self.u > 1:
            raise ValueError(f"Lagrange multiplier must exceed 1, got {self.u}")


def f(g: UnitDiskGraph, s) -> int:
    """Set size (Hamming weight)."""
    return int(as_bits(s, g.n).sum())


def h(g: UnitDiskGraph, s) -> int:
    """Number of edges with both endpoints selected."""
    bits = as_bits(s, g.n)
    e = g.edges
    if len(e) == 0:
        return 0
    return int((bits[e[:, 0]] & bits[e[:, 1]]).sum())


def target_energy(g: UnitDiskGraph, s, u: float = DEFAULT_U) -> float:
    return -f(g, s) + u * h(g, s)


def target_energies(g: UnitDiskGraph, states, u: float = DEFAULT_U) -> np.ndarray:
    """Vectorized target energy for packed-integer states."""
    st = np.asarray(states, dtype=np.int64)
    energy = -np.bitwise_count(st).astype(float)
    for i, j in g.edges.tolist():
        both = ((st >> i) & 1) & ((st >> j) & 1)
        energy += u * both
    return energy


def approximation_ratio(exact_size: int, *, energy: float | None = None, g: UnitDiskGraph | None = None,
                        s=None, u: float = DEFAULT_U) -> float:
    """Target energy over -|S*|; for an independent set this is |s| / |S*|."""
    if exact_size < 1:
        raise ValueError("exact MIS size must be >= 1")
    if energy is None:
        if g is None or s is None:
            raise ValueError("pass either energy or (g, s)")
        energy = target_energy(g, s, u)
    return float(energy) / -exact_size


def target_minimizers(g: UnitDiskGraph, u: float) -> tuple[float, np.ndarray]:
    """Global minimum of the target energy over all 2^n bitstrings and its argmin states."""
    if g.n > 20:
        raise ValueError("enumeration limited to n <= 20")
    states = np.arange(1 << g.n, dtype=np.int64)
    e = target_energies(g, states, u)
    emin = e.min()
    return float(emin), states[np.isclose(e, emin, rtol=0, atol=1e-12)]


def u_bound_property_test(g: UnitDiskGraph, us=(1.05, 1.35, 2.0)) -> bool:
    """True iff every global minimizer of the target energy is an independent set
    for each multiplier in `us`."""
    emask = [(1 << i) | (1 << j) for i, j in g.edges.tolist()]
    for u in us:
        _, argmins = target_minimizers(g, u)
        for s in argmins.tolist():
            if any(s & m == m for m in emask):
                return False
    return True


def has_non_is_minimizer(g: UnitDiskGraph, u: float) -> bool:
    emask = [(1 << i) | (1 << j) for i, j in g.edges.tolist()]
    _, argmins = target_minimizers(g, u)
    return any(any(s & m == m for m in emask) for s in argmins.tolist())
