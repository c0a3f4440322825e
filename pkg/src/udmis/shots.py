"""Measurement-outcome distributions and the readout channel."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .cost import DEFAULT_U, target_energies
from .graph import UnitDiskGraph

EXACT_READOUT_MAX_N = 16


class DegenerateDistributionError(ValueError):
    pass


@dataclass(eq=False)
class ShotDistribution:
    """Probabilities of packed-integer basis states with their target energies."""

    n: int
    states: np.ndarray
    probs: np.ndarray
    energies: np.ndarray
    provenance: dict = field(default_factory=dict)
    points: np.ndarray | None = None

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.int64)
        self.probs = np.asarray(self.probs, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if not (len(self.states) == len(self.probs) == len(self.energies)):
            raise ValueError("states, probs and energies must have equal length")
        if np.any(self.probs < -1e-12):
            raise ValueError("negative probability")
        if abs(self.probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {self.probs.sum()!r}, not 1")
        if not np.all(np.isfinite(self.energies)):
            raise ValueError("non-finite energy")

    @property
    def mean_energy(self) -> float:
        return float(self.probs @ self.energies)

    def bits(self) -> np.ndarray:
        """(len(states), n) 0/1 matrix."""
        return ((self.states[:, None] >> np.arange(self.n)) & 1).astype(np.uint8)

    def occupations(self) -> np.ndarray:
        """<n_i> per atom."""
        return self.probs @ self.bits()

    def sample(self, size: int, rng=None) -> np.ndarray:
        rng = np.random.default_rng(rng)
        return rng.choice(self.states, size=size, p=self.probs / self.probs.sum())

    def to_json(self) -> dict:
        width = max(1, math.ceil(self.n / 4))
        out = {
            "n": self.n,
            "states": [format(int(s), f"0{width}x") for s in self.states],
            "probs": self.probs.tolist(),
            "energies": self.energies.tolist(),
            "provenance": self.provenance,
        }
        if self.points is not None:
            out["points"] = np.asarray(self.points).tolist()
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ShotDistribution":
        pts = obj.get("points")
        return cls(
            n=int(obj["n"]),
            states=np.array([int(s, 16) for s in obj["states"]], dtype=np.int64),
            probs=np.array(obj["probs"], dtype=float),
            energies=np.array(obj["energies"], dtype=float),
            provenance=dict(obj.get("provenance", {})),
            points=None if pts is None else np.array(pts, dtype=float),
        )

    def save(self, path, **extra) -> None:
        obj = self.to_json()
        obj.update(extra)
        Path(path).write_text(json.dumps(obj), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "ShotDistribution":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def from_probabilities(g: UnitDiskGraph, states, probs, u: float = DEFAULT_U, **provenance) -> ShotDistribution:
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    probs = probs / probs.sum()
    return ShotDistribution(
        n=g.n,
        states=np.asarray(states, dtype=np.int64),
        probs=probs,
        energies=target_energies(g, states, u),
        provenance=dict(provenance, u=u),
        points=np.array(g.points),
    )


def apply_readout(dist: ShotDistribution, g: UnitDiskGraph, eps: float, eps_prime: float,
                  n_samples: int = 200_000, rng=None) -> ShotDistribution:
    """Independent per-atom assignment errors: 0 -> 1 with probability `eps`,
    1 -> 0 with probability `eps_prime`.

    Exact tensor-product channel up to EXACT_READOUT_MAX_N atoms, sampled beyond.
    The result lives on the full bitstring space (non-independent sets included).
    """
    if not (0 <= eps <= 1 and 0 <= eps_prime <= 1):
        raise ValueError("readout error probabilities must lie in [0, 1]")
    u = dist.provenance.get("u", DEFAULT_U)
    n = dist.n
    if eps == 0 and eps_prime == 0:
        return replace(dist, provenance=dict(dist.provenance, readout=[0.0, 0.0]))
    if n <= EXACT_READOUT_MAX_N:
        full = np.zeros(1 << n)
        np.add.at(full, dist.states, dist.probs)
        for q in range(n):
            v = full.reshape(-1, 2, 1 << q)
            p0 = v[:, 0, :].copy()
            p1 = v[:, 1, :].copy()
            v[:, 0, :] = (1 - eps) * p0 + eps_prime * p1
            v[:, 1, :] = eps * p0 + (1 - eps_prime) * p1
        states = np.flatnonzero(full > 0)
        probs = full[states]
    else:
        rng = np.random.default_rng(rng)
        s = dist.sample(n_samples, rng)
        bits = (s[:, None] >> np.arange(n)) & 1
        flip = np.where(bits == 1, rng.random(bits.shape) < eps_prime, rng.random(bits.shape) < eps)
        bits = bits ^ flip
        s2 = (bits << np.arange(n)).sum(1)
        states, counts = np.unique(s2, return_counts=True)
        probs = counts / counts.sum()
    probs = probs / probs.sum()
    return ShotDistribution(
        n=n,
        states=states,
        probs=probs,
        energies=target_energies(g, states, u),
        provenance=dict(dist.provenance, readout=[eps, eps_prime]),
        points=dist.points,
    )


def discard_and_renormalize(dist: ShotDistribution, g: UnitDiskGraph) -> tuple[ShotDistribution, float]:
    """Drop non-independent outcomes and renormalize; returns the discarded mass."""
    emask = np.array([(1 << i) | (1 << j) for i, j in g.edges.tolist()], dtype=np.int64)
    if len(emask):
        bad = np.any((dist.states[:, None] & emask[None, :]) == emask[None, :], axis=1)
    else:
        bad = np.zeros(len(dist.states), dtype=bool)
    mass = float(dist.probs[bad].sum())
    keep = ~bad
    if not keep.any() or dist.probs[keep].sum() <= 0:
        raise DegenerateDistributionError("all probability mass lies on non-independent sets")
    p = dist.probs[keep] / dist.probs[keep].sum()
    out = ShotDistribution(
        n=dist.n,
        states=dist.states[keep],
        probs=p,
        energies=dist.energies[keep],
        provenance=dict(dist.provenance, discarded_mass=mass),
        points=dist.points,
    )
    return out, mass


def compensated_shots(n_shots: int, discarded_mass: float) -> int:
    """Repetitions needed so that `n_shots` valid outcomes survive on average."""
    if not 0 <= discarded_mass < 1:
        raise ValueError("discarded mass must lie in [0, 1)")
    return math.ceil(n_shots / (1.0 - discarded_mass) - 1e-12)
