"""Quantum-vs-classical break-even benchmarking for unit-disk maximum independent set."""
from .graph import UnitDiskGraph, generate
from .exact import brute_force, is_independent, solve_exact
from .heuristic import HeuristicConfig, run as run_heuristic
from .cost import approximation_ratio, target_energy
from .shots import ShotDistribution
from .rydberg import AnnealConfig, NoiseModel, build_is_basis, simulate

__version__ = "0.1.0"
