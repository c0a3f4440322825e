"""Noisy Rydberg-annealer simulation.

Units: time in microseconds, angular frequencies in rad/us. The dephasing rate
gamma is in 1/us. Basis states are packed integers (bit i = atom i excited).

Two Hilbert spaces are supported:

* the independent-set subspace (``build_is_basis``), integrated with an
  adaptive Dormand-Prince 5(4) scheme; the production path;
* the full 2^n space (``build_full_basis``, n <= 12), where close pairs give
  interaction energies up to ~1e4 rad/us. It is integrated with a Strang
  splitting that treats the diagonal exactly (reference path only).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .cost import DEFAULT_U, target_energies
from .graph import UnitDiskGraph
from .shots import ShotDistribution

TWO_PI = 2 * math.pi
OMEGA0 = TWO_PI * 1.89
DELTA0 = -TWO_PI * 6.0
DELTA_MAX = TWO_PI * 4.59
V_UNIT = TWO_PI * 2.7
RISE_FRACTION = 0.25
SWEEP_FRACTION = 0.44

MAX_BASIS_STATES = 1 << 26
FULL_HILBERT_MAX_N = 12
LINDBLAD_MAX_DIM = 64


class BasisTooLargeError(MemoryError):
    pass


class IntegratorError(RuntimeError):
    pass


@dataclass(frozen=True)
class AnnealConfig:
    t_f: float = 1.0
    omega0: float = OMEGA0
    delta0: float = DELTA0
    delta_max: float = DELTA_MAX
    t_rise: float | None = None
    t_sweep: float | None = None
    V: float = V_UNIT
    u: float = DEFAULT_U

    def __post_init__(self):
        if not self.t_f > 0:
            raise ValueError("t_f must be > 0")
        if self.t_rise is None:
            object.__setattr__(self, "t_rise", RISE_FRACTION * self.t_f)
        if self.t_sweep is None:
            object.__setattr__(self, "t_sweep", SWEEP_FRACTION * self.t_f)
        if self.t_rise < 0 or self.t_sweep < 0 or self.t_rise + self.t_sweep > self.t_f * (1 + 1e-12):
            raise ValueError("need 0 <= t_rise, t_sweep and t_rise + t_sweep <= t_f")

    def with_tf(self, t_f: float) -> "AnnealConfig":
        """Same amplitudes, stage durations rescaled to the default fractions of `t_f`."""
        return replace(self, t_f=float(t_f), t_rise=None, t_sweep=None)

    @property
    def kinks(self) -> np.ndarray:
        return np.array([self.t_rise, self.t_rise + self.t_sweep, self.t_f])


@dataclass(frozen=True)
class NoiseModel:
    gamma: float = 0.0
    eps: float = 0.0
    eps_prime: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if not (0 <= self.eps <= 1 and 0 <= self.eps_prime <= 1):
            raise ValueError("readout probabilities must lie in [0, 1]")


def schedule(t, c: AnnealConfig):
    """Vectorized (omega, delta) for the three-stage ramp."""
    t = np.asarray(t, dtype=float)
    t1 = c.t_rise
    t2 = c.t_rise + c.t_sweep
    rise = np.clip(t / t1, 0, 1) if t1 > 0 else np.ones_like(t)
    sweep = np.clip((t - t1) / c.t_sweep, 0, 1) if c.t_sweep > 0 else (t >= t1).astype(float)
    fall = np.clip((c.t_f - t) / (c.t_f - t2), 0, 1) if c.t_f > t2 else np.ones_like(t)
    omega = c.omega0 * np.minimum(rise, fall)
    delta = c.delta0 + (c.delta_max - c.delta0) * sweep
    return omega, delta


def schedule_at(t: float, c: AnnealConfig) -> tuple[float, float]:
    if not -1e-12 <= t <= c.t_f * (1 + 1e-12):
        raise ValueError(f"t={t} outside [0, t_f={c.t_f}]")
    om, de = schedule(t, c)
    return float(om), float(de)


# --- bases ------------------------------------------------------------------

@dataclass(eq=False)
class Basis:
    """Computational basis states with the diagonal pieces of both Hamiltonians.

    `occupation` is the excitation count, `interaction` the van der Waals sum
    over all excited pairs, `target` the target energy. `flips` is the symmetric
    0/1 matrix connecting states that differ in exactly one bit.
    """

    graph: UnitDiskGraph
    states: np.ndarray
    occupation: np.ndarray
    interaction: np.ndarray
    target: np.ndarray
    flips: sp.csr_matrix
    V: float
    u: float
    full: bool = False
    _dense_flips: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def n(self) -> int:
        return self.graph.n

    def index(self, state: int) -> int:
        i = int(np.searchsorted(self.states, state))
        if i >= self.dim or self.states[i] != state:
            raise KeyError(state)
        return i

    def bits(self) -> np.ndarray:
        return ((self.states[:, None] >> np.arange(self.n)) & 1).astype(np.float64)

    def flip_operator(self):
        # dense matmul wins for small bases
        if self.dim <= 128:
            if self._dense_flips is None:
                self._dense_flips = self.flips.toarray()
            return self._dense_flips
        return self.flips

    def flip_pairs(self) -> np.ndarray:
        coo = sp.triu(self.flips).tocoo()
        return np.stack([coo.row, coo.col], axis=1)

    @property
    def maximally_mixed_energy(self) -> float:
        return float(self.target.mean())


def enumerate_independent_sets(g: UnitDiskGraph, limit: int = MAX_BASIS_STATES) -> np.ndarray:
    lower = [sum(1 << j for j in g.adjacency[v] if j < v) for v in range(g.n)]
    states = [0]
    for v in range(g.n):
        bit = 1 << v
        add = [s | bit for s in states if not s & lower[v]]
        states.extend(add)
        if len(states) > limit:
            raise BasisTooLargeError(f"more than {limit} independent sets")
    return np.sort(np.array(states, dtype=np.int64))


def pair_couplings(g: UnitDiskGraph, V: float) -> np.ndarray:
    """V / r^6 for every pair of atoms, zero on the diagonal."""
    if g.n < 2:
        return np.zeros((g.n, g.n))
    d = g.distances()
    with np.errstate(divide="ignore"):
        c = V / d**6
    np.fill_diagonal(c, 0.0)
    return c


def _make_basis(g: UnitDiskGraph, states: np.ndarray, V: float, u: float, full: bool) -> Basis:
    n = g.n
    bits = ((states[:, None] >> np.arange(n)) & 1).astype(np.float64)
    occupation = bits.sum(1)
    interaction = 0.5 * np.einsum("si,ij,sj->s", bits, pair_couplings(g, V), bits) if n > 1 else np.zeros(len(states))
    rows, cols = [], []
    for q in range(n):
        lo = np.flatnonzero(bits[:, q] == 0)
        hi_states = states[lo] | (1 << q)
        j = np.searchsorted(states, hi_states)
        j = np.minimum(j, len(states) - 1)
        ok = states[j] == hi_states
        rows.append(lo[ok])
        cols.append(j[ok])
    r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cc = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    data = np.ones(2 * len(r))
    flips = sp.csr_matrix((data, (np.concatenate([r, cc]), np.concatenate([cc, r]))), shape=(len(states),) * 2)
    return Basis(g, states, occupation, interaction, target_energies(g, states, u), flips, V, u, full)


def build_is_basis(g: UnitDiskGraph, V: float = V_UNIT, u: float = DEFAULT_U, limit: int = MAX_BASIS_STATES) -> Basis:
    return _make_basis(g, enumerate_independent_sets(g, limit), V, u, full=False)


def build_full_basis(g: UnitDiskGraph, V: float = V_UNIT, u: float = DEFAULT_U) -> Basis:
    if g.n > FULL_HILBERT_MAX_N:
        raise BasisTooLargeError(f"full Hilbert space limited to n <= {FULL_HILBERT_MAX_N}")
    return _make_basis(g, np.arange(1 << g.n, dtype=np.int64), V, u, full=True)


def hamiltonian_apply(basis: Basis, omega: float, delta: float, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape[0] != basis.dim:
        raise ValueError(f"state has dimension {psi.shape[0]}, basis has {basis.dim}")
    diag = -delta * basis.occupation + basis.interaction
    if psi.ndim == 2:
        diag = diag[:, None]
    return 0.5 * omega * (basis.flips @ psi) + diag * psi


def hamiltonian_matrix(basis: Basis, omega: float, delta: float) -> np.ndarray:
    return 0.5 * omega * basis.flips.toarray() + np.diag(-delta * basis.occupation + basis.interaction)


# --- Monte-Carlo wave function (independent-set path) ------------------------

_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array([-71 / 57600, 0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
# continuous extension of the Dormand-Prince pair (coefficients of theta^1..theta^4)
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass
class TrajectoryResult:
    states: np.ndarray  # (dim, K) normalized final states
    jumps: np.ndarray  # jumps per trajectory
    steps: int
    norms: np.ndarray | None = None  # final norms before renormalization (no-jump segment)


class _MCWF:
    def __init__(self, basis: Basis, c: AnnealConfig, gamma: float, rtol: float, atol: float):
        self.basis = basis
        self.c = c
        self.gamma = gamma
        self.rtol = rtol
        self.atol = atol
        self.X = basis.flip_operator()
        self.occ = basis.occupation
        self.static = basis.interaction - 0.5j * gamma * basis.occupation
        self.bits = basis.bits()

    def rhs(self, t, Y):
        om, de = schedule(t, self.c)
        Y = np.ascontiguousarray(Y)
        # X is real: multiply the interleaved (re, im) float view to stay on BLAS
        XY = (self.X @ Y.view(np.float64)).view(np.complex128)
        D = self.static[:, None] - self.occ[:, None] * de[None, :]
        return -1j * (XY * (0.5 * om) + D * Y)

    def step(self, t, h, y0):
        hh = h[None, :]
        ks = [self.rhs(t, y0)]
        for s in range(1, 6):
            acc = sum(a * k for a, k in zip(_A[s], ks))
            ks.append(self.rhs(t + _C[s] * h, y0 + hh * acc))
        y1 = y0 + hh * sum(b * k for b, k in zip(_B, ks) if b != 0)
        ks.append(self.rhs(t + h, y1))
        err = hh * sum(e * k for e, k in zip(_E, ks) if e != 0)
        scale = self.atol + self.rtol * np.maximum(np.abs(y0), np.abs(y1))
        en = np.sqrt(np.mean(np.abs(err / scale) ** 2, axis=0))
        return y1, en, ks

    @staticmethod
    def dense_coeffs(h, ks):
        """Polynomial coefficients Q_p (p = 1..4) of the continuous extension, scaled by h."""
        return np.einsum("jdc,jp->pdc", np.stack(ks), _P) * h[None, None, :]

    @staticmethod
    def dense(y0, Q, theta):
        powers = theta[None, :] ** np.arange(1, 5)[:, None]  # (4, J)
        return y0 + np.einsum("pdc,pc->dc", Q, powers)

    def run(self, rngs: list[np.random.Generator], h0: float = 1e-3, max_steps: int = 10_000_000) -> TrajectoryResult:
        K = len(rngs)
        d = self.basis.dim
        Y = np.zeros((d, K), dtype=complex)
        Y[0, :] = 1.0
        t = np.zeros(K)
        h = np.full(K, h0)
        r = np.array([g.random() for g in rngs])
        jumps = np.zeros(K, dtype=int)
        kinks = self.c.kinks
        t_end = self.c.t_f
        noisy = self.gamma > 0
        steps = 0
        while True:
            idx = np.flatnonzero(t < t_end - 1e-12)
            if len(idx) == 0:
                break
            steps += 1
            if steps > max_steps:
                raise IntegratorError("step budget exhausted")
            tt = t[idx]
            nxt = kinks[np.minimum(np.searchsorted(kinks, tt + 1e-12, side="right"), len(kinks) - 1)]
            hh = np.minimum(h[idx], nxt - tt)
            if np.any(hh < 1e-14):
                raise IntegratorError("step size underflow")
            y0 = Y[:, idx]
            y1, en, ks = self.step(tt, hh, y0)
            ok = en <= 1.0
            with np.errstate(divide="ignore"):
                fac = np.where(en == 0, 5.0, np.clip(0.9 * en ** -0.2, 0.2, 5.0))
            fac = np.where(ok, fac, np.minimum(fac, 0.9))
            h[idx] = hh * fac
            if not ok.any():
                continue
            reached = np.where(np.isclose(tt + hh, nxt, rtol=0, atol=1e-12), nxt, tt + hh)
            jump = np.zeros(len(idx), dtype=bool)
            if noisy:
                norm1 = np.sum(np.abs(y1) ** 2, axis=0)
                jump = ok & (norm1 < r[idx])
            plain = ok & ~jump
            Y[:, idx[plain]] = y1[:, plain]
            t[idx[plain]] = reached[plain]
            if jump.any():
                self._jump(idx, jump, y0, hh, ks, tt, Y, t, r, jumps, rngs)
        norms = np.sqrt(np.sum(np.abs(Y) ** 2, axis=0))
        return TrajectoryResult(Y / norms, jumps, steps, norms)

    def _jump(self, idx, jump, y0, hh, ks, tt, Y, t, r, jumps, rngs):
        sel = np.flatnonzero(jump)
        cols = idx[sel]
        y0j = y0[:, sel]
        hj = hh[sel]
        kj = [k[:, sel] for k in ks]
        rj = r[cols]
        Q = self.dense_coeffs(hj, kj)
        lo = np.zeros(len(sel))
        hi = np.ones(len(sel))
        for _ in range(32):
            mid = 0.5 * (lo + hi)
            nm = np.sum(np.abs(self.dense(y0j, Q, mid)) ** 2, axis=0)
            below = nm < rj
            hi = np.where(below, mid, hi)
            lo = np.where(below, lo, mid)
        theta = hi
        yj = self.dense(y0j, Q, theta)
        weights = (np.abs(yj) ** 2).T @ self.bits  # (J, n) -> gamma * <n_i>
        for m, col in enumerate(cols):
            w = weights[m]
            total = w.sum()
            g = rngs[col]
            if total <= 0:
                # no excitation to dephase; treat as a no-op crossing
                Y[:, col] = yj[:, m] / np.linalg.norm(yj[:, m])
            else:
                i = int(np.searchsorted(np.cumsum(w), g.random() * total, side="right"))
                i = min(i, len(w) - 1)
                psi = yj[:, m] * self.bits[:, i]
                Y[:, col] = psi / np.linalg.norm(psi)
            r[col] = g.random()
            jumps[col] += 1
            t[col] = tt[sel[m]] + theta[m] * hj[m]


def trajectory_rngs(seed: int, count: int, start: int = 0) -> list[np.random.Generator]:
    """Independent per-trajectory generators keyed by (master seed, trajectory index)."""
    return [np.random.default_rng([int(seed), k]) for k in range(start, start + count)]


def evolve_trajectories(basis: Basis, c: AnnealConfig, gamma: float, n_traj: int, seed: int = 0,
                        rtol: float = 1e-6, atol: float = 1e-9, batch: int = 256) -> TrajectoryResult:
    """Monte-Carlo wave-function unraveling of the dephasing master equation.

    Each trajectory starts in the all-ground state, evolves under the
    non-Hermitian H - (i/2) gamma sum_i n_i until its squared norm falls to a
    uniform random threshold, then jumps with n_i (channel i chosen with weight
    <n_i>) and renormalizes.
    """
    if basis.full:
        return _split_trajectories(basis, c, gamma, n_traj, seed)
    outs, jumps, norms, steps = [], [], [], 0
    for start in range(0, n_traj, batch):
        k = min(batch, n_traj - start)
        res = _MCWF(basis, c, gamma, rtol, atol).run(trajectory_rngs(seed, k, start))
        outs.append(res.states)
        jumps.append(res.jumps)
        norms.append(res.norms)
        steps += res.steps
    return TrajectoryResult(np.concatenate(outs, axis=1), np.concatenate(jumps), steps, np.concatenate(norms))


def evolve_trajectory(basis: Basis, c: AnnealConfig, gamma: float, seed: int = 0, **kw) -> np.ndarray:
    return evolve_trajectories(basis, c, gamma, 1, seed, **kw).states[:, 0]


# --- exact master equation (oracle) -------------------------------------------

def dephasing_rates(basis: Basis, gamma: float) -> np.ndarray:
    """Elementwise decay of rho_ab under jump operators n_i: (gamma/2) * popcount(a ^ b)."""
    ham = np.bitwise_count(basis.states[:, None] ^ basis.states[None, :]).astype(float)
    return 0.5 * gamma * ham


def lindblad_exact(basis: Basis, c: AnnealConfig, gamma: float, rho0: np.ndarray | None = None,
                   rtol: float = 1e-10, atol: float = 1e-12, max_dim: int = LINDBLAD_MAX_DIM):
    """Direct integration of the master equation; returns (diagonal, rho)."""
    d = basis.dim
    if d > max_dim:
        raise BasisTooLargeError(f"Lindblad oracle limited to dimension {max_dim}, got {d}")
    X = basis.flips.toarray()
    occ = basis.occupation
    W = basis.interaction
    deph = dephasing_rates(basis, gamma)
    if rho0 is None:
        rho0 = np.zeros((d, d), dtype=complex)
        rho0[0, 0] = 1.0

    def rhs(t, y):
        rho = y.reshape(d, d)
        om, de = schedule(t, c)
        H = 0.5 * float(om) * X + np.diag(W - float(de) * occ)
        return (-1j * (H @ rho - rho @ H) - deph * rho).ravel()

    y = np.asarray(rho0, dtype=complex).ravel()
    t0 = 0.0
    for t1 in c.kinks:
        if t1 > t0:
            sol = solve_ivp(rhs, (t0, t1), y, method="DOP853", rtol=rtol, atol=atol)
            if not sol.success:
                raise IntegratorError(sol.message)
            y = sol.y[:, -1]
            t0 = t1
    rho = y.reshape(d, d)
    return np.real(np.diag(rho)).copy(), rho


# --- full Hilbert space reference (Strang splitting) ----------------------------

def _split_step_size(basis: Basis, h_max: float) -> float:
    coup = pair_couplings(basis.graph, basis.V)
    wmax = float(coup.max()) if coup.size else 0.0
    # keep the largest pair interaction below the aliasing limit of the diagonal phase
    return h_max if wmax == 0 else min(h_max, 1.0 / wmax)


def _rotate_all(Y: np.ndarray, n: int, theta: float) -> np.ndarray:
    """Apply exp(-i theta sigma_x) on every qubit to the rows of Y (2^n x K)."""
    cs, sn = math.cos(theta), math.sin(theta)
    K = Y.shape[1]
    for q in range(n):
        v = Y.reshape(-1, 2, 1 << q, K)
        a = v[:, 0].copy()
        b = v[:, 1]
        v[:, 0] = cs * a - 1j * sn * b
        v[:, 1] = cs * b - 1j * sn * a
    return Y


def _split_grid(c: AnnealConfig, h: float):
    t0 = 0.0
    for t1 in c.kinks:
        if t1 > t0:
            m = max(1, math.ceil((t1 - t0) / h - 1e-9))
            hs = (t1 - t0) / m
            for k in range(m):
                yield t0 + (k + 0.5) * hs, hs
            t0 = t1


def _split_trajectories(basis: Basis, c: AnnealConfig, gamma: float, n_traj: int, seed: int,
                        h_max: float = 2e-3) -> TrajectoryResult:
    n = basis.n
    h = _split_step_size(basis, h_max)
    K = 1 if gamma == 0 else n_traj
    rngs = trajectory_rngs(seed, K)
    r = np.array([g.random() for g in rngs])
    Y = np.zeros((basis.dim, K), dtype=complex)
    Y[0] = 1.0
    bits = basis.bits()
    jumps = np.zeros(K, dtype=int)
    steps = 0
    static = basis.interaction - 0.5j * gamma * basis.occupation
    for tm, hs in _split_grid(c, h):
        steps += 1
        om, de = schedule(tm, c)
        half = np.exp(-0.5j * hs * (static - de * basis.occupation))[:, None]
        Y *= half
        _rotate_all(Y, n, 0.5 * om * hs)
        Y *= half
        if gamma > 0:
            nm = np.sum(np.abs(Y) ** 2, axis=0)
            for col in np.flatnonzero(nm < r):
                # jump resolved to the end of the (short) step
                w = np.abs(Y[:, col]) ** 2 @ bits
                g = rngs[col]
                i = min(int(np.searchsorted(np.cumsum(w), g.random() * w.sum(), side="right")), n - 1)
                psi = Y[:, col] * bits[:, i]
                Y[:, col] = psi / np.linalg.norm(psi)
                r[col] = g.random()
                jumps[col] += 1
    norms = np.sqrt(np.sum(np.abs(Y) ** 2, axis=0))
    Y /= norms
    if gamma == 0 and n_traj > 1:
        Y = np.repeat(Y, n_traj, axis=1)
        norms = np.repeat(norms, n_traj)
        jumps = np.zeros(n_traj, dtype=int)
    return TrajectoryResult(Y, jumps, steps, norms)


def lindblad_split(basis: Basis, c: AnnealConfig, gamma: float, h_max: float = 2e-3) -> np.ndarray:
    """Density-matrix evolution by Strang splitting; returns the final rho.

    Intended for the full 2^n space where the diagonal is stiff.
    """
    n = basis.n
    h = _split_step_size(basis, h_max)
    d = basis.dim
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    deph = dephasing_rates(basis, gamma)
    for tm, hs in _split_grid(c, h):
        om, de = schedule(tm, c)
        diag = basis.interaction - de * basis.occupation
        ph = np.exp(-0.5j * hs * diag)
        half = np.outer(ph, ph.conj()) * np.exp(-0.5 * hs * deph)
        rho *= half
        rho = _rotate_all(rho, n, 0.5 * om * hs)
        rho = _rotate_all(rho.conj().T.copy(), n, 0.5 * om * hs).conj().T
        rho *= half
    return rho


# --- public entry point --------------------------------------------------------

def simulate(g: UnitDiskGraph, c: AnnealConfig, noise: NoiseModel | float = 0.0, n_traj: int = 100,
             seed: int = 0, full_hilbert: bool = False, method: str = "trajectories",
             basis: Basis | None = None) -> ShotDistribution:
    """Final measurement distribution of the annealing protocol (before readout errors).

    method="trajectories" averages |psi|^2 over `n_traj` quantum trajectories
    (a single deterministic trajectory when gamma = 0); method="lindblad"
    integrates the density matrix instead.
    """
    if not isinstance(noise, NoiseModel):
        noise = NoiseModel(gamma=float(noise))
    gamma = noise.gamma
    if basis is None:
        basis = build_full_basis(g, c.V, c.u) if full_hilbert else build_is_basis(g, c.V, c.u)
    if method == "trajectories":
        k = 1 if gamma == 0 else n_traj
        res = evolve_trajectories(basis, c, gamma, k, seed)
        probs = np.mean(np.abs(res.states) ** 2, axis=1)
        extra = {"n_traj": k, "mean_jumps": float(res.jumps.mean())}
    elif method == "lindblad":
        if basis.full:
            rho = lindblad_split(basis, c, gamma)
        else:
            rho = lindblad_exact(basis, c, gamma, max_dim=max(LINDBLAD_MAX_DIM, basis.dim))[1]
        probs = np.real(np.diag(rho))
        extra = {"n_traj": None}
    else:
        raise ValueError(f"unknown method {method!r}")
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    return ShotDistribution(
        n=g.n,
        states=basis.states,
        probs=probs,
        energies=basis.target,
        provenance={"gamma": gamma, "t_f": c.t_f, "u": c.u, "method": method,
                    "full_hilbert": basis.full, "seed": seed, "readout": None, **extra},
        points=np.array(g.points),
    )
