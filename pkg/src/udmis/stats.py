"""Statistics over shot distributions: expected maxima, correlations, fits."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .graph import UnitDiskGraph
from .shots import ShotDistribution


class FitError(ValueError):
    pass


# --- expectation of the maximum ---------------------------------------------

@dataclass(frozen=True)
class EnergyCDF:
    """Right-continuous step CDF over the distinct values `x` (sorted ascending)."""

    x: np.ndarray
    F: np.ndarray

    @classmethod
    def from_values(cls, values, probs) -> "EnergyCDF":
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        x, inv = np.unique(values, return_inverse=True)
        mass = np.bincount(inv, weights=probs, minlength=len(x))
        F = np.cumsum(mass) / mass.sum()
        F[-1] = 1.0
        return cls(x, F)

    @classmethod
    def from_distribution(cls, dist: ShotDistribution, exact_size: int) -> "EnergyCDF":
        """CDF of the normalized energy x = E / E_min with E_min = -exact_size."""
        return cls.from_values(dist.energies / -float(exact_size), dist.probs)

    def __call__(self, t) -> np.ndarray:
        i = np.searchsorted(self.x, t, side="right")
        return np.where(i > 0, self.F[np.maximum(i - 1, 0)], 0.0)

    def expected_max(self, n: int) -> float:
        """E[max of n draws] = x_max - integral of F^n over [x_min, x_max], exact for steps."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if len(self.x) == 1:
            return float(self.x[0])
        widths = np.diff(self.x)
        return float(self.x[-1] - np.sum(self.F[:-1] ** n * widths))


def mean_ratio(dist: ShotDistribution, exact_size: int) -> float:
    return float(dist.probs @ dist.energies) / -float(exact_size)


def expected_max_ratio(dist: ShotDistribution, n_shots: int, exact_size: int) -> float:
    """Expected best-of-`n_shots` approximation ratio, 1 - int_0^1 F(x)^n dx for x in [0, 1]."""
    return EnergyCDF.from_distribution(dist, exact_size).expected_max(n_shots)


def expected_max_ratio_normalized(dist: ShotDistribution, n_shots: int, exact_size: int) -> float:
    """Same quantity via the form 1 - int_0^1 F^n dx; requires the support inside [0, 1]."""
    cdf = EnergyCDF.from_distribution(dist, exact_size)
    if cdf.x[0] < -1e-12 or cdf.x[-1] > 1 + 1e-12:
        raise ValueError("normalized form needs ratios in [0, 1]")
    knots = np.concatenate([[0.0], cdf.x, [1.0]])
    levels = np.concatenate([[0.0], cdf.F])  # F on [knots[k], knots[k+1])
    return float(1.0 - np.sum(levels ** n_shots * np.diff(knots)))


def expected_max_energy(dist: ShotDistribution, n_shots: int) -> float:
    """M(N) in energy units for the score -E (best = lowest target energy)."""
    return EnergyCDF.from_values(-dist.energies, dist.probs).expected_max(n_shots)


def brute_force_expected_max(values, probs, n: int) -> float:
    """Sum over all n-tuples of max(values) * product of probs. Oracle only."""
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    total = 0.0
    for idx in itertools.product(range(len(values)), repeat=n):
        idx = list(idx)
        total += values[idx].max() * np.prod(probs[idx])
    return float(total)


def sampled_expected_max(values, probs, n: int, resamples: int = 100_000, rng=None) -> tuple[float, float]:
    """Monte-Carlo estimate of E[max of n draws] and its standard error."""
    rng = np.random.default_rng(rng)
    values = np.asarray(values, dtype=float)
    draws = rng.choice(values, size=(resamples, n), p=np.asarray(probs) / np.sum(probs))
    m = draws.max(axis=1)
    return float(m.mean()), float(m.std(ddof=1) / math.sqrt(resamples))


# --- spin correlations and correlation length -------------------------------

def spin_correlations(dist: ShotDistribution | tuple) -> np.ndarray:
    """<z_i z_j> with z = 1 - 2 n. Accepts a ShotDistribution or (states, probs, n)."""
    if isinstance(dist, ShotDistribution):
        states, probs, n = dist.states, dist.probs, dist.n
    else:
        states, probs, n = dist
    z = 1.0 - 2.0 * ((np.asarray(states)[:, None] >> np.arange(n)) & 1)
    return (z * np.asarray(probs)[:, None]).T @ z


@dataclass
class G2Curve:
    centers: np.ndarray
    values: np.ndarray
    counts: np.ndarray
    delta_r: float


def binned_g2(samples, delta_r: float = 0.04, mode: str = "max") -> G2Curve:
    """Envelope of |<z_i z_j>| vs pair distance.

    `samples` is an iterable of (corr matrix, points) or (corr matrix, graph).
    Bin k covers [k*delta_r, (k+1)*delta_r); each bin reports the max (or mean)
    over all graphs and pairs whose distance falls in it. Empty bins are dropped.
    """
    if mode not in ("max", "mean"):
        raise ValueError("mode must be 'max' or 'mean'")
    rs, cs = [], []
    for corr, geom in samples:
        pts = geom.points if isinstance(geom, UnitDiskGraph) else np.asarray(geom, dtype=float)
        i, j = np.triu_indices(len(pts), k=1)
        rs.append(np.linalg.norm(pts[i] - pts[j], axis=1))
        cs.append(np.abs(np.asarray(corr)[i, j]))
    if not rs or sum(len(r) for r in rs) == 0:
        raise FitError("no pairs to bin")
    r = np.concatenate(rs)
    c = np.concatenate(cs)
    k = np.floor(r / delta_r).astype(int)
    bins = np.unique(k)
    vals = np.array([c[k == b].max() if mode == "max" else c[k == b].mean() for b in bins])
    counts = np.array([(k == b).sum() for b in bins])
    return G2Curve((bins + 0.5) * delta_r, vals, counts, delta_r)


@dataclass
class CorrFit:
    xi: float
    residual: float
    n_points: int
    curve: G2Curve | None = None
    intercept: float = 0.0
    density: float = 2.0

    @property
    def n_star(self) -> int:
        return n_star(self.density, self.xi)

    def to_json(self) -> dict:
        out = {"xi": self.xi, "residual": self.residual, "n_points": self.n_points,
               "intercept": self.intercept, "n_star": self.n_star, "density": self.density}
        if self.curve is not None:
            out["bins"] = {"centers": self.curve.centers.tolist(), "g2": self.curve.values.tolist(),
                           "delta_r": self.curve.delta_r}
        return out


def fit_xi(curve: G2Curve | tuple, density: float = 2.0, intercept: bool = False) -> CorrFit:
    """Least-squares fit of log g2 = -r / xi (+ c when `intercept`).

    Non-positive g2 values are dropped; at least three usable bins are required.
    """
    if isinstance(curve, G2Curve):
        r, y = curve.centers, curve.values
    else:
        r, y = (np.asarray(a, dtype=float) for a in curve)
        curve = None
    ok = y > 0
    r, y = r[ok], np.log(y[ok])
    if len(r) < 3:
        raise FitError("need at least 3 positive g2 bins")
    if intercept:
        A = np.stack([r, np.ones_like(r)], axis=1)
    else:
        A = r[:, None]
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    slope = coef[0]
    if not slope < 0:
        raise FitError("g2 does not decay")
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return CorrFit(float(-1.0 / slope), resid, int(len(r)), curve, float(coef[1]) if intercept else 0.0, density)


def n_star(density: float, xi: float) -> int:
    """Atoms in a xi-by-xi square, rounded to an integer."""
    return int(round(density * xi * xi))


# --- extrapolation ----------------------------------------------------------

def shots_regressor(n_atoms, n_shots) -> np.ndarray:
    n_atoms = np.asarray(n_atoms, dtype=float)
    n_shots = np.asarray(n_shots, dtype=float)
    return np.sqrt(np.log(n_shots) / (2.0 * n_atoms))


@dataclass
class ExtrapFit:
    alpha_sat: float
    beta: float
    s2: float
    sxx: float
    dof: int
    level: float = 0.95
    method: str = "zero-intercept OLS, t prediction interval"

    def predict(self, n_atoms, n_shots) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Point estimate and prediction-interval bounds."""
        x = shots_regressor(n_atoms, n_shots)
        y = self.alpha_sat + self.beta * x
        if self.dof < 1:
            half = np.full_like(x, np.inf)
        else:
            tq = sps.t.ppf(0.5 + self.level / 2, self.dof)
            half = tq * np.sqrt(self.s2 * (1.0 + x**2 / self.sxx))
        return y, y - half, y + half

    def to_json(self) -> dict:
        return {"alpha_sat": self.alpha_sat, "beta": self.beta, "s2": self.s2, "sxx": self.sxx,
                "dof": self.dof, "level": self.level, "interval_method": self.method}


def fit_extrapolation(samples, alpha_sat: float, level: float = 0.95) -> ExtrapFit:
    """Fit alpha(n, N) = alpha_sat + beta * sqrt(log N / 2n) with alpha_sat held fixed.

    `samples` rows are (n_atoms, n_shots, max_ratio). beta is the zero-intercept
    least-squares slope of (ratio - alpha_sat) on the regressor; the prediction
    interval uses Student t with (m - 1) degrees of freedom.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or len(arr) < 3:
        raise FitError("need at least 3 (n_atoms, n_shots, ratio) rows")
    x = shots_regressor(arr[:, 0], arr[:, 1])
    y = arr[:, 2] - alpha_sat
    sxx = float(x @ x)
    if sxx <= 0:
        raise FitError("degenerate regressor: every row has n_shots = 1")
    beta = float(x @ y / sxx)
    dof = len(arr) - 1
    s2 = float(np.sum((y - beta * x) ** 2) / dof)
    return ExtrapFit(float(alpha_sat), beta, s2, sxx, dof, level)


# --- Gaussian bound for uniform distributions ------------------------------

@dataclass
class BoundRow:
    S: int
    N: int
    alpha: float
    bound: float
    scaled: float  # S * (alpha - 1/2)^2
    half_log_n: float
    ok: bool


def binomial_expected_max_ratio(S: int, N: int) -> float:
    """Expected max over N uniform bitstrings of (Hamming weight / S)."""
    k = np.arange(S + 1)
    pmf = sps.binom.pmf(k, S, 0.5)
    return EnergyCDF.from_values(k / S, pmf).expected_max(N)


def gaussian_bound_check(sizes=(16, 64, 256), shots=(1, 10, 100, 1000), slack: float = 0.05) -> list[BoundRow]:
    rows = []
    for S in sizes:
        for N in shots:
            a = binomial_expected_max_ratio(S, N)
            b = 0.5 + math.sqrt(math.log(N) / (2 * S))
            rows.append(BoundRow(S, N, a, b, S * (a - 0.5) ** 2, math.log(N) / 2, a <= b + slack))
    return rows


def bound_rows_monotone(rows: list[BoundRow]) -> bool:
    """S * (alpha - 1/2)^2 non-decreasing in N for every S."""
    by_s: dict[int, list[BoundRow]] = {}
    for r in rows:
        by_s.setdefault(r.S, []).append(r)
    for rs in by_s.values():
        rs = sorted(rs, key=lambda r: r.N)
        if any(b.scaled < a.scaled - 1e-12 for a, b in zip(rs, rs[1:])):
            return False
    return True


# --- misc ------------------------------------------------------------------

@dataclass
class Summary:
    mean: float
    sem: float
    count: int
    q90: float | None = None
    extra: dict = field(default_factory=dict)


def summarize(values, quantile_of=None) -> Summary:
    v = np.asarray(values, dtype=float)
    sem = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else 0.0
    q = None
    if quantile_of is not None and len(quantile_of):
        q = float(np.quantile(np.asarray(quantile_of, dtype=float), 0.9))
    return Summary(float(v.mean()), sem, len(v), q)


def bootstrap_increasing(groups: list[np.ndarray], n_boot: int = 2000, rng=None) -> float:
    """Fraction of paired bootstrap resamples where the group means are strictly increasing.

    Groups must be aligned (same graphs, same order).
    """
    rng = np.random.default_rng(rng)
    data = np.stack([np.asarray(g, dtype=float) for g in groups])
    m = data.shape[1]
    idx = rng.integers(0, m, size=(n_boot, m))
    means = data[:, idx].mean(axis=2)  # (groups, n_boot)
    return float(np.mean(np.all(np.diff(means, axis=0) > 0, axis=0)))
