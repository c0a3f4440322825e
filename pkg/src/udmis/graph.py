"""Unit-disk graphs: random generation, file I/O and hop-distance primitives.

Bitstrings are plain ``numpy`` arrays of 0/1 (``uint8``) indexed by vertex, or
packed Python integers where bit ``i`` is vertex ``i``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

MAX_REJECTIONS = 10_000


class GraphGenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphMeta:
    density: float
    exclusion: float
    seed: int


@dataclass(frozen=True, eq=False)
class UnitDiskGraph:
    points: np.ndarray
    adjacency: tuple[tuple[int, ...], ...]
    meta: GraphMeta | None = None
    _edges: np.ndarray = field(default=None, repr=False)

    @classmethod
    def from_points(cls, points, meta: GraphMeta | None = None) -> "UnitDiskGraph":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        edges = unit_disk_edges(pts)
        nbrs: list[list[int]] = [[] for _ in range(len(pts))]
        for i, j in edges.tolist():
            nbrs[i].append(j)
            nbrs[j].append(i)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        return cls(pts, adjacency, meta, edges)

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with i < j, sorted lexicographically."""
        if self._edges is None:
            e = [(i, j) for i, a in enumerate(self.adjacency) for j in a if i < j]
            object.__setattr__(self, "_edges", np.array(e, dtype=np.int64).reshape(-1, 2))
        return self._edges

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def masks(self) -> tuple[int, ...]:
        out = []
        for a in self.adjacency:
            m = 0
            for j in a:
                m |= 1 << j
            out.append(m)
        return tuple(out)

    def neighbor_masks(self) -> list[int]:
        """Adjacency as packed-integer bitsets."""
        return list(self.masks)

    def distances(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt((diff**2).sum(-1))

    def __eq__(self, other):
        if not isinstance(other, UnitDiskGraph):
            return NotImplemented
        return (
            self.meta == other.meta
            and self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
            and self.adjacency == other.adjacency
        )

    __hash__ = None


def unit_disk_edges(points: np.ndarray) -> np.ndarray:
    """All pairs i < j with squared distance <= 1."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return np.zeros((0, 2), dtype=np.int64)
    # KD-tree only proposes candidates; the inclusive squared-distance test decides.
    cand = cKDTree(pts).query_pairs(1.0 + 1e-9, output_type="ndarray")
    if len(cand) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    d2 = ((pts[cand[:, 0]] - pts[cand[:, 1]]) ** 2).sum(1)
    cand = np.sort(cand[d2 <= 1.0], axis=1)
    order = np.lexsort((cand[:, 1], cand[:, 0]))
    return cand[order].astype(np.int64)


def generate(n: int, density: float = 2.0, exclusion: float = 0.3, seed: int = 0) -> UnitDiskGraph:
    """Random points in the square of side sqrt(n / density), rejecting points
    closer than `exclusion` to an accepted one.

    Raises GraphGenerationError after MAX_REJECTIONS consecutive rejections for a
    single point.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if density <= 0:
        raise ValueError("density must be > 0")
    if not 0 <= exclusion < 1:
        raise ValueError("exclusion radius must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    side = math.sqrt(n / density)
    r2 = exclusion * exclusion
    cell = exclusion if exclusion > 0 else side
    grid: dict[tuple[int, int], list[int]] = {}
    pts: list[tuple[float, float]] = []
    while len(pts) < n:
        for _ in range(MAX_REJECTIONS):
            x, y = rng.uniform(0.0, side, size=2)
            cx, cy = int(x // cell), int(y // cell)
            ok = True
            if exclusion > 0:
                for gx in (cx - 1, cx, cx + 1):
                    for gy in (cy - 1, cy, cy + 1):
                        for k in grid.get((gx, gy), ()):
                            px, py = pts[k]
                            if (px - x) ** 2 + (py - y) ** 2 < r2:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
            if ok:
                grid.setdefault((cx, cy), []).append(len(pts))
                pts.append((float(x), float(y)))
                break
        else:
            raise GraphGenerationError(
                f"{MAX_REJECTIONS} consecutive rejections placing point {len(pts)} "
                f"(n={n}, density={density}, exclusion={exclusion})"
            )
    return UnitDiskGraph.from_points(pts, GraphMeta(float(density), float(exclusion), int(seed)))


def corpus(n: int, count: int, density: float = 2.0, exclusion: float = 0.3, seed: int = 0) -> list[UnitDiskGraph]:
    """`count` graphs with consecutive seeds starting at `seed`."""
    return [generate(n, density, exclusion, seed + k) for k in range(count)]


def _as_active(g: UnitDiskGraph, active) -> np.ndarray:
    if active is None:
        return np.ones(g.n, dtype=bool)
    a = np.asarray(active)
    if a.dtype == bool and a.shape == (g.n,):
        return a
    mask = np.zeros(g.n, dtype=bool)
    mask[list(active)] = True
    return mask


def bfs_sphere(g: UnitDiskGraph, u: int, d: int, active=None) -> set[int]:
    """Vertices of `active` within `d` hops of `u` in the subgraph induced by `active`."""
    act = _as_active(g, active)
    if not act[u]:
        raise ValueError(f"seed vertex {u} is not active")
    if d < 0:
        raise ValueError("d must be >= 0")
    seen = {u}
    frontier = [u]
    for _ in range(d):
        nxt = []
        for v in frontier:
            for w in g.adjacency[v]:
                if act[w] and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return seen


def hop_distances(g: UnitDiskGraph, source: int, active=None) -> dict[int, int]:
    act = _as_active(g, active)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if act[w] and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def induced_subgraph(g: UnitDiskGraph, vertices: Iterable[int]) -> tuple[UnitDiskGraph, list[int]]:
    """Subgraph on `vertices` (relabelled 0..k-1 in sorted order) and the map
    local index -> original vertex id."""
    index_map = sorted(set(int(v) for v in vertices))
    local = {v: k for k, v in enumerate(index_map)}
    adjacency = tuple(
        tuple(sorted(local[w] for w in g.adjacency[v] if w in local)) for v in index_map
    )
    pts = g.points[index_map] if index_map else np.zeros((0, 2))
    return UnitDiskGraph(pts, adjacency, None), index_map


def connected_components(g: UnitDiskGraph, active=None) -> list[list[int]]:
    act = _as_active(g, active)
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for s in range(g.n):
        if act[s] and not seen[s]:
            comp = sorted(hop_distances(g, s, act))
            seen[comp] = True
            comps.append(comp)
    return comps


def diameter(g: UnitDiskGraph, active=None) -> float:
    """Longest shortest-path hop count; math.inf when disconnected."""
    act = _as_active(g, active)
    verts = np.flatnonzero(act)
    if len(verts) == 0:
        return 0
    best = 0
    for s in verts:
        dist = hop_distances(g, int(s), act)
        if len(dist) < len(verts):
            return math.inf
        best = max(best, max(dist.values()))
    return best


def component_diameters(g: UnitDiskGraph) -> list[int]:
    return [diameter(g, comp) for comp in connected_components(g)]


# --- bitstrings -------------------------------------------------------------

def pack_bits(bits: Sequence[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << i
    return out


def unpack_bits(state: int, n: int) -> np.ndarray:
    return np.array([(state >> i) & 1 for i in range(n)], dtype=np.uint8)


def as_bits(s, n: int | None = None) -> np.ndarray:
    if isinstance(s, (int, np.integer)) and n is not None:
        return unpack_bits(int(s), n)
    arr = np.asarray(s, dtype=np.uint8).ravel()
    if n is not None and len(arr) != n:
        raise ValueError(f"bitstring length {len(arr)} does not match vertex count {n}")
    return arr


# --- file format --------------------------------------------------------------

def dumps(g: UnitDiskGraph) -> str:
    m = g.meta
    if m is None:
        header = f"udg v1 {g.n} nan nan none"
    else:
        header = f"udg v1 {g.n} {m.density!r} {m.exclusion!r} {m.seed}"
    lines = [header] + [f"{x:.17g} {y:.17g}" for x, y in g.points]
    return "\n".join(lines) + "\n"


def loads(text: str) -> UnitDiskGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 6 or head[:2] != ["udg", "v1"]:
        raise ValueError(f"not a udg v1 file: {lines[0]!r}")
    n = int(head[2])
    meta = None
    if head[5] != "none":
        meta = GraphMeta(float(head[3]), float(head[4]), int(head[5]))
    pts = [tuple(float(t) for t in ln.split()) for ln in lines[1 : n + 1]]
    if len(pts) != n:
        raise ValueError(f"expected {n} points, found {len(pts)}")
    return UnitDiskGraph.from_points(pts, meta)


def save(g: UnitDiskGraph, path) -> None:
    Path(path).write_text(dumps(g), encoding="utf-8")


def load(path) -> UnitDiskGraph:
    return loads(Path(path).read_text(encoding="utf-8"))
