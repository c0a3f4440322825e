"""Exact maximum independent set: branch-and-bound solver and brute-force oracle."""
from __future__ import annotations

import time

import numpy as np

from .graph import UnitDiskGraph, as_bits

BRUTE_FORCE_MAX_N = 24


class SolverTimeout(TimeoutError):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BitsetMIS:
    """Branch-and-bound over packed-integer vertex sets.

    Each node applies isolated/simplicial and domination reductions, splits
    into connected components, bounds with a greedy clique cover and branches
    (include/exclude) on a maximum-degree vertex.
    """

    def __init__(self, adj: list[int], deadline: float | None = None):
        self.adj = adj
        self.nodes = 0
        self.deadline = deadline  # absolute time.perf_counter() value

    def solve(self, mask: int | None = None) -> int:
        if mask is None:
            mask = (1 << len(self.adj)) - 1
        res = self._search(mask, -1)
        return 0 if res is None else res

    def _reduce(self, mask: int) -> tuple[int, int]:
        adj = self.adj
        taken = 0
        changed = True
        while changed and mask:
            changed = False
            for v in _bits(mask):
                bit = 1 << v
                if not mask & bit:
                    continue
                nb = adj[v] & mask
                if not nb:
                    taken |= bit
                    mask ^= bit
                    changed = True
                    continue
                # simplicial: the closed neighbourhood is a clique, v is always safe to take
                closed = nb | bit
                for w in _bits(nb):
                    if closed & ~(adj[w] | (1 << w)):
                        break
                else:
                    taken |= bit
                    mask &= ~closed
                    changed = True
                    continue
                # domination: a neighbour w with N[w] ⊇ N[v] can be dropped
                for w in _bits(nb):
                    if not closed & ~((adj[w] & mask) | (1 << w)):
                        mask &= ~(1 << w)
                        changed = True
        return mask, taken

    def _components(self, mask: int) -> list[int]:
        adj = self.adj
        comps = []
        while mask:
            low = mask & -mask
            comp = low
            frontier = low
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= adj[v]
                nxt &= mask & ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            mask &= ~comp
        return comps

    def _clique_cover(self, mask: int) -> int:
        adj = self.adj
        count = 0
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            cand = adj[v] & m
            while cand:
                wl = cand & -cand
                m ^= wl
                cand &= adj[wl.bit_length() - 1] & m
            count += 1
        return count

    def _search(self, mask: int, lb: int) -> int | None:
        """Maximum independent subset of `mask` if its size exceeds `lb`, else None."""
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 63 and time.perf_counter() > self.deadline:
            raise SolverTimeout(f"gave up after {self.nodes} nodes")
        mask, taken = self._reduce(mask)
        k = taken.bit_count()
        if not mask:
            return taken if k > lb else None
        comps = self._components(mask)
        if len(comps) > 1:
            comps.sort(key=int.bit_count)
            ubs = [self._clique_cover(c) for c in comps]
            remaining = sum(ubs)
            if k + remaining <= lb:
                return None
            got = k
            result = taken
            for comp, ub in zip(comps, ubs):
                remaining -= ub
                sub = self._search(comp, lb - got - remaining)
                if sub is None:
                    return None
                got += sub.bit_count()
                result |= sub
            return result
        if k + self._clique_cover(mask) <= lb:
            return None
        adj = self.adj
        v = max(_bits(mask), key=lambda x: (adj[x] & mask).bit_count())
        bit = 1 << v
        need = lb - k
        best = None
        inc = self._search(mask & ~(adj[v] | bit), need - 1)
        if inc is not None:
            best = inc | bit
            need = best.bit_count()
        exc = self._search(mask & ~bit, need)
        if exc is not None:
            best = exc
        return None if best is None else best | taken


def solve_mask(adj: list[int], mask: int | None = None) -> int:
    return BitsetMIS(adj).solve(mask)


def solve_exact(g: UnitDiskGraph, timeout_s: float | None = None) -> tuple[int, np.ndarray]:
    """Maximum independent set of `g` as (size, witness bitstring)."""
    deadline = None if timeout_s is None else time.perf_counter() + timeout_s
    best = BitsetMIS(g.neighbor_masks(), deadline).solve()
    witness = np.zeros(g.n, dtype=np.uint8)
    for v in _bits(best):
        witness[v] = 1
    return int(witness.sum()), witness


def brute_force(g: UnitDiskGraph) -> tuple[int, np.ndarray]:
    """Exhaustive enumeration over all 2^n bitstrings (n <= 24)."""
    n = g.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if n == 0:
        return 0, np.zeros(0, dtype=np.uint8)
    edges = g.edges
    emasks = (np.int64(1) << edges[:, 0]) | (np.int64(1) << edges[:, 1]) if len(edges) else []
    best_size, best_state = -1, 0
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        s = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        ok = np.ones(len(s), dtype=bool)
        for em in emasks:
            ok &= (s & em) != em
        sizes = np.where(ok, np.bitwise_count(s).astype(np.int64), -1)
        i = int(np.argmax(sizes))
        if sizes[i] > best_size:
            best_size, best_state = int(sizes[i]), int(s[i])
    return best_size, as_bits(best_state, n)


def count_independent_sets(g: UnitDiskGraph) -> int:
    """Number of independent sets (including the empty set), by enumeration (n <= 24)."""
    n = g.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"enumeration limited to n <= {BRUTE_FORCE_MAX_N}")
    total = 0
    for start in range(0, 1 << n, 1 << 20):
        s = np.arange(start, min(start + (1 << 20), 1 << n), dtype=np.int64)
        ok = np.ones(len(s), dtype=bool)
        for i, j in g.edges:
            em = (1 << int(i)) | (1 << int(j))
            ok &= (s & em) != em
        total += int(ok.sum())
    return total


def is_independent(g: UnitDiskGraph, s) -> bool:
    bits = as_bits(s, g.n)
    e = g.edges
    if len(e) == 0:
        return True
    return not bool(np.any(bits[e[:, 0]] & bits[e[:, 1]]))
