"""Finding cycles of a prescribed length, and Hamilton paths in tournaments.

Short cycles come from a randomized depth-first search.  Long cycles are
grown from a short one: insert an outside vertex ``v`` between consecutive
``c -> c'`` with ``c -> v -> c'``; when no single vertex fits, insert a
shortest outside path; trim overshoot through chords ``c_{i-1} -> c_{i+1}``;
exchange vertices or restart when stuck.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import GraphError, OrientedGraph, normalize_cycle
from .rng import as_generator

SHORT_MAX = 6


def _dfs_cycle(g, length, allowed, rng, budget):
    """Randomized DFS for a ``length``-cycle inside ``allowed``."""
    starts = sorted(allowed)
    spent = 0
    per_start = max(64, budget // 8)
    for si in rng.permutation(len(starts)):
        if spent >= budget:
            break
        s = starts[si]
        close = g.in_set(s) & allowed
        if not close:
            continue
        path = [s]
        used = {s}
        local = 0

        def rec(remaining):
            nonlocal local
            last = path[-1]
            if remaining == 1:
                local += 1
                opts = sorted((g.out_set(last) & close) - used)
                if opts:
                    return path + [opts[int(rng.integers(len(opts)))]]
                return None
            opts = sorted((g.out_set(last) & allowed) - used)
            for j in rng.permutation(len(opts)):
                if local >= per_start:
                    return None
                local += 1
                w = opts[j]
                path.append(w)
                used.add(w)
                res = rec(remaining - 1)
                path.pop()
                used.discard(w)
                if res is not None:
                    return res
            return None

        res = rec(length - 1)
        spent += local
        if res is not None:
            return tuple(res)
    return None


class _CycleGrower:
    def __init__(self, g: OrientedGraph, allowed: set[int], rng):
        self.g = g
        self.allowed = allowed
        self.rng = rng
        self.A = g.adjacency_matrix().astype(bool)

    def _outside(self, cyc):
        s = set(cyc)
        return np.array(sorted(v for v in self.allowed if v not in s), dtype=np.int64)

    def insert_one(self, cyc):
        out = self._outside(cyc)
        if out.size == 0:
            return None
        c = np.asarray(cyc)
        nxt = np.roll(c, -1)
        ok = self.A[np.ix_(c, out)] & self.A[np.ix_(out, nxt)].T  # ok[i, j]: c_i -> v_j -> c_{i+1}
        pos = np.argwhere(ok)
        if pos.size == 0:
            return None
        i, j = pos[int(self.rng.integers(len(pos)))]
        return list(cyc[: i + 1]) + [int(out[j])] + list(cyc[i + 1:])

    def insert_path(self, cyc, max_len):
        """Insert a shortest outside path ``x1..xr`` (``2 <= r <= max_len``)."""
        g = self.g
        out = set(self._outside(cyc).tolist())
        if len(out) < 2:
            return None
        k = len(cyc)
        best = None
        for i in self.rng.permutation(k):
            u, w = cyc[i], cyc[(i + 1) % k]
            sources = g.out_set(u) & out
            targets = g.in_set(w) & out
            if not sources or not targets:
                continue
            prev = {s: None for s in sources}
            dq = deque((s, 1) for s in sorted(sources))
            hit = None
            while dq:
                x, d = dq.popleft()
                if x in targets and d >= 2:
                    hit = x
                    break
                if d >= max_len:
                    continue
                for y in sorted(g.out_set(x) & out):
                    if y not in prev:
                        prev[y] = x
                        dq.append((y, d + 1))
            if hit is None:
                continue
            seg = [hit]
            while prev[seg[-1]] is not None:
                seg.append(prev[seg[-1]])
            seg.reverse()
            if best is None or len(seg) < len(best[1]):
                best = (i, seg)
                if len(seg) == 2:
                    break
        if best is None:
            return None
        i, seg = best
        return list(cyc[: i + 1]) + seg + list(cyc[i + 1:])

    def shrink_one(self, cyc):
        k = len(cyc)
        if k <= 3:
            return None
        opts = [i for i in range(k) if self.g.has_edge(cyc[i - 1], cyc[(i + 1) % k])]
        if not opts:
            return None
        i = opts[int(self.rng.integers(len(opts)))]
        return cyc[:i] + cyc[i + 1:]

    def exchange(self, cyc):
        out = self._outside(cyc)
        if out.size == 0:
            return None
        c = np.asarray(cyc)
        prv, nxt = np.roll(c, 1), np.roll(c, -1)
        ok = self.A[np.ix_(prv, out)] & self.A[np.ix_(out, nxt)].T
        pos = np.argwhere(ok)
        if pos.size == 0:
            return None
        i, j = pos[int(self.rng.integers(len(pos)))]
        new = list(cyc)
        new[i] = int(out[j])
        return new


def _grow_cycle(g, length, allowed, rng, budget):
    grower = _CycleGrower(g, allowed, rng)
    spent = 0
    while spent < budget:
        seed_cycle = None
        for k0 in range(3, min(SHORT_MAX, length) + 1):
            seed_cycle = _dfs_cycle(g, k0, allowed, rng, 2000)
            spent += 1
            if seed_cycle is not None:
                break
        if seed_cycle is None:
            return None
        cyc = list(seed_cycle)
        stalls = 0
        while spent < budget and stalls < 8:
            spent += 1
            if len(cyc) == length:
                return tuple(cyc)
            if len(cyc) > length:
                nxt = grower.shrink_one(cyc)
            else:
                nxt = grower.insert_one(cyc)
                if nxt is None:
                    nxt = grower.insert_path(cyc, max_len=len(allowed))
            if nxt is None:
                stalls += 1
                nxt = grower.exchange(cyc)
                if nxt is None:
                    break
            cyc = nxt
    return None


def find_cycle_of_length(g: OrientedGraph, length: int, forbidden: Iterable[int] = (),
                         seed=0, budget: int = 20_000) -> tuple[int, ...] | None:
    """A directed cycle on exactly ``length`` vertices avoiding ``forbidden``,
    or ``None`` once the search budget is spent."""
    if length < 3:
        raise GraphError(f"cycle length must be >= 3, got {length}")
    forbidden = {int(v) for v in forbidden}
    allowed = {v for v in range(g.n) if v not in forbidden}
    if length > len(allowed):
        return None
    rng = as_generator(seed, "find_cycle")
    if length <= SHORT_MAX:
        cyc = _dfs_cycle(g, length, allowed, rng, budget)
        if cyc is not None:
            return normalize_cycle(cyc)
    cyc = _grow_cycle(g, length, allowed, rng, budget)
    if cyc is None:
        return None
    assert g.is_cycle(cyc) and not forbidden.intersection(cyc)
    return normalize_cycle(cyc)


def hamilton_path_tournament(g: OrientedGraph, vertices: Sequence[int] | None = None,
                             seed=None) -> list[int]:
    """Hamilton path of the sub-tournament on ``vertices`` by binary insertion.

    ``seed`` shuffles the insertion order (different paths per seed).
    """
    vs = list(range(g.n)) if vertices is None else [int(v) for v in vertices]
    if seed is not None:
        rng = as_generator(seed, "hamilton_path")
        vs = [vs[i] for i in rng.permutation(len(vs))]
    path: list[int] = []
    for v in vs:
        if not path:
            path.append(v)
            continue
        if not g.adjacent(v, path[0]) or not g.adjacent(v, path[-1]):
            raise GraphError("vertex set does not induce a tournament")
        if g.has_edge(v, path[0]):
            path.insert(0, v)
        elif g.has_edge(path[-1], v):
            path.append(v)
        else:
            lo, hi = 0, len(path) - 1  # path[lo] -> v, v -> path[hi]
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if not g.adjacent(v, path[mid]):
                    raise GraphError("vertex set does not induce a tournament")
                if g.has_edge(path[mid], v):
                    lo = mid
                else:
                    hi = mid
            path.insert(hi, v)
    return path


def enumerate_cycles(g: OrientedGraph, length: int, within: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Every ``length``-cycle (inside ``within``) once, smallest vertex first."""
    allowed = set(range(g.n)) if within is None else {int(v) for v in within}
    for s in sorted(allowed):
        higher = {v for v in allowed if v > s}
        close = g.in_set(s) & higher
        if not close:
            continue
        path = [s]
        used = {s}

        def rec(remaining):
            last = path[-1]
            if remaining == 1:
                for z in sorted((g.out_set(last) & close) - used):
                    yield tuple(path) + (z,)
                return
            for w in sorted((g.out_set(last) & higher) - used):
                path.append(w)
                used.add(w)
                yield from rec(remaining - 1)
                path.pop()
                used.discard(w)

        yield from rec(length - 1)
