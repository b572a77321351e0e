"""Window repacking: local search used by the packing pipelines.

A move removes ``j`` packed cycles, pools their vertices with some uncovered
ones, and repacks that window exactly.  It is kept when the window now holds
more cycles (or, for prescribed lengths, the previously missing one too).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .cycles import find_cycle_of_length
from .graph import OrientedGraph, normalize_cycle

MAX_WINDOW = 18


def _cycles_in(g: OrientedGraph, verts: Sequence[int], length: int) -> list[tuple[int, ...]]:
    allowed = set(verts)
    out = []
    for s in sorted(allowed):
        higher = {v for v in allowed if v > s}
        close = g.in_set(s) & higher
        if not close:
            continue
        stack = [(s, (s,))]
        while stack:
            last, path = stack.pop()
            if len(path) == length - 1:
                for z in sorted((g.out_set(last) & close).difference(path)):
                    out.append(path + (z,))
                continue
            for w in sorted((g.out_set(last) & higher).difference(path)):
                stack.append((w, path + (w,)))
    return out


def best_packing_in_window(g: OrientedGraph, window: Sequence[int], length: int) -> list[tuple[int, ...]]:
    """Maximum set of disjoint ``length``-cycles inside ``window`` (exact)."""
    verts = sorted(set(window))
    idx = {v: i for i, v in enumerate(verts)}
    cycles = _cycles_in(g, verts, length)
    if not cycles:
        return []
    by_low: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(cycles):
        mask = 0
        for v in c:
            mask |= 1 << idx[v]
        low = min(idx[v] for v in c)
        by_low.setdefault(low, []).append((mask, ci))

    @lru_cache(maxsize=None)
    def solve(free: int) -> tuple[int, tuple[int, ...]]:
        if free == 0:
            return 0, ()
        low = (free & -free).bit_length() - 1
        best = solve(free & ~(1 << low))
        for mask, ci in by_low.get(low, ()):
            if mask & free == mask:
                cnt, chosen = solve(free & ~mask)
                if cnt + 1 > best[0]:
                    best = (cnt + 1, chosen + (ci,))
        return best

    _, chosen = solve((1 << len(verts)) - 1)
    solve.cache_clear()
    return [normalize_cycle(cycles[ci]) for ci in chosen]


def improve_packing(g: OrientedGraph, cycles: list[tuple[int, ...]], length: int, rng,
                    budget: int = 2000, max_window: int = MAX_WINDOW,
                    stop_at: int = 0) -> tuple[list[tuple[int, ...]], int]:
    """Grow a packing of ``length``-cycles by window repacking.

    Tries ``j = 1, 2, ...`` removed cycles; all ``j``-subsets when there are
    few, random ones otherwise.  Stops once the uncovered count is at most
    ``stop_at`` or no improving window is found within ``budget`` solves.
    Returns the new cycle list and the number of improving moves.
    """
    cycles = [normalize_cycle(c) for c in cycles]
    moves = 0
    spent = 0
    while spent < budget:
        covered = {v for c in cycles for v in c}
        uncovered = [v for v in range(g.n) if v not in covered]
        if len(uncovered) <= stop_at:
            break
        improved = False
        t = len(cycles)
        for j in range(0, t + 1):
            room = max_window - j * length
            if room < 1 and j > 0:
                break
            if j == 0 and len(uncovered) < length:
                continue
            if j * length + min(len(uncovered), room) < (j + 1) * length:
                continue
            subsets = _subsets(t, j, rng, budget - spent)
            for sub in subsets:
                if spent >= budget:
                    break
                spent += 1
                removed = [cycles[i] for i in sub]
                pool = [v for c in removed for v in c]
                if len(uncovered) > room:
                    extra = [uncovered[i] for i in rng.choice(len(uncovered), room, replace=False)]
                else:
                    extra = uncovered
                new = best_packing_in_window(g, pool + list(extra), length)
                if len(new) > j:
                    keep = set(sub)
                    cycles = [c for i, c in enumerate(cycles) if i not in keep] + new
                    moves += 1
                    improved = True
                    break
            if improved or spent >= budget:
                break
        if not improved:
            break
    return cycles, moves


def _subsets(t: int, j: int, rng, limit: int):
    if j == 0:
        return [()]
    if comb(t, j) <= max(limit, 1):
        combos = list(combinations(range(t), j))
        return [combos[i] for i in rng.permutation(len(combos))]
    return [tuple(sorted(rng.choice(t, j, replace=False).tolist())) for _ in range(max(limit, 1))]


def reroute(g: OrientedGraph, cycles: list[tuple[int, ...]], missing: list[int], rng,
            budget: int = 200, max_rip: int = 3) -> tuple[list[tuple[int, ...]], list[int]]:
    """Place the ``missing`` lengths by rip-up and reroute.

    First each missing length is sought among uncovered vertices.  For the
    rest, ``j`` random packed cycles are removed and their lengths plus the
    missing one are re-found (longest first) on the freed vertices and the
    uncovered ones; the move is kept only if every cycle is placed.
    Returns the new cycles and the lengths still missing.
    """
    cycles = list(cycles)
    still = []
    for L in sorted(missing, reverse=True):
        covered = {v for c in cycles for v in c}
        cyc = find_cycle_of_length(g, L, forbidden=covered, seed=int(rng.integers(2**62)))
        if cyc is not None:
            cycles.append(cyc)
        else:
            still.append(L)
    missing = still
    spent = 0
    while missing and spent < budget:
        L = missing[0]
        placed = False
        for j in range(1, max_rip + 1):
            if j > len(cycles) or spent >= budget:
                break
            spent += 1
            sub = set(rng.choice(len(cycles), j, replace=False).tolist())
            base = [c for i, c in enumerate(cycles) if i not in sub]
            want = sorted([len(cycles[i]) for i in sub] + [L], reverse=True)
            trial = list(base)
            ok = True
            for length in want:
                covered = {v for c in trial for v in c}
                cyc = find_cycle_of_length(g, length, forbidden=covered, seed=int(rng.integers(2**62)),
                                           budget=5000)
                if cyc is None:
                    ok = False
                    break
                trial.append(cyc)
            if ok:
                cycles = trial
                missing = missing[1:]
                placed = True
                break
        if not placed and spent >= budget:
            break
    return cycles, missing
