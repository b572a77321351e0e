"""Exact ground truth for small instances.

Triangles are found by checking every vertex triple directly, and the
searches below are plain bitmask backtracking with memoised dead ends.
Nothing here is shared with the packing pipelines, so the two can be
cross-checked.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .graph import GraphError, OrientedGraph

MAX_TRIANGLE_N = 24
MAX_PRESCRIBED_N = 16
MAX_COUNT_N = 15


class InstanceTooLarge(GraphError):
    pass


def _triangle_masks(g: OrientedGraph) -> list[tuple[int, tuple[int, int, int]]]:
    out = []
    for x, y, z in combinations(range(g.n), 3):
        if g.is_cyclic_triple(x, y, z):
            out.append(((1 << x) | (1 << y) | (1 << z), g.orient_triangle(x, y, z)))
    return out


def _vertices(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def oracle_max_triangle_packing(g: OrientedGraph, limit: int = MAX_TRIANGLE_N):
    """Maximum number of vertex-disjoint cyclic triangles and one witness.

    Tries packing sizes from ``floor(n/3)`` downwards; each size is an exact
    search that branches on the vertex with the fewest live triangles and may
    leave at most ``n - 3t`` vertices uncovered.
    """
    if g.n > limit:
        raise InstanceTooLarge(f"oracle limited to n <= {limit}, got {g.n}")
    tris = _triangle_masks(g)
    at: list[list[int]] = [[] for _ in range(g.n)]
    for ti, (mask, _) in enumerate(tris):
        for v in _vertices(mask):
            at[v].append(ti)
    full = (1 << g.n) - 1
    coverable = 0
    for mask, _ in tris:
        coverable |= mask
    upper = bin(coverable).count("1") // 3

    def feasible(t: int):
        dead: set[tuple[int, int]] = set()
        chosen: list[int] = []

        def rec(alive: int, need: int, skips: int) -> bool:
            if need == 0:
                return True
            if (alive, skips) in dead:
                return False
            best_v, best_opts = -1, None
            for v in _vertices(alive):
                opts = [ti for ti in at[v] if tris[ti][0] & alive == tris[ti][0]]
                if best_opts is None or len(opts) < len(best_opts):
                    best_v, best_opts = v, opts
                    if len(opts) <= 1:
                        break
            # live-triangle bound: at most (#vertices on a live triangle) / 3 more
            live = 0
            for mask, _ in tris:
                if mask & alive == mask:
                    live |= mask
            if bin(live).count("1") // 3 < need:
                dead.add((alive, skips))
                return False
            for ti in best_opts:
                chosen.append(ti)
                if rec(alive & ~tris[ti][0], need - 1, skips):
                    return True
                chosen.pop()
            if skips > 0 and rec(alive & ~(1 << best_v), need, skips - 1):
                return True
            dead.add((alive, skips))
            return False

        if rec(full, t, g.n - 3 * t):
            return [tris[ti][1] for ti in chosen]
        return None

    for t in range(upper, 0, -1):
        witness = feasible(t)
        if witness is not None:
            return t, witness
    return 0, []


def oracle_prescribed_feasible(g: OrientedGraph, lengths: Sequence[int],
                               limit: int = MAX_PRESCRIBED_N):
    """Whether ``g`` has vertex-disjoint cycles of exactly the given lengths.

    Returns ``(feasible, witness)``; the witness is a list of cycles or ``None``.
    """
    if g.n > limit:
        raise InstanceTooLarge(f"oracle limited to n <= {limit}, got {g.n}")
    lengths = tuple(sorted((int(x) for x in lengths), reverse=True))
    if any(x < 3 for x in lengths):
        raise GraphError("cycle lengths must be >= 3")
    if sum(lengths) > g.n:
        return False, None
    if not lengths:
        return True, []
    outs = [set(g.out_adj[v]) for v in range(g.n)]

    def cycles_from(v: int, length: int, alive: int):
        """Cycles of ``length`` starting at ``v`` (the lowest alive vertex)."""
        path = [v]

        def rec(last, used):
            if len(path) == length:
                if v in outs[last]:
                    yield tuple(path), used
                return
            for w in outs[last]:
                bit = 1 << w
                if alive & bit and not used & bit:
                    path.append(w)
                    yield from rec(w, used | bit)
                    path.pop()

        yield from rec(v, 1 << v)

    dead: set[tuple[int, tuple[int, ...]]] = set()
    chosen: list[tuple[int, ...]] = []

    def rec(alive: int, remaining: tuple[int, ...]) -> bool:
        if not remaining:
            return True
        key = (alive, remaining)
        if key in dead:
            return False
        size = bin(alive).count("1")
        if size < sum(remaining):
            dead.add(key)
            return False
        v = (alive & -alive).bit_length() - 1
        for L in sorted(set(remaining), reverse=True):
            rest = list(remaining)
            rest.remove(L)
            rest = tuple(rest)
            for cyc, used in cycles_from(v, L, alive):
                chosen.append(cyc)
                if rec(alive & ~used, rest):
                    return True
                chosen.pop()
        if size > sum(remaining) and rec(alive & ~(1 << v), remaining):
            return True
        dead.add(key)
        return False

    if rec((1 << g.n) - 1, lengths):
        return True, list(chosen)
    return False, None


def count_packings_of_size(g: OrientedGraph, t: int, limit: int = MAX_COUNT_N) -> int:
    """Number of unordered sets of ``t`` vertex-disjoint cyclic triangles."""
    if g.n > limit:
        raise InstanceTooLarge(f"counting limited to n <= {limit}, got {g.n}")
    if t < 0 or 3 * t > g.n:
        return 0
    tris = _triangle_masks(g)
    by_low: dict[int, list[int]] = {}
    for mask, _ in tris:
        low = (mask & -mask).bit_length() - 1
        by_low.setdefault(low, []).append(mask)

    @lru_cache(maxsize=None)
    def ways(alive: int, skips: int) -> int:
        # packings of `alive` leaving exactly `skips` of its vertices uncovered
        if alive == 0:
            return 1 if skips == 0 else 0
        v = (alive & -alive).bit_length() - 1
        total = ways(alive & ~(1 << v), skips - 1) if skips > 0 else 0
        for mask in by_low.get(v, ()):
            if mask & alive == mask:
                total += ways(alive & ~mask, skips)
        return total

    return ways((1 << g.n) - 1, g.n - 3 * t)


def count_perfect_packings(g: OrientedGraph, limit: int = MAX_COUNT_N) -> int:
    """Number of maximum cyclic-triangle packings (the empty packing counts
    once when there are no cyclic triangles)."""
    if g.n > limit:
        raise InstanceTooLarge(f"counting limited to n <= {limit}, got {g.n}")
    for t in range(g.n // 3, -1, -1):
        c = count_packings_of_size(g, t, limit)
        if c:
            return c
    return 1
