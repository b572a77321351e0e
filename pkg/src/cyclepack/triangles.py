"""Cyclic-triangle counting and edge classification.

Counts are exact.  Per-edge and per-vertex counts come from products of the
adjacency matrix: for an edge ``x -> y`` the closing vertices are
``N+(y) & N-(x)``, i.e. ``(A @ A)[y, x]``; the per-vertex count is the
diagonal of ``A^3``.  Products run in float64 (exact for integers below
2**53) so BLAS does the work.  Graphs above :data:`MAX_EXACT_N` are refused.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .graph import GraphError, OrientedGraph, is_tournament

MAX_EXACT_N = 4096


class TooLargeError(GraphError):
    pass


def _check_size(g: OrientedGraph) -> None:
    if g.n > MAX_EXACT_N:
        raise TooLargeError(f"exact counting refused above n={MAX_EXACT_N} (got {g.n})")


def _two_paths(g: OrientedGraph) -> np.ndarray:
    """``P[y, x]`` = number of ``z`` with ``y -> z -> x``."""
    a = g.adjacency_matrix().astype(np.float64)
    return np.rint(a @ a).astype(np.int64)


def edge_triangle_matrix(g: OrientedGraph) -> np.ndarray:
    """``E[x, y]`` = cyclic triangles through edge ``x -> y`` (0 off edges)."""
    _check_size(g)
    if g.n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return g.adjacency_matrix() * _two_paths(g).T


def triangles_per_vertex(g: OrientedGraph) -> list[int]:
    _check_size(g)
    if g.n == 0:
        return []
    a = g.adjacency_matrix().astype(np.float64)
    # every closed 3-walk at x in an oriented graph is a distinct cyclic triangle
    diag = np.einsum("ij,ji->i", a @ a, a)
    return np.rint(diag).astype(np.int64).tolist()


def tournament_triangle_identity(g: OrientedGraph) -> int:
    """``C(n,3) - sum_v C(d+(v), 2)``, valid for tournaments only."""
    if not is_tournament(g):
        raise GraphError("identity only holds for tournaments")
    return comb(g.n, 3) - sum(comb(len(a), 2) for a in g.out_adj)


def total_cyclic_triangles(g: OrientedGraph) -> int:
    total, rem = divmod(sum(triangles_per_vertex(g)), 3)
    assert rem == 0
    if is_tournament(g):
        ident = tournament_triangle_identity(g)
        if ident != total:
            raise AssertionError(f"triangle identity violated: {total} != {ident}")
    return total


def list_triangles(g: OrientedGraph, vertices: Iterable[int] | None = None) -> np.ndarray:
    """All cyclic triangles as rows ``(x, y, z)`` with ``x -> y -> z -> x`` and
    ``x`` the smallest vertex.  Rows are sorted lexicographically.

    ``vertices`` restricts the listing to triangles inside that set.
    """
    _check_size(g)
    n = g.n
    a = g.adjacency_matrix().astype(bool)
    if vertices is not None:
        keep = np.zeros(n, dtype=bool)
        keep[list(vertices)] = True
    else:
        keep = np.ones(n, dtype=bool)
    chunks = []
    for x in np.flatnonzero(keep):
        later = keep.copy()
        later[: x + 1] = False
        ys = np.flatnonzero(a[x] & later)
        zs = np.flatnonzero(a[:, x] & later)
        if ys.size == 0 or zs.size == 0:
            continue
        yi, zi = np.nonzero(a[np.ix_(ys, zs)])
        if yi.size:
            block = np.empty((yi.size, 3), dtype=np.int32)
            block[:, 0] = x
            block[:, 1] = ys[yi]
            block[:, 2] = zs[zi]
            chunks.append(block)
    if not chunks:
        return np.zeros((0, 3), dtype=np.int32)
    out = np.concatenate(chunks)
    order = np.lexsort((out[:, 2], out[:, 1], out[:, 0]))
    return out[order]


@dataclass
class GoodnessReport:
    """Edge classification at threshold ``a``.

    ``edge_counts[x, y]`` holds the triangle count of edge ``x -> y``;
    an edge is ``a``-good when that count is at least ``a * n``.
    ``bad_for[x]`` is the set of neighbours of ``x`` joined by an ``a``-bad edge.
    """

    threshold_a: Fraction
    n: int
    adjacency: np.ndarray
    edge_counts: np.ndarray
    good: np.ndarray  # symmetric: good[x, y] iff x, y adjacent via an a-good edge
    bad_for: list[frozenset[int]]

    @property
    def per_edge_count(self) -> dict[tuple[int, int], int]:
        us, vs = np.nonzero(self.adjacency)
        return {(int(u), int(v)): int(self.edge_counts[u, v]) for u, v in zip(us, vs)}

    def count(self, x: int, y: int) -> int:
        return int(self.edge_counts[x, y])

    def is_good(self, x: int, y: int) -> bool:
        return bool(self.good[x, y])


def classify_edges(g: OrientedGraph, a) -> GoodnessReport:
    a = Fraction(a)
    if not (0 < a < 1):
        raise GraphError(f"threshold a must lie in (0, 1), got {a}")
    counts = edge_triangle_matrix(g)
    adj = g.adjacency_matrix().astype(bool)
    # count >= a*n  <=>  count * den >= num * n, kept in integers
    good_dir = adj & (counts * a.denominator >= a.numerator * g.n)
    bad_dir = adj & ~good_dir
    good = good_dir | good_dir.T
    bad = bad_dir | bad_dir.T
    bad_for = [frozenset(np.flatnonzero(row).tolist()) for row in bad]
    return GoodnessReport(a, g.n, adj, counts, good, bad_for)


def lemma_bad_bounds(n: int, a: Fraction, c: Fraction) -> tuple[Fraction, Fraction]:
    """Per-side and total bounds on ``a``-bad vertices: ``(2a+4c)n``, ``(4a+10c)n``."""
    return (2 * a + 4 * c) * n, (4 * a + 10 * c) * n


def count_tri_band(n: int, c: Fraction) -> tuple[Fraction, Fraction]:
    """Per-vertex triangle band ``[(1/8-2c)n^2, (1/8+2c)n^2]``."""
    eighth = Fraction(1, 8)
    return (eighth - 2 * c) * n * n, (eighth + 2 * c) * n * n


def edges_between(g: OrientedGraph, S: Iterable[int], T: Iterable[int]) -> int:
    """Number of edges ``u -> v`` with ``u`` in ``S`` and ``v`` in ``T``."""
    T = set(T)
    if not T:
        return 0
    return sum(len(g.out_set(u) & T) for u in set(S))


def triangles_with_crossing_edge(g: OrientedGraph, S: Iterable[int], T: Iterable[int]) -> int:
    """Cyclic triangles containing at least one edge from ``S`` to ``T``."""
    tri = list_triangles(g)
    if tri.size == 0:
        return 0
    in_s = np.zeros(g.n, dtype=bool)
    in_t = np.zeros(g.n, dtype=bool)
    in_s[list(set(S))] = True
    in_t[list(set(T))] = True
    x, y, z = tri[:, 0], tri[:, 1], tri[:, 2]
    hit = (in_s[x] & in_t[y]) | (in_s[y] & in_t[z]) | (in_s[z] & in_t[x])
    return int(hit.sum())


def count_k_cycles_through(g: OrientedGraph, anchor: Sequence[int], k: int,
                           cap: int = 10**6) -> int:
    """Count ``k``-cycles that contain ``anchor`` as a directed sub-path.

    Bounded DFS extends the anchor's last vertex by ``k - t`` fresh vertices
    and closes back to the first.  Stops and returns ``cap`` once the count
    reaches it.
    """
    anchor = list(anchor)
    t = len(anchor)
    if t < 1 or not g.is_path(anchor):
        raise GraphError(f"anchor {anchor} is not a directed path")
    if k < max(3, t + 2):
        raise GraphError(f"need k >= max(3, t + 2) (k={k}, t={t})")
    first = anchor[0]
    close = g.in_set(first)
    used = set(anchor)
    total = 0
    need = k - t  # fresh vertices to add

    def dfs(last: int, remaining: int) -> bool:
        nonlocal total
        if remaining == 1:
            cands = g.out_set(last) & close
            total += len(cands - used)
            return total >= cap
        for w in g.out_adj[last]:
            if w in used:
                continue
            used.add(w)
            stop = dfs(w, remaining - 1)
            used.discard(w)
            if stop:
                return True
        return False

    dfs(anchor[-1], need)
    return min(total, cap)
