"""Absorbing structures.

An absorbing triple for a quadruple ``q = (v1, v2, v3, v4)`` is three
disjoint cyclic triangles ``a1a2a3``, ``b1b2b3``, ``c1c2c3`` such that
``v1a1b1``, ``v2c1a2``, ``v3b2c2`` and ``v4a3b3`` are cyclic triangles too.
Swapping the three for the four covers ``q`` and frees ``c3``.

A ``k``-cycle absorbs a disjoint path when one of its edges ``u -> u'`` can
be replaced by ``u -> path -> u'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import CyclePacking, GraphError, OrientedGraph, PackingError, normalize_cycle
from .rng import as_generator
from .triangles import classify_edges

DEFAULT_THRESHOLD = Fraction(1, 32)


class AbsorbError(GraphError):
    pass


@dataclass(frozen=True)
class AbsorbingTriple:
    q: tuple[int, int, int, int]
    a: tuple[int, int, int]
    b: tuple[int, int, int]
    c: tuple[int, int, int]

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.q + self.a + self.b + self.c

    def consumed(self) -> tuple[tuple[int, int, int], ...]:
        """The three triangles given up by the swap (as vertex triples)."""
        return self.a, self.b, self.c

    def produced(self) -> tuple[tuple[int, int, int], ...]:
        """The four triangles created by the swap (as vertex triples)."""
        (v1, v2, v3, v4), (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = self.q, self.a, self.b, self.c
        return (v1, a1, b1), (v2, c1, a2), (v3, b2, c2), (v4, a3, b3)

    def seven_triples(self) -> tuple[tuple[int, int, int], ...]:
        return self.consumed() + self.produced()


def verify_absorbing_triple(g: OrientedGraph, t: AbsorbingTriple) -> bool:
    """Pure check: 13 distinct vertices and all seven triples cyclic."""
    vs = t.vertices
    if len(vs) != 13 or len(set(vs)) != 13:
        return False
    if any(not (0 <= v < g.n) for v in vs):
        return False
    return all(g.is_cyclic_triple(*tri) for tri in t.seven_triples())


def _cyc(g: OrientedGraph, x: int, y: int) -> frozenset[int]:
    """Vertices ``z`` completing ``{x, y, z}`` to a cyclic triangle."""
    if y in g.out_set(x):
        return g.out_set(y) & g.in_set(x)
    if x in g.out_set(y):
        return g.out_set(x) & g.in_set(y)
    return frozenset()


def _good_sets(g: OrientedGraph, a: Fraction) -> list[frozenset[int]]:
    def build():
        rep = classify_edges(g, a)
        return [frozenset(np.flatnonzero(row).tolist()) for row in rep.good]
    return g.cached(("good_sets", a), build)


def _neighbours(g: OrientedGraph, v: int) -> frozenset[int]:
    return g.out_set(v) | g.in_set(v)


# Step order: a1, a2, a3, b3, b1, b2, c2, c1, c3.
_ORDER = ("a1", "a2", "a3", "b3", "b1", "b2", "c2", "c1", "c3")


def find_absorbing_triple(g: OrientedGraph, q: Sequence[int], forbidden: Iterable[int] = (),
                          seed=0, budget: int = 10_000, *, pool=None,
                          threshold=DEFAULT_THRESHOLD) -> AbsorbingTriple | None:
    """Search for an absorbing triple for ``q``.

    Vertices are chosen in the order a1, a2, a3, b3, b1, b2, c2, c1, c3 with
    seeded random candidate order and backtracking; ``budget`` caps the number
    of candidate placements tried.

    Without ``pool`` the nine vertices are free (outside ``q`` and
    ``forbidden``) and the steps that pick a vertex by goodness (a1, a2, a3,
    b1, b2, c1) only take neighbours joined by ``threshold``-good edges.
    With ``pool`` (vertex-disjoint triangles, e.g. those of a packing) the
    a-, b- and c-triangles must be three distinct pool members; goodness is
    not used there.
    """
    q = tuple(int(v) for v in q)
    if len(q) != 4 or len(set(q)) != 4:
        raise AbsorbError(f"quadruple {q} must be four distinct vertices")
    if any(not (0 <= v < g.n) for v in q):
        raise AbsorbError(f"quadruple {q} out of range")
    blocked = set(q) | {int(v) for v in forbidden}
    if g.n - len(blocked) < 9:
        return None
    rng = as_generator(seed, "absorbing_triple")
    v1, v2, v3, v4 = q

    if pool is None:
        good = _good_sets(g, Fraction(threshold))

        def cands(step, s):
            if step == "a1":
                return good[v1]
            if step == "a2":
                return good[s["a1"]] & good[v2]
            if step == "a3":
                return _cyc(g, s["a1"], s["a2"]) & good[v4]
            if step == "b3":
                return _cyc(g, v4, s["a3"])
            if step == "b1":
                return _cyc(g, v1, s["a1"]) & good[s["b3"]]
            if step == "b2":
                return _cyc(g, s["b1"], s["b3"]) & good[v3]
            if step == "c2":
                return _cyc(g, v3, s["b2"])
            if step == "c1":
                return _cyc(g, v2, s["a2"]) & good[s["c2"]]
            return _cyc(g, s["c1"], s["c2"])
    else:
        tri_of: dict[int, tuple[int, int, int]] = {}
        for t in pool:
            t = tuple(int(v) for v in t)
            if len(t) != 3:
                raise AbsorbError("pool members must be triangles")
            for v in t:
                tri_of[v] = t
        pooled = frozenset(v for v in tri_of if v not in blocked)

        def rest(s, first):
            return frozenset(tri_of[s[first]]) - {s[k] for k in s}

        def cands(step, s):
            if step == "a1":
                return pooled & _neighbours(g, v1)
            if step == "a2":
                return rest(s, "a1") & _neighbours(g, v2)
            if step == "a3":
                return rest(s, "a1")
            if step == "b3":
                tri_a = tri_of[s["a1"]]
                return frozenset(v for v in _cyc(g, v4, s["a3"]) & pooled if tri_of[v] is not tri_a)
            if step == "b1":
                return rest(s, "b3") & _cyc(g, v1, s["a1"])
            if step == "b2":
                return rest(s, "b3")
            if step == "c2":
                ta, tb = tri_of[s["a1"]], tri_of[s["b3"]]
                return frozenset(v for v in _cyc(g, v3, s["b2"]) & pooled
                                 if tri_of[v] is not ta and tri_of[v] is not tb)
            if step == "c1":
                return rest(s, "c2") & _cyc(g, v2, s["a2"])
            return rest(s, "c2")

    state: dict[str, int] = {}
    used = set(blocked)
    tries = 0

    def dfs(i: int) -> bool:
        nonlocal tries
        if i == len(_ORDER):
            return True
        step = _ORDER[i]
        options = sorted(cands(step, state) - used)
        if not options:
            return False
        for j in rng.permutation(len(options)):
            if tries >= budget:
                return False
            tries += 1
            v = options[j]
            state[step] = v
            used.add(v)
            if dfs(i + 1):
                return True
            used.discard(v)
            del state[step]
        return False

    if not dfs(0):
        return None
    s = state
    t = AbsorbingTriple(q, (s["a1"], s["a2"], s["a3"]), (s["b1"], s["b2"], s["b3"]),
                        (s["c1"], s["c2"], s["c3"]))
    assert verify_absorbing_triple(g, t), t
    return t


def absorb_quadruple(packing: CyclePacking, q: Sequence[int], triple: AbsorbingTriple,
                     g: OrientedGraph) -> CyclePacking:
    """Swap the triple's three triangles for four that also cover ``q``.

    The packing gains one triangle, covers ``q`` and loses ``c3``.
    """
    q = tuple(int(v) for v in q)
    if tuple(triple.q) != q:
        raise AbsorbError(f"triple was built for {triple.q}, not {q}")
    if packing.covered.intersection(q):
        raise AbsorbError(f"quadruple {q} overlaps the packing")
    if not verify_absorbing_triple(g, triple):
        raise AbsorbError("not an absorbing triple in this host")
    by_set = {frozenset(c): c for c in packing.cycles}
    drop = set()
    for tri in triple.consumed():
        key = frozenset(tri)
        if key not in by_set:
            raise AbsorbError(f"triangle {tri} is not in the packing")
        drop.add(by_set[key])
    kept = [c for c in packing.cycles if c not in drop]
    new = [g.orient_triangle(*tri) for tri in triple.produced()]
    return CyclePacking(packing.host_n, tuple(kept + new))


@dataclass(frozen=True)
class AbsorbingCycleMatch:
    """``cycle[splice_edge] -> path[0]`` and ``path[-1] -> cycle[splice_edge + 1]``."""

    cycle: tuple[int, ...]
    path: tuple[int, ...]
    splice_edge: int


def _check_path(g: OrientedGraph, path: Sequence[int]) -> tuple[int, ...]:
    path = tuple(int(v) for v in path)
    if not g.is_path(path):
        raise AbsorbError(f"{list(path)} is not a directed path in the host")
    return path


def find_absorbing_cycle_for_path(g: OrientedGraph, path: Sequence[int], candidates,
                                  seed=0) -> AbsorbingCycleMatch | None:
    """First candidate cycle (in seeded order) with an edge ``u -> u'`` such
    that ``u -> path[0]`` and ``path[-1] -> u'``."""
    path = _check_path(g, path)
    pset = set(path)
    head_in, tail_out = g.in_set(path[0]), g.out_set(path[-1])
    candidates = [tuple(c) for c in candidates]
    rng = as_generator(seed, "absorbing_cycle")
    for ci in rng.permutation(len(candidates)):
        cyc = candidates[ci]
        if pset.intersection(cyc):
            continue
        k = len(cyc)
        starts = [i for i in range(k) if cyc[i] in head_in and cyc[(i + 1) % k] in tail_out]
        if starts:
            return AbsorbingCycleMatch(cyc, path, starts[int(rng.integers(len(starts)))])
    return None


def splice(match: AbsorbingCycleMatch, g: OrientedGraph | None = None) -> tuple[int, ...]:
    """Insert the path into the cycle at the splice edge."""
    cyc, path, i = match.cycle, match.path, match.splice_edge
    if not (0 <= i < len(cyc)):
        raise AbsorbError(f"splice edge {i} outside cycle of length {len(cyc)}")
    if set(cyc) & set(path) or not path:
        raise AbsorbError("cycle and path must be non-empty and disjoint")
    if g is not None:
        u, w = cyc[i], cyc[(i + 1) % len(cyc)]
        if not (g.is_cycle(cyc) and g.is_path(path) and g.has_edge(u, path[0]) and g.has_edge(path[-1], w)):
            raise AbsorbError("splice invariants violated in the host")
    return normalize_cycle(cyc[: i + 1] + path + cyc[i + 1:])


def find_completing_cycle(g: OrientedGraph, path: Sequence[int], target_len: int,
                          forbidden: Iterable[int] = (), seed=0,
                          budget: int = 100_000) -> tuple[int, ...] | None:
    """A cycle on ``target_len - len(path)`` fresh vertices containing an
    edge ``x -> y`` with ``x -> path[0]`` and ``path[-1] -> y``.

    The cycle is returned starting at ``y`` (so it ends at ``x``); use
    :func:`complete_cycle` to get the spanned ``target_len``-cycle.
    """
    path = _check_path(g, path)
    k = len(path)
    if target_len < k + 3:
        raise AbsorbError(f"target length {target_len} < path length + 3 = {k + 3}")
    length = target_len - k
    blocked = set(path) | {int(v) for v in forbidden}
    rng = as_generator(seed, "completing_cycle")
    xs = sorted(g.in_set(path[0]) - blocked)
    ys_all = g.out_set(path[-1]) - blocked
    tries = 0
    for xi in rng.permutation(len(xs)):
        x = xs[xi]
        ys = sorted((ys_all & g.out_set(x)) - {x})
        for yi in rng.permutation(len(ys)):
            y = ys[yi]
            # need y -> ... -> x through length - 2 fresh vertices
            walk = [y]
            used = blocked | {x, y}
            found = _extend(g, walk, x, length - 2, used, rng, budget - tries)
            tries += found[1]
            if found[0] is not None:
                return tuple(found[0] + [x])
            if tries >= budget:
                return None
    return None


def _extend(g, walk, target, remaining, used, rng, budget):
    """Randomized DFS: extend ``walk`` by ``remaining`` fresh vertices so the
    last one points at ``target``.  Returns ``(walk or None, nodes_used)``."""
    spent = 0
    last = walk[-1]
    if remaining == 0:
        return (list(walk), 1) if target in g.out_set(last) else (None, 1)
    if remaining == 1:
        opts = sorted((g.out_set(last) & g.in_set(target)) - used)
        if opts:
            return walk + [opts[int(rng.integers(len(opts)))]], 1
        return None, 1
    opts = sorted(g.out_set(last) - used)
    for j in rng.permutation(len(opts)):
        if spent >= budget:
            break
        w = opts[j]
        used.add(w)
        walk.append(w)
        res, s = _extend(g, walk, target, remaining - 1, used, rng, budget - spent)
        spent += s
        walk.pop()
        used.discard(w)
        if res is not None:
            return res, spent
    return None, spent + 1


def complete_cycle(path: Sequence[int], completing: Sequence[int]) -> tuple[int, ...]:
    """``path`` followed by the completing cycle read from ``y`` round to ``x``."""
    return normalize_cycle(tuple(path) + tuple(completing))
