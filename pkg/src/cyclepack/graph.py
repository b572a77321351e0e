"""Oriented graphs, semidegree profiles, cycle packings and the ``.og`` format.

Vertices are dense integers ``0..n-1``.  Adjacency is stored in both
directions as sorted tuples; a frozenset per vertex backs O(1) membership.
Graphs are immutable once built.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Base class for graph construction and validation errors."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class AntiparallelEdgeError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class PackingError(GraphError):
    """A cycle packing failed validation against its host."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class OrientedGraph:
    """Directed graph without loops or antiparallel pairs."""

    def __init__(self, n: int, out_adj: Sequence[Sequence[int]]):
        # Trusted constructor: callers must hand in a valid adjacency.
        # Use build_graph() for untrusted edge lists.
        self.n = n
        self.out_adj = tuple(tuple(sorted(a)) for a in out_adj)
        ins: list[list[int]] = [[] for _ in range(n)]
        for u, outs in enumerate(self.out_adj):
            for v in outs:
                ins[v].append(u)
        self.in_adj = tuple(tuple(a) for a in ins)  # already sorted by u
        self._out_sets = tuple(frozenset(a) for a in self.out_adj)
        self._in_sets = tuple(frozenset(a) for a in self.in_adj)
        self._cache: dict = {}

    def cached(self, key, build):
        """Memoize a derived structure on this (immutable) graph."""
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, m={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrientedGraph) and self.n == other.n and self.out_adj == other.out_adj

    def __hash__(self) -> int:
        return hash((self.n, self.out_adj))

    @cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out_sets[u]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._out_sets[u] or u in self._out_sets[v]

    def out_set(self, v: int) -> frozenset[int]:
        return self._out_sets[v]

    def in_set(self, v: int) -> frozenset[int]:
        return self._in_sets[v]

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    def is_cyclic_triple(self, x: int, y: int, z: int) -> bool:
        """True when {x, y, z} spans a cyclic triangle in either rotation."""
        o = self._out_sets
        return (y in o[x] and z in o[y] and x in o[z]) or (z in o[x] and y in o[z] and x in o[y])

    def orient_triangle(self, x: int, y: int, z: int) -> tuple[int, int, int]:
        """Return the triple as a directed 3-cycle, starting at its smallest vertex."""
        o = self._out_sets
        if y in o[x] and z in o[y] and x in o[z]:
            cyc = (x, y, z)
        elif z in o[x] and y in o[z] and x in o[y]:
            cyc = (x, z, y)
        else:
            raise GraphError(f"{(x, y, z)} is not a cyclic triangle")
        return normalize_cycle(cyc)

    def is_cycle(self, cycle: Sequence[int]) -> bool:
        k = len(cycle)
        if k < 3 or len(set(cycle)) != k:
            return False
        if any(not (0 <= v < self.n) for v in cycle):
            return False
        o = self._out_sets
        return all(cycle[(i + 1) % k] in o[cycle[i]] for i in range(k))

    def is_path(self, path: Sequence[int]) -> bool:
        if not path or len(set(path)) != len(path):
            return False
        if any(not (0 <= v < self.n) for v in path):
            return False
        o = self._out_sets
        return all(path[i + 1] in o[path[i]] for i in range(len(path) - 1))

    @cached_property
    def _matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, outs in enumerate(self.out_adj):
            if outs:
                a[u, list(outs)] = 1
        a.setflags(write=False)
        return a

    def adjacency_matrix(self) -> np.ndarray:
        """Read-only 0/1 matrix with ``A[u, v] = 1`` iff ``u -> v``."""
        return self._matrix

    def to_og(self) -> str:
        lines = [f"og {self.n} {self.num_edges}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @cached_property
    def sha256(self) -> str:
        return hashlib.sha256(self.to_og().encode("ascii")).hexdigest()


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> OrientedGraph:
    """Build an oriented graph from an edge list, rejecting invalid input.

    Raises one of :class:`VertexRangeError`, :class:`SelfLoopError`,
    :class:`DuplicateEdgeError` or :class:`AntiparallelEdgeError` naming the
    offending pair.
    """
    if n < 0:
        raise VertexRangeError(f"negative vertex count {n}")
    outs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"self-loop ({u}, {v})")
        if v in outs[u]:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        if u in outs[v]:
            raise AntiparallelEdgeError(f"antiparallel pair ({u}, {v}) / ({v}, {u})")
        outs[u].add(v)
    return OrientedGraph(n, outs)


def from_matrix(a: np.ndarray) -> OrientedGraph:
    """Build from a 0/1 adjacency matrix; validates the orientation invariant."""
    a = np.asarray(a, dtype=bool)
    n = a.shape[0]
    if a.shape != (n, n):
        raise GraphError("adjacency matrix must be square")
    if np.any(np.diagonal(a)):
        v = int(np.flatnonzero(np.diagonal(a))[0])
        raise SelfLoopError(f"self-loop ({v}, {v})")
    both = a & a.T
    if both.any():
        u, v = (int(x) for x in np.argwhere(both)[0])
        raise AntiparallelEdgeError(f"antiparallel pair ({u}, {v}) / ({v}, {u})")
    return OrientedGraph(n, [np.flatnonzero(row).tolist() for row in a])


@dataclass(frozen=True)
class SemidegreeProfile:
    min_out: int
    min_in: int
    min_semi: int
    slack_c: Fraction  # 1/2 - min_semi / n


def semidegree_profile(g: OrientedGraph) -> SemidegreeProfile:
    if g.n < 1:
        raise GraphError("semidegree profile needs n >= 1")
    min_out = min(len(a) for a in g.out_adj)
    min_in = min(len(a) for a in g.in_adj)
    semi = min(min_out, min_in)
    return SemidegreeProfile(min_out, min_in, semi, Fraction(1, 2) - Fraction(semi, g.n))


def min_semidegree(g: OrientedGraph) -> int:
    if g.n == 0:
        return 0
    return min(min(len(a) for a in g.out_adj), min(len(a) for a in g.in_adj))


def induced_subgraph(g: OrientedGraph, vs: Iterable[int]) -> tuple[OrientedGraph, list[int]]:
    """Restrict ``g`` to ``vs``.

    Returns the subgraph and ``labels`` where ``labels[i]`` is the original
    vertex behind new vertex ``i`` (vertices keep their relative order).
    """
    labels = sorted(set(vs))
    for v in labels:
        if not (0 <= v < g.n):
            raise VertexRangeError(f"vertex {v} out of range for n={g.n}")
    index = {v: i for i, v in enumerate(labels)}
    outs = [[index[w] for w in g.out_adj[v] if w in index] for v in labels]
    return OrientedGraph(len(labels), outs), labels


def is_tournament(g: OrientedGraph) -> bool:
    # no antiparallel pairs, so completeness is a pure edge count
    return g.num_edges == g.n * (g.n - 1) // 2


def normalize_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate a directed cycle so that its smallest vertex comes first."""
    i = min(range(len(cycle)), key=cycle.__getitem__)
    return tuple(cycle[i:]) + tuple(cycle[:i])


@dataclass(frozen=True)
class CyclePacking:
    """Vertex-disjoint directed cycles in a host on ``host_n`` vertices."""

    host_n: int
    cycles: tuple[tuple[int, ...], ...]
    covered: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cycles = tuple(normalize_cycle(tuple(int(v) for v in c)) for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "covered", frozenset(v for c in cycles for v in c))

    @classmethod
    def empty(cls, n: int) -> "CyclePacking":
        return cls(n, ())

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def uncovered(self) -> list[int]:
        return [v for v in range(self.host_n) if v not in self.covered]

    def cycle_set(self) -> set[tuple[int, ...]]:
        return set(self.cycles)

    def lengths(self) -> list[int]:
        return sorted(len(c) for c in self.cycles)

    def validate(self, g: OrientedGraph) -> None:
        """Raise :class:`PackingError` naming the first bad cycle."""
        if g.n != self.host_n:
            raise PackingError(f"packing is for n={self.host_n}, host has n={g.n}")
        seen: set[int] = set()
        for i, c in enumerate(self.cycles):
            if len(c) < 3:
                raise PackingError(f"cycle {i} has length {len(c)} < 3", i)
            for v in c:
                if not (0 <= v < g.n):
                    raise PackingError(f"cycle {i} references vertex {v} outside 0..{g.n - 1}", i)
            if not g.is_cycle(c):
                raise PackingError(f"cycle {i} {list(c)} is not a directed cycle of the host", i)
            if seen.intersection(c):
                raise PackingError(f"cycle {i} shares vertices with an earlier cycle", i)
            seen.update(c)

    def is_valid(self, g: OrientedGraph) -> bool:
        try:
            self.validate(g)
        except PackingError:
            return False
        return True


def parse_og(text: str) -> OrientedGraph:
    """Parse the ``.og`` text format; errors carry 1-based line numbers."""
    lines = text.splitlines()
    if not lines:
        raise GraphError("line 1: empty input, expected 'og <n> <m>'")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "og":
        raise GraphError(f"line 1: expected 'og <n> <m>', got {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise GraphError(f"line 1: non-integer header {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise GraphError("line 1: negative counts")
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    outs: list[set[int]] = [set() for _ in range(n)]
    for lineno, ln in body:
        parts = ln.split()
        try:
            u, v = (int(p) for p in parts)
        except ValueError:
            raise GraphError(f"line {lineno}: expected '<u> <v>', got {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"line {lineno}: edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"line {lineno}: self-loop ({u}, {v})")
        if v in outs[u]:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge ({u}, {v})")
        if u in outs[v]:
            raise AntiparallelEdgeError(f"line {lineno}: antiparallel pair ({u}, {v}) / ({v}, {u})")
        outs[u].add(v)
    return OrientedGraph(n, outs)


def read_og(path) -> OrientedGraph:
    with open(path, encoding="ascii") as fh:
        return parse_og(fh.read())


def write_og(g: OrientedGraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(g.to_og())
