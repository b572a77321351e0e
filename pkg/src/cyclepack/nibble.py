"""Semi-random nibble for near-perfect matchings in r-uniform hypergraphs.

Each bite proposes every still-available edge independently with
probability ``p`` and keeps the proposals that meet no other proposal.
Kept edges join the matching and every edge touching a newly covered
vertex stops being available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import OrientedGraph
from .rng import as_generator
from .triangles import list_triangles


class Hypergraph:
    """``r``-uniform hypergraph on ``0..n-1``; edges are sorted index rows."""

    def __init__(self, n: int, edges, r: int | None = None):
        edges = np.asarray(edges, dtype=np.int64)
        if edges.ndim != 2:
            if edges.size:
                raise ValueError("edges must be a 2-D array of vertex rows")
            edges = edges.reshape(0, r or 0)
        if r is None:
            r = edges.shape[1]
        if edges.shape[1] != r:
            raise ValueError(f"expected {r}-uniform edges, got width {edges.shape[1]}")
        edges = np.sort(edges, axis=1)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge vertex out of range")
            if r > 1 and np.any(edges[:, 1:] == edges[:, :-1]):
                raise ValueError("edges must have r distinct vertices")
        self.n = n
        self.r = r
        self.edges = edges
        self.edges.setflags(write=False)
        self.vertex_degrees = np.bincount(edges.ravel(), minlength=n) if edges.size else np.zeros(n, dtype=np.int64)
        self._incidence = None

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Hypergraph(r={self.r}, n={self.n}, m={len(self)})"

    def incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR arrays ``(ptr, edge_ids)``: edges at ``v`` are ``edge_ids[ptr[v]:ptr[v+1]]``."""
        if self._incidence is None:
            flat = self.edges.ravel()
            order = np.argsort(flat, kind="stable")
            ids = (order // self.r).astype(np.int64)
            ptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(self.vertex_degrees, out=ptr[1:])
            self._incidence = (ptr, ids)
        return self._incidence

    def edges_at(self, v: int) -> np.ndarray:
        ptr, ids = self.incidence()
        return ids[ptr[v]:ptr[v + 1]]

    def max_codegree(self, sample: int | None = None, rng=None) -> int:
        """Largest number of edges sharing a vertex pair.

        With ``sample`` set, only pairs drawn from that many random edges are
        inspected (a lower bound on the true maximum).
        """
        if self.r < 2 or len(self) == 0:
            return 0
        edges = self.edges
        if sample is not None and sample < len(edges):
            rng = as_generator(rng, "codegree")
            edges = edges[rng.choice(len(edges), sample, replace=False)]
            best = 0
            for row in edges:
                for i in range(self.r):
                    for j in range(i + 1, self.r):
                        a, b = self.edges_at(int(row[i])), self.edges_at(int(row[j]))
                        best = max(best, np.intersect1d(a, b, assume_unique=True).size)
            return best
        keys = []
        for i in range(self.r):
            for j in range(i + 1, self.r):
                keys.append(edges[:, i] * self.n + edges[:, j])
        _, counts = np.unique(np.concatenate(keys), return_counts=True)
        return int(counts.max())


def triangle_hypergraph(g: OrientedGraph) -> Hypergraph:
    """3-uniform hypergraph whose edges are the cyclic triangles of ``g``."""
    return Hypergraph(g.n, list_triangles(g), r=3)


def is_matching(h: Hypergraph, edge_ids) -> bool:
    ids = np.asarray(edge_ids, dtype=np.int64)
    if ids.size == 0:
        return True
    verts = h.edges[ids].ravel()
    return np.unique(verts).size == verts.size


def _propose(available: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    if p <= 0 or available.size == 0:
        return available[:0]
    if p >= 1:
        return available
    k = int(rng.binomial(available.size, p))
    if k == 0:
        return available[:0]
    return np.sort(available[rng.choice(available.size, k, replace=False)])


def _resolve(h: Hypergraph, proposed: np.ndarray) -> np.ndarray:
    if proposed.size == 0:
        return proposed
    verts = h.edges[proposed]
    hits = np.bincount(verts.ravel(), minlength=h.n)
    return proposed[np.all(hits[verts] == 1, axis=1)]


def bite(h: Hypergraph, available, p: float, seed=0) -> tuple[np.ndarray, set[int]]:
    """One nibble step.

    Returns the kept edge ids (a matching) and the vertices they cover.
    """
    rng = as_generator(seed, "bite")
    available = np.asarray(available, dtype=np.int64)
    kept = _resolve(h, _propose(available, p, rng))
    return kept, set(h.edges[kept].ravel().tolist())


@dataclass
class BiteStats:
    p: float
    proposed: int
    deleted: int
    kept: int


@dataclass
class NibbleTrace:
    n: int
    bites: list[BiteStats]
    final_matching: list[int]
    uncovered: list[int]
    stop_reason: str
    warnings: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "bites": len(self.bites),
            "first_bite_kept": self.bites[0].kept if self.bites else 0,
            "matching_size": len(self.final_matching),
            "uncovered": len(self.uncovered),
            "stop_reason": self.stop_reason,
            "warnings": list(self.warnings),
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "bites": [vars(b).copy() for b in self.bites],
            "final_matching": list(self.final_matching),
            "uncovered": list(self.uncovered),
            "stop_reason": self.stop_reason,
            "warnings": list(self.warnings),
        }


def default_schedule(h: Hypergraph, c2: float = 0.5, gamma: float = 0.9,
                     max_bites: int = 200) -> list[float]:
    """Geometric bite probabilities ``p_i = c2 / n^(r-1) * gamma^i``."""
    if h.n == 0:
        return []
    p0 = c2 / float(h.n) ** (h.r - 1)
    return [min(1.0, p0 * gamma**i) for i in range(max_bites)]


def check_preconditions(h: Hypergraph, delta: float = 0.1, rng=None) -> list[str]:
    """Approximate regularity and small-codegree checks; returns warnings."""
    warnings = []
    if len(h) == 0:
        return ["hypergraph has no edges"]
    deg = h.vertex_degrees
    D = float(deg.mean())
    lo, hi = (1 - delta) * D, (1 + delta) * D
    if deg.min() < lo or deg.max() > hi:
        warnings.append(
            f"degrees not within (1 +/- {delta})D: min={int(deg.min())} max={int(deg.max())} D={D:.1f}")
    sample = 5000 if h.n > 2000 else None
    cod = h.max_codegree(sample=sample, rng=rng)
    if cod >= delta * D:
        warnings.append(f"max codegree {cod} >= delta*D = {delta * D:.1f}")
    return warnings


def run_nibble(h: Hypergraph, eps: float, schedule=None, seed=0, *,
               initial=None, c2: float = 0.5, gamma: float = 0.9,
               max_bites: int = 200, delta: float = 0.1) -> NibbleTrace:
    """Apply bites until at most ``eps * n`` vertices are uncovered or the
    schedule runs out.  ``initial`` seeds the matching (e.g. an earlier bite)."""
    rng = as_generator(seed, "nibble")
    if schedule is None:
        schedule = default_schedule(h, c2, gamma, max_bites)
    warnings = check_preconditions(h, delta, rng)
    covered = np.zeros(h.n, dtype=bool)
    alive = np.ones(len(h), dtype=bool)
    matching: list[int] = []
    ptr, ids = h.incidence()

    def take(edge_ids):
        for e in edge_ids:
            matching.append(int(e))
            for v in h.edges[e]:
                if not covered[v]:
                    covered[v] = True
                    alive[ids[ptr[v]:ptr[v + 1]]] = False

    if initial is not None and len(initial):
        if not is_matching(h, initial):
            raise ValueError("initial edges are not a matching")
        take(np.asarray(initial, dtype=np.int64))

    bites: list[BiteStats] = []
    stop = "exhausted"
    for p in schedule:
        if h.n - covered.sum() <= eps * h.n:
            stop = "eps"
            break
        available = np.flatnonzero(alive)
        if available.size == 0:
            break
        proposed = _propose(available, p, rng)
        kept = _resolve(h, proposed)
        bites.append(BiteStats(float(p), int(proposed.size), int(proposed.size - kept.size), int(kept.size)))
        take(kept)
    else:
        if h.n - covered.sum() <= eps * h.n:
            stop = "eps"
    return NibbleTrace(h.n, bites, matching, np.flatnonzero(~covered).tolist(), stop, warnings)


def greedy_complete(h: Hypergraph, matching, seed=0) -> list[int]:
    """Extend ``matching`` to a maximal matching, scanning the remaining
    edges in a seeded random order."""
    rng = as_generator(seed, "greedy")
    matching = [int(e) for e in matching]
    if not is_matching(h, matching):
        raise ValueError("input is not a matching")
    covered = np.zeros(h.n, dtype=bool)
    if matching:
        covered[h.edges[matching].ravel()] = True
    if len(h) == 0:
        return matching
    free = np.flatnonzero(~covered[h.edges].any(axis=1))
    order = free[rng.permutation(free.size)]
    cov = covered.tolist()
    rows = h.edges[order].tolist()
    for e, row in zip(order.tolist(), rows):
        if any(cov[v] for v in row):
            continue
        for v in row:
            cov[v] = True
        matching.append(e)
    return matching
