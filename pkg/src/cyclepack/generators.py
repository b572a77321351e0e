"""Instance families: regular tournaments, the two extremal constructions,
triangle-free circulants and seeded random tournaments."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .graph import GraphError, OrientedGraph, from_matrix
from .rng import as_generator

FAMILIES = (
    "rotational",
    "near_regular",
    "random_tournament",
    "transitive",
    "extremal_thm1",
    "layered_circulant",
    "triangle_free_circulant",
)


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GraphError(f"unknown family {self.family!r}")
        if self.family == "extremal_thm1" and self.n % 18 != 3:
            raise GraphError(f"extremal_thm1 needs n = 3 mod 18, got {self.n}")
        if self.family == "rotational" and self.n % 2 == 0:
            raise GraphError(f"rotational tournaments need odd n, got {self.n}")


def generate(spec: InstanceSpec) -> OrientedGraph:
    f, n = spec.family, spec.n
    if f == "rotational":
        return rotational_tournament(n)
    if f == "near_regular":
        return near_regular_tournament(n, spec.params.get("relabel_seed"))
    if f == "random_tournament":
        return random_tournament(n, spec.seed)
    if f == "transitive":
        return transitive_tournament(n)
    if f == "extremal_thm1":
        return extremal_thm1((n - 3) // 18)
    if f == "triangle_free_circulant":
        return triangle_free_circulant(n)
    if f == "layered_circulant":
        sizes = spec.params.get("sizes")
        if sizes is None:
            sizes = layered_sizes(n, spec.params.get("epsilon", 0.0))
        return layered_circulant(n, tuple(sizes))
    raise GraphError(f"unknown family {f!r}")


def circulant(m: int, offsets) -> OrientedGraph:
    """Circulant oriented graph: ``v -> v + d (mod m)`` for each offset ``d``."""
    offsets = sorted({d % m for d in offsets})
    for d in offsets:
        if d == 0:
            raise GraphError("offset 0 would create self-loops")
        if (m - d) % m in offsets:
            raise GraphError(f"offsets {d} and {m - d} give antiparallel pairs")
    return OrientedGraph(m, [[(v + d) % m for d in offsets] for v in range(m)])


def rotational_tournament(n: int) -> OrientedGraph:
    """Vertex ``v`` beats ``v+1, ..., v+(n-1)/2`` modulo ``n``."""
    if n < 3 or n % 2 == 0:
        raise GraphError(f"rotational tournament needs odd n >= 3, got {n}")
    return circulant(n, range(1, (n - 1) // 2 + 1))


def near_regular_tournament(n: int, seed=None) -> OrientedGraph:
    """Regular tournament for odd ``n``; for even ``n`` the rotational
    tournament on ``n+1`` vertices with its last vertex deleted, so each
    vertex has out/in-degrees ``{n/2, n/2 - 1}``.

    ``seed`` (optional) applies a seeded relabeling; ``None`` keeps the fixed
    vertex order.
    """
    if n < 1:
        raise GraphError(f"n must be positive, got {n}")
    if n == 1:
        g = OrientedGraph(1, [[]])
    elif n % 2 == 1:
        g = rotational_tournament(n)
    else:
        h = rotational_tournament(n + 1)
        g = OrientedGraph(n, [[w for w in h.out_adj[v] if w < n] for v in range(n)])
    if seed is None:
        return g
    perm = as_generator(seed, "near_regular").permutation(n)
    return relabel(g, perm)


def relabel(g: OrientedGraph, perm) -> OrientedGraph:
    """Rename vertex ``v`` to ``perm[v]``."""
    perm = [int(p) for p in perm]
    outs: list[list[int]] = [[] for _ in range(g.n)]
    for v in range(g.n):
        outs[perm[v]] = [perm[w] for w in g.out_adj[v]]
    return OrientedGraph(g.n, outs)


def transitive_tournament(n: int) -> OrientedGraph:
    """``i -> j`` for every ``i < j``; contains no cycle at all."""
    return OrientedGraph(n, [range(v + 1, n) for v in range(n)])


def _layered(class_graphs: list[OrientedGraph]) -> OrientedGraph:
    # all cross pairs oriented V_i -> V_{i+1 mod 3}
    offs = np.cumsum([0] + [h.n for h in class_graphs])
    n = int(offs[-1])
    outs: list[list[int]] = [[] for _ in range(n)]
    for i, h in enumerate(class_graphs):
        nxt = (i + 1) % 3
        targets = list(range(int(offs[nxt]), int(offs[nxt + 1])))
        for v in range(h.n):
            outs[int(offs[i]) + v] = [int(offs[i]) + w for w in h.out_adj[v]] + targets
    return OrientedGraph(n, outs)


def extremal_thm1(k: int) -> OrientedGraph:
    """Tournament on ``18k+3`` vertices with no perfect cyclic-triangle packing.

    Classes ``V0, V1, V2`` of sizes ``6k, 6k+1, 6k+2`` (vertices numbered in
    that order), all cross edges ``V_i -> V_{i+1}``, and a near-regular
    tournament with a fixed vertex order inside each class.
    """
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    return _layered([near_regular_tournament(6 * k + i) for i in range(3)])


def extremal_classes(k: int) -> list[range]:
    return [range(0, 6 * k), range(6 * k, 12 * k + 1), range(12 * k + 1, 18 * k + 3)]


def triangle_free_circulant(m: int) -> OrientedGraph:
    """Circulant with out-offsets ``1..ceil(m/3)-1``; no cyclic triangle."""
    if m < 3:
        raise GraphError(f"m must be >= 3, got {m}")
    s = -(-m // 3) - 1
    return circulant(m, range(1, s + 1))


def _triangle_free_block(m: int) -> OrientedGraph:
    if m >= 3:
        return triangle_free_circulant(m)
    return OrientedGraph(m, [[] for _ in range(m)])


def layered_circulant(n: int, sizes: tuple[int, int, int]) -> OrientedGraph:
    """Three classes with cross edges ``V_i -> V_{i+1}`` and a triangle-free
    circulant inside each class, so every cyclic triangle is a transversal."""
    if len(sizes) != 3 or sum(sizes) != n:
        raise GraphError(f"class sizes {sizes} do not sum to n={n}")
    s0, s1, s2 = sizes
    if not (0 <= s0 <= s1 <= s2):
        raise GraphError(f"class sizes must satisfy s0 <= s1 <= s2, got {sizes}")
    return _layered([_triangle_free_block(s) for s in sizes])


def layered_sizes(n: int, epsilon: float) -> tuple[int, int, int]:
    """Class sizes ``((1/3 - eps/2)n, n/3, rest)`` rounded down."""
    s0 = int((1 / 3 - epsilon / 2) * n)
    s1 = n // 3
    return s0, s1, n - s0 - s1


def random_tournament(n: int, seed) -> OrientedGraph:
    """Orient each pair ``{i, j}`` by one fair coin from the seeded stream."""
    if n < 1:
        raise GraphError(f"n must be positive, got {n}")
    rng = as_generator(seed, "random_tournament")
    iu, ju = np.triu_indices(n, 1)
    flip = rng.integers(0, 2, size=iu.size).astype(bool)
    a = np.zeros((n, n), dtype=bool)
    a[iu[~flip], ju[~flip]] = True
    a[ju[flip], iu[flip]] = True
    return from_matrix(a)


def random_composition(total: int, seed, short=(3, 12), long_min: int = 30,
                       long_prob: float = 0.3) -> list[int]:
    """Random lengths in ``[short[0], short[1]] U [long_min, total]`` summing to ``total``.

    Raises if ``total`` cannot be written this way (e.g. ``total`` in 1..2).
    """
    rng = as_generator(seed, "composition")
    lo, hi = short
    out: list[int] = []
    rest = total
    while rest > 0:
        if rest <= hi:
            if rest < lo:
                # absorb the remainder into an earlier short length
                for i, x in enumerate(out):
                    if x + rest <= hi:
                        out[i] = x + rest
                        break
                else:
                    raise GraphError(f"cannot compose {total} from the allowed lengths")
                break
            out.append(rest)
            break
        if rest >= long_min and rng.random() < long_prob:
            cap = rest if rest - long_min < lo else rest - lo
            x = int(rng.integers(long_min, max(long_min, cap) + 1))
            if rest - x in (1, 2):
                x = rest
        else:
            x = int(rng.integers(lo, min(hi, rest - lo) + 1)) if rest - lo >= lo else rest
        out.append(x)
        rest -= x
    return sorted(out, reverse=True)
