import itertools
from collections import Counter

import pytest

from cyclepack.generators import (
    InstanceSpec, extremal_classes, extremal_thm1, generate, layered_circulant, layered_sizes,
    near_regular_tournament, random_composition, random_tournament, rotational_tournament,
    transitive_tournament, triangle_free_circulant,
)
from cyclepack.graph import GraphError, is_tournament, min_semidegree

from conftest import brute_cyclic_triangles


def test_rotational_small():
    assert rotational_tournament(3).edges() == [(0, 1), (1, 2), (2, 0)]
    g5 = rotational_tournament(5)
    assert all(g5.out_degree(v) == 2 for v in range(5))
    assert brute_cyclic_triangles(g5) == 5
    assert brute_cyclic_triangles(rotational_tournament(7)) == 14
    with pytest.raises(GraphError):
        rotational_tournament(8)


def test_near_regular():
    assert all(near_regular_tournament(7).out_degree(v) == 3 for v in range(7))
    g6 = near_regular_tournament(6)
    for v in range(6):
        assert g6.out_degree(v) in (2, 3) and g6.in_degree(v) == 5 - g6.out_degree(v)
    assert near_regular_tournament(1).num_edges == 0
    for n in range(2, 16):
        g = near_regular_tournament(n, seed=n)
        outs = [g.out_degree(v) for v in range(n)]
        ins = [g.in_degree(v) for v in range(n)]
        assert is_tournament(g)
        assert max(outs) - min(outs) <= 1 and max(ins) - min(ins) <= 1


def test_extremal_k1():
    g = extremal_thm1(1)
    assert g.n == 21 and is_tournament(g)
    assert [len(c) for c in extremal_classes(1)] == [6, 7, 8]
    for v in range(21):
        assert g.out_degree(v) in (9, 10, 11) and g.in_degree(v) in (9, 10, 11)
        assert g.out_degree(v) + g.in_degree(v) == 20


def test_extremal_triangle_signatures():
    g = extremal_thm1(1)
    cls = {v: i for i, c in enumerate(extremal_classes(1)) for v in c}
    sizes = [6, 7, 8]
    for tri in itertools.combinations(range(21), 3):
        if not g.is_cyclic_triple(*tri):
            continue
        sig = sorted(Counter(cls[v] for v in tri).values())
        assert sig in ([1, 1, 1], [3])
        left = list(sizes)
        for v in tri:
            left[cls[v]] -= 1
        assert len({s % 3 for s in left}) == 3


def test_extremal_is_fixed():
    assert extremal_thm1(1) == extremal_thm1(1)
    assert extremal_thm1(2).n == 39


def test_triangle_free_circulant():
    assert triangle_free_circulant(3).num_edges == 0
    g9 = triangle_free_circulant(9)
    assert all(g9.out_degree(v) == 2 for v in range(9))
    g30 = triangle_free_circulant(30)
    assert all(g30.out_degree(v) == 9 for v in range(30))
    for m in range(3, 31):
        assert brute_cyclic_triangles(triangle_free_circulant(m)) == 0


def test_layered_circulant():
    with pytest.raises(GraphError):
        layered_circulant(10, (3, 3, 3))
    g = layered_circulant(18, (5, 6, 7))
    cls = [0] * 5 + [1] * 6 + [2] * 7
    for tri in itertools.combinations(range(18), 3):
        if g.is_cyclic_triple(*tri):
            assert sorted(cls[v] for v in tri) == [0, 1, 2]
    assert layered_sizes(30, 0.0) == (10, 10, 10)


def test_random_tournament():
    assert random_tournament(1, 5).num_edges == 0
    assert random_tournament(40, 7).to_og() == random_tournament(40, 7).to_og()
    assert random_tournament(40, 7) != random_tournament(40, 8)


def test_random_tournament_semidegree_concentration():
    seeds = range(300)
    inside = sum(1 for s in seeds if 70 <= min_semidegree(random_tournament(200, s)) <= 130)
    assert inside >= 0.99 * len(seeds)


def test_transitive_has_no_triangles():
    assert brute_cyclic_triangles(transitive_tournament(7)) == 0


def test_generate_specs():
    assert generate(InstanceSpec("rotational", 9)) == rotational_tournament(9)
    assert generate(InstanceSpec("extremal_thm1", 21)) == extremal_thm1(1)
    with pytest.raises(GraphError):
        InstanceSpec("extremal_thm1", 20)
    with pytest.raises(GraphError):
        InstanceSpec("rotational", 10)
    with pytest.raises(GraphError):
        InstanceSpec("nope", 5)


def test_random_composition():
    for s in range(30):
        comp = random_composition(100, s)
        assert sum(comp) == 100
        assert all(3 <= x <= 12 or x >= 30 for x in comp)
