import itertools

import pytest

from cyclepack.cycles import enumerate_cycles, find_cycle_of_length, hamilton_path_tournament
from cyclepack.generators import random_tournament, rotational_tournament, transitive_tournament
from cyclepack.graph import GraphError, build_graph


def test_triangle_in_rotational_7():
    g = rotational_tournament(7)
    all_tris = set(enumerate_cycles(g, 3))
    assert len(all_tris) == 14
    for s in range(10):
        assert find_cycle_of_length(g, 3, seed=s) in all_tris


def test_transitive_has_no_hamilton_cycle():
    assert find_cycle_of_length(transitive_tournament(12), 12, budget=2000) is None
    assert find_cycle_of_length(transitive_tournament(12), 3, budget=2000) is None


def test_hamilton_rotational_99():
    g = rotational_tournament(99)
    for s in range(20):
        c = find_cycle_of_length(g, 99, seed=s)
        assert c is not None and len(set(c)) == 99 and g.is_cycle(c)


def test_all_lengths_random_tournament():
    g = random_tournament(60, 4)
    for length in range(3, 61):
        c = find_cycle_of_length(g, length, seed=length)
        assert c is not None and len(c) == length and g.is_cycle(c)


def test_forbidden_and_bounds():
    g = rotational_tournament(21)
    forbidden = set(range(10))
    c = find_cycle_of_length(g, 8, forbidden=forbidden, seed=1)
    assert c is None or not forbidden & set(c)
    assert find_cycle_of_length(g, 12, forbidden=forbidden) is None
    with pytest.raises(GraphError):
        find_cycle_of_length(g, 2)


def test_hamilton_path():
    g = random_tournament(50, 1)
    for seed in (None, 3):
        p = hamilton_path_tournament(g, seed=seed)
        assert sorted(p) == list(range(50)) and g.is_path(p)
    sub = [4, 9, 13, 22]
    p = hamilton_path_tournament(g, sub)
    assert sorted(p) == sub and g.is_path(p)
    with pytest.raises(GraphError):
        hamilton_path_tournament(build_graph(3, [(0, 1)]))


def _brute_cycles(g, k):
    found = set()
    for perm in itertools.permutations(range(g.n), k):
        if perm[0] == min(perm) and g.is_cycle(perm):
            found.add(perm)
    return found


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_enumerate_cycles_matches_brute(k):
    g = random_tournament(7, k)
    listed = list(enumerate_cycles(g, k))
    assert len(listed) == len(set(listed))
    assert set(listed) == _brute_cycles(g, k)
