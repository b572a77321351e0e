import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclepack.generators import extremal_thm1, random_tournament, rotational_tournament, transitive_tournament
from cyclepack.graph import (
    AntiparallelEdgeError, CyclePacking, DuplicateEdgeError, GraphError, PackingError, SelfLoopError,
    VertexRangeError, build_graph, from_matrix, induced_subgraph, is_tournament, min_semidegree,
    normalize_cycle, parse_og, read_og, semidegree_profile, write_og,
)


def test_build_three_cycle(triangle):
    assert triangle.n == 3
    assert triangle.edges() == [(0, 1), (1, 2), (2, 0)]
    assert triangle.is_cycle((0, 1, 2))


@pytest.mark.parametrize("edges, err", [
    ([(0, 1), (1, 0)], AntiparallelEdgeError),
    ([(0, 1), (0, 1)], DuplicateEdgeError),
    ([(1, 1)], SelfLoopError),
    ([(0, 3)], VertexRangeError),
])
def test_build_rejects(edges, err):
    with pytest.raises(err) as info:
        build_graph(3, edges)
    assert str(edges[-1][0]) in str(info.value)


def test_four_vertex_tournament():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
    pairs = all(g.adjacent(u, v) for u, v in itertools.combinations(range(4), 2))
    assert pairs and is_tournament(g)


def test_semidegree_examples(triangle):
    p = semidegree_profile(triangle)
    assert (p.min_out, p.min_in) == (1, 1)
    assert p.slack_c == Fraction(1, 6)
    assert semidegree_profile(transitive_tournament(5)).min_semi == 0
    r7 = semidegree_profile(rotational_tournament(7))
    assert (r7.min_out, r7.min_in) == (3, 3)
    assert sorted(rotational_tournament(7).out_adj[0]) == [1, 2, 3]


def test_induced_subgraph(triangle):
    sub, labels = induced_subgraph(triangle, {0, 1})
    assert sub.edges() == [(0, 1)] and labels == [0, 1]
    empty, labels = induced_subgraph(triangle, set())
    assert empty.n == 0 and labels == []
    t7 = rotational_tournament(7)
    sub, labels = induced_subgraph(t7, [6, 2, 4, 0])
    assert labels == [0, 2, 4, 6] and is_tournament(sub)
    same, labels = induced_subgraph(t7, range(7))
    assert same == t7
    with pytest.raises(VertexRangeError):
        induced_subgraph(t7, [9])


def test_is_tournament_examples(triangle):
    assert is_tournament(triangle)
    assert not is_tournament(build_graph(4, [(0, 1), (1, 2), (2, 0)]))
    assert is_tournament(extremal_thm1(1))


@given(st.integers(1, 14), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_invariants_random(n, seed):
    g = random_tournament(n, seed)
    for u in range(n):
        assert u not in g.out_set(u)
        for v in g.out_adj[u]:
            assert u in g.in_set(v) and not g.has_edge(v, u)
    outs = sum(g.out_degree(v) for v in range(n))
    ins = sum(g.in_degree(v) for v in range(n))
    assert outs == ins == g.num_edges == n * (n - 1) // 2


def test_from_matrix_checks():
    with pytest.raises(AntiparallelEdgeError):
        from_matrix([[0, 1], [1, 0]])
    with pytest.raises(SelfLoopError):
        from_matrix([[1]])


def test_og_round_trip(tmp_path):
    g = rotational_tournament(7)
    path = tmp_path / "t7.og"
    write_og(g, path)
    assert path.read_text().splitlines()[0] == "og 7 21"
    assert read_og(path) == g
    assert read_og(path).sha256 == g.sha256


@pytest.mark.parametrize("text, line", [
    ("og 3 2\n0 1\n1 0\n", 3),
    ("og 3 1\n0 5\n", 2),
    ("og 3 1\n2 2\n", 2),
    ("og 3 1\nfoo bar\n", 2),
    ("graph 3 0\n", 1),
])
def test_parse_errors_have_line_numbers(text, line):
    with pytest.raises(GraphError) as info:
        parse_og(text)
    assert f"line {line}" in str(info.value)


def test_parse_edge_count_mismatch():
    with pytest.raises(GraphError):
        parse_og("og 3 2\n0 1\n")


def test_normalize_cycle():
    assert normalize_cycle((5, 2, 9)) == (2, 9, 5)


def test_packing_validation():
    g = rotational_tournament(7)
    ok = CyclePacking(7, ((0, 2, 4), (1, 3, 5)))
    assert ok.is_valid(g)
    assert ok.uncovered == [6]
    assert ok.lengths() == [3, 3]
    for cycles, idx in [
        (((0, 2, 4), (2, 4, 6)), 1),   # overlap
        (((0, 4, 2),), 0),            # wrong direction
        (((0, 1),), 0),               # too short
        (((0, 1, 9),), 0),            # out of range
    ]:
        with pytest.raises(PackingError) as info:
            CyclePacking(7, cycles).validate(g)
        assert info.value.index == idx


def test_min_semidegree():
    assert min_semidegree(rotational_tournament(9)) == 4
