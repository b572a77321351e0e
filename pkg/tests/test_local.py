import numpy as np

from cyclepack.generators import extremal_thm1, random_tournament, rotational_tournament
from cyclepack.local import best_packing_in_window, improve_packing, reroute
from cyclepack.oracle import oracle_max_triangle_packing


def test_window_exact_on_small_hosts():
    for s in range(15):
        g = random_tournament(12, s)
        best = best_packing_in_window(g, range(12), 3)
        assert len(best) == oracle_max_triangle_packing(g)[0]
        assert all(g.is_cycle(c) for c in best)
        assert len({v for c in best for v in c}) == 3 * len(best)


def test_improve_from_empty():
    g = rotational_tournament(15)
    cycles, moves = improve_packing(g, [], 3, np.random.default_rng(0), budget=500)
    assert len(cycles) == 5 and moves >= 1


def test_improve_cannot_beat_extremal():
    g = extremal_thm1(1)
    cycles, _ = improve_packing(g, [], 3, np.random.default_rng(0), budget=500)
    assert len(cycles) == 6


def test_reroute_places_missing_length():
    g = random_tournament(40, 6)
    rng = np.random.default_rng(1)
    cycles, missing = reroute(g, [], [10, 5, 3], rng)
    assert missing == []
    assert sorted(len(c) for c in cycles) == [3, 5, 10]
    assert len({v for c in cycles for v in c}) == 18
