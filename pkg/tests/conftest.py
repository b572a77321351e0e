import itertools

import pytest

from cyclepack.graph import build_graph


def brute_cyclic_triangles(g):
    """Independent count: check all vertex triples directly."""
    total = 0
    for x, y, z in itertools.combinations(range(g.n), 3):
        if (g.has_edge(x, y) and g.has_edge(y, z) and g.has_edge(z, x)) or \
           (g.has_edge(x, z) and g.has_edge(z, y) and g.has_edge(y, x)):
            total += 1
    return total


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (2, 0)])


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (ok, detail)
    print(f"ACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
