import random

import pytest
from hypothesis import strategies as st

from matchsat.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3,
                           max_extra: int | None = None) -> Graph:
    """Random spanning tree on 1..n plus each remaining pair with prob ``extra``."""
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    edges = set()
    for pos in range(1, n):
        u, v = verts[pos], verts[rng.randrange(pos)]
        edges.add((min(u, v), max(u, v)))
    others = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
              if (u, v) not in edges]
    rng.shuffle(others)
    added = 0
    for e in others:
        if max_extra is not None and added >= max_extra:
            break
        if rng.random() < extra:
            edges.add(e)
            added += 1
    edges = list(edges)
    rng.shuffle(edges)
    return Graph(n, tuple(edges))


@st.composite
def connected_graphs(draw, min_n=2, max_n=7):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.sampled_from([0.0, 0.2, 0.5, 1.0]))
    return random_connected_graph(random.Random(seed), n, extra)


@pytest.fixture
def rng():
    return random.Random(20261014)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
