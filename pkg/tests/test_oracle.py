import itertools
import random

import pytest

from conftest import random_connected_graph
from matchsat.graph import Graph, complete_graph, cycle_graph, path_graph
from matchsat.oracle import (OracleTooLarge, decide, max_matching,
                             max_matching_by_subsets)


def is_matching(g, edges):
    ends = [w for x in edges for w in g.edge(x)]
    return len(ends) == len(set(ends))


def test_triangle():
    assert max_matching(complete_graph(3)).max_size == 1


def test_p4():
    r = max_matching(path_graph(4))
    assert r.max_size == 2 and r.witness == {1, 3}


def test_k4():
    assert max_matching(complete_graph(4)).max_size == 2
    assert max_matching_by_subsets(complete_graph(4)) == 2


@pytest.mark.parametrize("n", range(2, 12))
def test_paths_and_cycles(n):
    assert max_matching(path_graph(n)).max_size == n // 2
    if n >= 3:
        assert max_matching(cycle_graph(n)).max_size == n // 2


def test_decide():
    assert decide(path_graph(4), 2)
    assert not decide(path_graph(4), 3)
    assert not decide(complete_graph(3), 2)


def test_dual_oracles_agree():
    rng = random.Random(13)
    checked = 0
    while checked < 200:
        g = random_connected_graph(rng, rng.randint(2, 9), extra=0.25)
        if g.m > 16:
            continue
        r = max_matching(g)
        assert is_matching(g, r.witness) and len(r.witness) == r.max_size
        assert r.max_size == max_matching_by_subsets(g)
        checked += 1


def test_independent_of_edge_order():
    rng = random.Random(17)
    for _ in range(30):
        g = random_connected_graph(rng, rng.randint(3, 8))
        edges = list(g.edges)
        rng.shuffle(edges)
        assert max_matching(g.with_edges(edges)).max_size == max_matching(g).max_size


def test_too_large():
    with pytest.raises(OracleTooLarge):
        max_matching(complete_graph(8))
    assert max_matching(complete_graph(8), limit=28).max_size == 4


def test_no_larger_matching_exists_on_small_graphs():
    g = Graph(6, ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4)))
    best = max_matching(g).max_size
    assert best == 3
    assert not any(is_matching(g, s)
                   for s in itertools.combinations(range(1, g.m + 1), best + 1))
