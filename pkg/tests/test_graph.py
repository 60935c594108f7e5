import pytest
from hypothesis import given

from conftest import connected_graphs
from matchsat.graph import (Graph, GraphError, InstanceError, adjacent_pairs,
                            complete_graph, parse_graph, path_graph,
                            serialize_graph, star_graph, validate_instance)


def test_parse_path():
    g = parse_graph("4 3\n1 2\n2 3\n3 4")
    assert g.n == 4
    assert g.edges == ((1, 2), (2, 3), (3, 4))


def test_parse_triangle():
    g = parse_graph("3 3\n1 2\n2 3\n1 3")
    assert g.m == 3 and g.edges[2] == (1, 3)


def test_comments_and_blank_lines_are_skipped():
    g = parse_graph("# a path\n\n3 2\n# first\n1 2\n\n2 3\n")
    assert g.edges == ((1, 2), (2, 3))


@pytest.mark.parametrize("text, kind, line", [
    ("2 1\n1 1", "self-loop", 2),
    ("3 2\n1 2\n2 4", "vertex-range", 3),
    ("3 3\n1 2\n2 3\n3 2", "duplicate-edge", 4),
    ("4 2\n1 2\n3 4", "disconnected", 1),
    ("3 2\n1 2\nx 3", "malformed", 3),
    ("3 2\n1 2 3\n2 3", "malformed", 2),
    ("3 3\n1 2\n2 3", "malformed", 1),
    ("3 1\n1 2\n2 3", "malformed", 3),
    ("1 0", "too-few-vertices", 1),
    ("", "malformed", None),
])
def test_parse_errors_name_the_line(text, kind, line):
    with pytest.raises(GraphError) as info:
        parse_graph(text)
    assert info.value.kind == kind
    assert info.value.line == line
    if line is not None:
        assert f"line {line}" in str(info.value)


def test_disconnected_can_be_downgraded_to_warning():
    with pytest.warns(UserWarning, match="not connected"):
        g = parse_graph("4 2\n1 2\n3 4", require_connected=False)
    assert g.m == 2


def test_adjacent_pairs_examples():
    assert adjacent_pairs(path_graph(4)) == {(1, 2), (2, 3)}
    assert adjacent_pairs(complete_graph(3)) == {(1, 2), (1, 3), (2, 3)}
    assert adjacent_pairs(star_graph(3)) == {(1, 2), (1, 3), (2, 3)}


def test_validate_instance():
    p4 = path_graph(4)
    assert validate_instance(p4, 2).k == 2
    assert validate_instance(p4, 5).k == 5
    with pytest.raises(InstanceError, match="minimum"):
        validate_instance(p4, 1)
    with pytest.raises(GraphError):
        validate_instance(Graph(3, ((1, 2),)), 2)


@given(connected_graphs(max_n=9))
def test_adjacency_matches_direct_definition(g):
    pairs = adjacent_pairs(g)
    for x in range(1, g.m + 1):
        for y in range(1, g.m + 1):
            if x == y:
                continue
            share = bool(set(g.edge(x)) & set(g.edge(y)))
            assert ((min(x, y), max(x, y)) in pairs) == share
    assert all(x < y for x, y in pairs)


@given(connected_graphs(max_n=9))
def test_adjacency_count_is_sum_of_degree_pairs(g):
    deg = {v: 0 for v in range(1, g.n + 1)}
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    assert len(adjacent_pairs(g)) == sum(d * (d - 1) // 2 for d in deg.values())


@given(connected_graphs(max_n=9))
def test_serialize_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g
