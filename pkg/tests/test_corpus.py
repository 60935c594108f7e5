import json
from math import comb

import pytest

from matchsat.corpus import (FLAG_SWEEP, Checker, CorpusSpec, CorpusSummary,
                             connected_graphs, corpus_graphs, edge_orderings,
                             run_corpus, shrink, write_report)
from matchsat.encoder import EncodeFlags
from matchsat.graph import Instance, complete_graph, path_graph
from matchsat.oracle import max_matching


def connected_labeled_count(n):
    c = {1: 1}
    for j in range(2, n + 1):
        c[j] = 2 ** comb(j, 2) - sum(comb(j - 1, i - 1) * c[i] * 2 ** comb(j - i, 2)
                                     for i in range(1, j))
    return c[n]


@pytest.mark.parametrize("n", range(2, 6))
def test_generator_counts(n):
    graphs = list(connected_graphs(n))
    assert len(graphs) == connected_labeled_count(n)
    keys = {frozenset(g.edges) for g in graphs}
    assert len(keys) == len(graphs)
    for g in graphs:
        g.validate(require_connected=True)
        assert g.n == n


def test_corpus_graphs_spans_sizes():
    assert len(corpus_graphs(4)) == 1 + 4 + 38


def test_edge_orderings():
    orders = list(edge_orderings(path_graph(4)))
    assert len(orders) == 6
    assert len({h.edges for h in orders}) == 6


def test_shrink_reaches_local_minimum():
    # synthetic failure: "contains a triangle"; the minimum is K3 itself
    def has_triangle(inst):
        es = {frozenset(e) for e in inst.graph.edges}
        n = inst.graph.n
        return any({frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= es
                   for a in range(1, n + 1) for b in range(a + 1, n + 1)
                   for c in range(b + 1, n + 1))
    out = shrink(Instance(complete_graph(5), 4), has_triangle)
    assert out.graph.n == 3 and out.graph.m == 3 and out.k == 2


def test_small_corpus_clean():
    s = run_corpus(CorpusSpec(max_n=4, flag_variants=FLAG_SWEEP,
                              orderings_max_n=3))
    assert s.clean and not s.discrepancies
    assert s.instances == s.agree_sat + s.agree_unsat
    assert s.certificates_checked == s.agree_sat


@pytest.mark.parametrize("family, witness", [
    ("η5", ((1, 2),)),
    ("BFC", ((1, 2), (1, 3))),
    ("η12", ((1, 2), (1, 3))),
])
def test_ablation_is_caught_and_shrunk(family, witness):
    s = run_corpus(CorpusSpec(max_n=4), checker=Checker(drop_families=[family]))
    assert s.disagree > 0 and not s.clean
    d = s.discrepancies[0]
    assert d.sat_answer == "SAT" and d.oracle_answer is False
    assert d.shrunk.graph.edges == witness and d.shrunk.k == 2
    assert max_matching(d.shrunk.graph).max_size < d.shrunk.k


def test_single_families_beyond_the_core_are_redundant_at_small_n():
    s = run_corpus(CorpusSpec(max_n=4),
                   checker=Checker(drop_families=["η8", "η9", "η22", "η23"]))
    assert s.disagree == 0


def test_no_redundant_equivalence():
    base = run_corpus(CorpusSpec(max_n=5))
    lean = run_corpus(CorpusSpec(
        max_n=5, flag_variants=(EncodeFlags(include_redundant=False),)))
    assert base.clean and lean.clean
    assert (base.agree_sat, base.agree_unsat) == (lean.agree_sat, lean.agree_unsat)


def test_workers_give_identical_summary():
    spec = CorpusSpec(max_n=4, flag_variants=FLAG_SWEEP[:2])
    one = run_corpus(spec, workers=1).to_dict()
    two = run_corpus(spec, workers=2).to_dict()
    assert one == two


def test_budget_is_counted_not_misreported():
    s = run_corpus(CorpusSpec(max_n=4, budget=1))
    assert s.budget_exhausted > 0 and s.disagree == 0
    assert not s.clean


def test_report_json_round_trip(tmp_path):
    s = run_corpus(CorpusSpec(max_n=3), checker=Checker(drop_families=["η5"]))
    path = tmp_path / "r.json"
    write_report(s, path)
    loaded = json.loads(path.read_text(encoding="utf-8"))
    assert loaded == json.loads(json.dumps(s.to_dict()))
    assert loaded["discrepancies"][0]["shrunk_k"] == 2


def test_summary_merge():
    a = CorpusSummary(graphs=1, instances=2, agree_sat=2)
    b = CorpusSummary(graphs=1, instances=1, agree_unsat=1,
                      flag_differences=["x"])
    a.merge(b)
    assert (a.graphs, a.instances, a.agree_sat, a.agree_unsat) == (2, 3, 2, 1)
    assert not a.clean
