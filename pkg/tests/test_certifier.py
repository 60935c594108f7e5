import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchsat.certifier import (DecodeError, MatchingCertificate, check_model,
                                decode, reconstruct_l, verify)
from matchsat.encoder import encode
from matchsat.graph import Instance, path_graph
from matchsat.solver import solve

MATCHED_FIRST = ({1, 3, 7, 9}, (1, 1, 2, 2, 2, 2, 3, 3, 4, 4))
UNMATCHED_PREFIX = ({3, 7, 9, 10}, (0, 0, 1, 1, 1, 1, 2, 2, 3, 4))


@pytest.mark.parametrize("matched, table", [MATCHED_FIRST, UNMATCHED_PREFIX])
def test_reconstruct_examples(matched, table):
    assert reconstruct_l(10, matched) == table


def test_reconstruct_empty():
    assert reconstruct_l(5, set()) == (0, 0, 0, 0, 0)


@given(st.integers(1, 30), st.data())
def test_reconstruct_properties(m, data):
    matched = data.draw(st.sets(st.integers(1, m)))
    t = reconstruct_l(m, matched)
    assert len(t) == m
    assert t[0] in (0, 1)
    assert all(b - a in (0, 1) for a, b in zip(t, t[1:]))
    assert t[-1] == len(matched)


def test_decode_p4():
    cnf = encode(Instance(path_graph(4), 2))
    r = solve(cnf)
    cert = decode(cnf, r.assignment)
    assert cert.matched == {1, 3}
    assert cert.index_table == (1, 1, 2)
    assert verify(cert, path_graph(4)) == []


def test_decode_reports_offending_edge():
    cnf = encode(Instance(path_graph(4), 2))
    asn = dict(solve(cnf).assignment)
    vm = cnf.varmap
    for i in vm.domain(2):
        asn[vm.l_var(i, 2)] = False
    with pytest.raises(DecodeError) as info:
        decode(cnf, asn)
    assert info.value.kind == "no-index" and info.value.edge == 2
    for i in vm.domain(2):
        asn[vm.l_var(i, 2)] = True
    with pytest.raises(DecodeError) as info:
        decode(cnf, asn)
    assert info.value.kind == "duplicate-index" and info.value.edge == 2


def test_golden_row_certificate_is_valid():
    g = path_graph(11)  # edge x joins x and x+1, so F is a matching
    matched, table = MATCHED_FIRST
    cert = MatchingCertificate(frozenset(matched), table, 4)
    assert verify(cert, g) == []
    cnf = encode(Instance(g, 4))
    asn = {x: x in matched for x in range(1, 11)}
    for v, i, x in cnf.varmap.l_vars():
        asn[v] = table[x - 1] == i
    assert check_model(cnf, asn) == []
    assert decode(cnf, asn) == cert


def test_unmatched_prefix_table_uses_index_zero():
    matched, table = UNMATCHED_PREFIX
    g = path_graph(11)
    probs = verify(MatchingCertificate(frozenset(matched), table, 4), g)
    # edges 9 and 10 share vertex 10 on this path; that is the only problem
    assert len(probs) == 1 and probs[0].startswith("BFC")


def test_verify_flags_adjacent_edges():
    probs = verify(MatchingCertificate(frozenset({1, 2}), (1, 2, 2), 2),
                   path_graph(4))
    assert any(p.startswith("BFC") for p in probs)


def test_verify_flags_too_few():
    probs = verify(MatchingCertificate(frozenset({1}), (1, 1, 1), 2),
                   path_graph(4))
    assert any(p.startswith("OFC") for p in probs)
    assert any("last edge index" in p for p in probs)


def test_verify_flags_inconsistent_table():
    probs = verify(MatchingCertificate(frozenset({1, 3}), (1, 2, 2), 2),
                   path_graph(4))
    assert any("step" in p for p in probs)
    assert any("running count" in p for p in probs)
    probs = verify(MatchingCertificate(frozenset({1, 3}), (1, 2), 2),
                   path_graph(4))
    assert any("entries" in p for p in probs)


def test_certificate_text_round_trip():
    cert = MatchingCertificate(frozenset({1, 3, 7, 9}), MATCHED_FIRST[1], 4)
    text = cert.to_text()
    assert text.splitlines() == ["matched: 1 3 7 9",
                                 "index: 1 1 2 2 2 2 3 3 4 4"]
    assert MatchingCertificate.from_text(text, 4) == cert


def test_valid_matchings_verify_on_random_paths():
    rng = random.Random(9)
    for _ in range(50):
        m = rng.randint(2, 20)
        matched = {x for x in range(1, m + 1, 2) if rng.random() < 0.6}
        cert = MatchingCertificate(frozenset(matched),
                                   reconstruct_l(m, matched), len(matched))
        probs = verify(cert, path_graph(m + 1))
        assert probs == [] or len(matched) < 2 and not probs
