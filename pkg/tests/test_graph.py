import random

import pytest
from hypothesis import given, settings, strategies as st

from kgrec.graph import Graph, GraphFrozenError
from kgrec.terms import Iri, Literal, Triple

from conftest import random_graph, random_term_pool


def iri(n):
    return Iri(f"http://example.org/{n}")


T1 = Triple(iri("s"), iri("p"), Literal("x"))


def linear_scan(graph, s=None, p=None, o=None):
    """The match oracle: filter all triples positionally."""
    return {
        t for t in graph
        if (s is None or t.subject == s)
        and (p is None or t.predicate == p)
        and (o is None or t.object == o)
    }


def test_insert_is_idempotent():
    g = Graph()
    assert g.add(T1) is True
    assert g.add(T1) is False
    assert len(g) == 1


def test_insert_into_empty():
    g = Graph()
    g.add(T1)
    assert len(g) == 1
    assert T1 in g


def test_match_empty_graph():
    assert Graph().match() == []


def test_fully_ground_match():
    g = Graph([T1])
    assert g.match(T1.subject, T1.predicate, T1.object) == [T1]
    assert g.match(T1.subject, T1.predicate, Literal("y")) == []


def test_freeze_blocks_writes():
    g = Graph([T1])
    g.freeze()
    with pytest.raises(GraphFrozenError):
        g.add(Triple(iri("s2"), iri("p"), Literal("z")))
    assert g.match(None, iri("p"), None) == [T1]


def test_thousand_random_inserts_all_indexes_agree():
    rng = random.Random(1)
    pool = random_term_pool(rng, iris=12, literals=8)
    g = random_graph(rng, pool, max_triples=1000)
    # exercise each index path against the scan oracle
    for s, p, o in [
        (pool[0], None, None),
        (None, pool[1], None),
        (None, None, pool[2]),
        (pool[0], pool[1], None),
        (None, pool[1], pool[2]),
        (pool[0], None, pool[2]),
        (None, None, None),
    ]:
        assert set(g.match(s, p, o)) == linear_scan(g, s, p, o)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**30), st.integers(0, 500))
def test_match_equals_linear_scan_oracle(seed, size):
    rng = random.Random(seed)
    pool = random_term_pool(rng)
    g = random_graph(rng, pool, max_triples=min(size, 500))
    for _ in range(10):
        s = rng.choice(pool) if rng.random() < 0.5 else None
        p = rng.choice(pool) if rng.random() < 0.5 else None
        o = rng.choice(pool) if rng.random() < 0.5 else None
        if isinstance(s, Literal):
            s = None
        if p is not None and not isinstance(p, Iri):
            p = None
        assert set(g.match(s, p, o)) == linear_scan(g, s, p, o)


def test_match_deterministic_for_fixed_graph():
    rng = random.Random(7)
    pool = random_term_pool(rng)
    g = random_graph(rng, pool, max_triples=300)
    first = g.match(None, None, None)
    assert g.match(None, None, None) == first


def test_count_matches_len_of_match():
    rng = random.Random(3)
    pool = random_term_pool(rng)
    g = random_graph(rng, pool, max_triples=200)
    for s in (None, pool[0]):
        for p in (None, pool[1]):
            for o in (None, pool[2]):
                assert g.count(s, p, o) == len(g.match(s, p, o))
