import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packkernel.graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    ParseError,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
    complement_hypergraph,
    parse_instance,
    serialize_instance,
)
from packkernel.oracles import max_clique, max_independent_set

from _gen import random_hypergraph, rng


def test_parse_hypergraph():
    h = parse_instance("hg 3 6 2\ne 0 1 2\ne 3 4 5\n")
    assert isinstance(h, Hypergraph)
    assert (h.d, h.n, h.m) == (3, 6, 2)


def test_parse_weighted_with_dangling_edge():
    g = parse_instance("wg 4 3 3\ne 0 1 1\ne 1 2 2\ne 3 3 1\n")
    assert isinstance(g, WeightedPathGraph)
    assert g.dangling == {3: 1}
    assert g.weight(1, 2) == 2 and g.adj[3] == {}


def test_parse_vertex_out_of_range_names_line():
    with pytest.raises(ParseError) as err:
        parse_instance("hg 3 6 1\ne 0 1 9\n")
    assert err.value.line == 2


@pytest.mark.parametrize(
    "text",
    [
        "hg 3 6\n",
        "hg 3 6 1\ne 0 1\n",
        "hg 3 6 2\ne 0 1 2\ne 2 1 0\n",
        "g 3 1\ne 0 x\n",
        "g 3 2\ne 0 1\n",
        "wg 3 1 2\ne 0 1 5\n",
        "zz 1 2\n",
        "",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_serialize_empty_and_canonical_order():
    assert serialize_instance(Hypergraph(3, 0)) == "hg 3 0 0\n"
    h = Hypergraph(3, 6, ((2, 1, 0), (5, 4, 3)))
    lines = serialize_instance(h).splitlines()
    assert lines[1:] == ["e 0 1 2", "e 3 4 5"]


def test_comments_ignored():
    g = parse_instance("# a comment\ng 3 1\n# another\ne 2 0\n")
    assert g == SimpleGraph(3, ((0, 2),))


def test_round_trip_every_kind():
    r = rng(1)
    h = random_hypergraph(r, 3, 9, 8)
    items = [
        h,
        PartitionedHypergraph(Hypergraph(2, 4, ((0, 1), (2, 3))), (0, 1, 0, 1)),
        SimpleGraph(5, ((0, 1), (3, 4))),
        WeightedPathGraph(4, {(0, 1): 2, (2, 2): 1}, 3),
        CNF(3, ((1, -2, 3), (-1, -1, -1))),
        MCBInstance(SimpleGraph(4, ((0, 2),)), ((0,), (1,)), ((2,), (3,))),
    ]
    for x in items:
        text = serialize_instance(x)
        y = parse_instance(text)
        assert y == x
        assert serialize_instance(y) == text


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.integers(d, 9).flatmap(
                lambda n: st.tuples(st.just(n), st.lists(st.sets(st.integers(0, n - 1), min_size=d, max_size=d), max_size=12))
            ),
        )
    )
)
def test_round_trip_property(args):
    d, (n, edges) = args
    h = Hypergraph(d, n, tuple(tuple(e) for e in edges))
    assert parse_instance(serialize_instance(h)) == h


def test_construction_canonicalizes():
    a = Hypergraph(3, 6, ((5, 4, 3), (2, 1, 0)))
    b = Hypergraph(3, 6, ((0, 1, 2), (3, 4, 5)))
    assert a == b
    assert SimpleGraph(3, ((2, 1),)).edges == ((1, 2),)


def test_invalid_values_rejected():
    with pytest.raises(ValueError):
        Hypergraph(3, 4, ((0, 0, 1),))
    with pytest.raises(ValueError):
        SimpleGraph(2, ((1, 1),))
    with pytest.raises(ValueError):
        WeightedPathGraph(2, {(0, 1): 3}, 2)
    with pytest.raises(ValueError):
        PartitionedHypergraph(Hypergraph(2, 2, ((0, 1),)), (0, 0))
    with pytest.raises(ValueError):
        CNF(2, ((1, 2, 3),))
    with pytest.raises(ValueError):
        MCBInstance(SimpleGraph(2, ((0, 1),)), ((0, 1),), ((),))


def test_hpattern_attributes():
    assert HPattern.clique(3).chromatic_number == 3
    assert HPattern.path(3).chromatic_number == 2
    assert HPattern.path(3).vertex_count == 4
    assert HPattern.star(3).chromatic_number == 2
    assert HPattern(SimpleGraph(5, tuple((i, (i + 1) % 5) for i in range(5)))).chromatic_number == 3
    assert not HPattern(SimpleGraph(2)).is_connected
    with pytest.raises(ValueError):
        HPattern(SimpleGraph(2), anchor=2)


def test_complement_examples():
    c = complement_hypergraph(Hypergraph(2, 3, ((0, 1),)))
    assert c.edges == ((0, 2), (1, 2))
    full = Hypergraph(3, 5, tuple(itertools.combinations(range(5), 3)))
    assert complement_hypergraph(full).m == 0


def test_complement_cap():
    with pytest.raises(ValueError):
        complement_hypergraph(Hypergraph(3, 300), cap=10**6)


@pytest.mark.parametrize("seed", range(10))
def test_complement_involution_and_clique_identity(seed):
    r = rng(seed)
    d = 2 + seed % 2
    n = int(r.integers(d, 9))
    h = random_hypergraph(r, d, n, int(r.integers(0, 14)))
    c = complement_hypergraph(h)
    assert complement_hypergraph(c) == h
    assert h.m + c.m == comb(n, d)
    assert max_clique(h) == max_independent_set(c)
