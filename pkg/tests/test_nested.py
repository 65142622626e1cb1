import pytest
from hypothesis import given, settings, strategies as st

from pcsf import nested as ns
from pcsf.hfset import Store
from pcsf.nested import EMPTY, NestedSet


def test_universe_sizes_are_enumerated():
    assert [len(ns.universe(r)) for r in range(4)] == [1, 2, 4, 16]
    u = ns.universe(3)
    assert len(set(u)) == len(u)
    assert all(ns.rank(x) <= 3 for x in u)


def test_to_nested_examples():
    s = Store()
    assert ns.to_nested(s, s.empty) == EMPTY
    assert ns.to_nested(s, s.numeral(2)).as_lists() == [[], [[]]]


def test_roundtrip_over_universe():
    s = Store()
    for n in ns.universe(3):
        x = ns.from_nested(s, n)
        assert ns.to_nested(s, x) == n
        assert ns.from_nested(s, ns.to_nested(s, x)) == x


def test_sorted_is_canonical():
    a = NestedSet.of(ns.numeral(2), EMPTY, ns.single(ns.numeral(1)), ns.numeral(1))
    keys = [ns.order_key(c) for c in a.sorted()]
    assert keys == sorted(keys)
    assert a.sorted()[0] == EMPTY
    assert repr(ns.numeral(2)) == "{{}, {{}}}"


def test_basic_operations():
    two, three = ns.numeral(2), ns.numeral(3)
    assert ns.member(two, three)
    assert ns.union(NestedSet.of(two, three)) == three
    assert ns.diff(three, two) == ns.single(two)
    assert ns.pair(EMPTY, EMPTY) == ns.numeral(1)
    assert ns.kpair(EMPTY, EMPTY) == ns.single(ns.single(EMPTY))
    assert ns.tc(ns.single(three)) == NestedSet.of(EMPTY, ns.numeral(1), two, three)
    assert ns.card_tc(three) == 3
    assert ns.is_transitive(three) and not ns.is_transitive(ns.single(ns.single(EMPTY)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 15), max_size=5))
def test_from_nested_matches_store_construction(idx):
    s = Store()
    u = ns.universe(3)
    n = NestedSet(u[i] for i in idx)
    assert ns.from_nested(s, n) == s.intern(ns.from_nested(s, u[i]) for i in idx)


@pytest.mark.parametrize("k", range(6))
def test_numerals(k):
    n = ns.numeral(k)
    assert len(n) == k and ns.rank(n) == k and ns.is_transitive(n)
