import itertools

import pytest

from pcsf import nested as ns
from pcsf.evaluator import Evaluator
from pcsf.hfset import Store
from pcsf.literals import parse_literal, to_node
from pcsf.nested import EMPTY, NestedSet
from pcsf.oracle import Naive
from pcsf.stdlib import catalog, equational_suite, prime_prelude, source, stdlib

U = ns.universe(3)


def lit(s, text):
    return to_node(s, parse_literal(text))


def test_catalog_covers_sources(lib):
    cat = catalog()
    assert list(cat) == lib.names()
    tags = {e.tag for e in cat.values()}
    for tag in ("difference", "conditional-by-relation", "boolean-closure", "bounded-exists", "application",
                "union-valued-recursion", "bounded-union", "guarded-union", "guarded-image",
                "restriction-and-image", "closure-and-rank", "function-recursion", "unique-choice", "product"):
        assert tag in tags
    for name in ("diff", "ite_rel", "apply", "bunion", "restrict", "image", "tc", "rank", "product",
                 "is_empty", "eq", "subset", "finunion", "succ_set", "S0", "S1", "Pred", "ParityCond"):
        assert name in cat


def test_apply_example(lib):
    s = Store()
    assert Evaluator(lib, s)("apply", [], [lit(s, "{<#0, #1>}"), s.numeral(0)]) == s.numeral(1)


def test_product_example(lib):
    s = Store()
    out = Evaluator(lib, s)("product", [s.numeral(2), s.numeral(1)], [])
    assert out == lit(s, "{<#0, #0>, <#1, #0>}")


def test_restrict_example(lib):
    s = Store()
    out = Evaluator(lib, s)("restrict", [lit(s, "{#0}")], [lit(s, "{<#0, #1>, <#1, #0>}")])
    assert out == lit(s, "{<#0, #1>}")


def test_characteristic_values(lib):
    s = Store()
    ev = Evaluator(lib, s)
    one, zero = s.numeral(1), s.numeral(0)
    assert ev("is_empty", [], [zero]) == one
    assert ev("is_empty", [], [one]) == zero
    assert ev("not", [], [one]) == zero and ev("not", [], [zero]) == one
    assert ev("or", [], [zero, one]) == one and ev("and", [], [one, zero]) == zero


def tuples(d):
    return itertools.product(U, repeat=len(d.normals) + len(d.safes))


@pytest.mark.parametrize("name, prop", equational_suite(), ids=[n for n, _ in equational_suite()])
def test_equational_property_on_universe(lib, name, prop):
    naive = Naive(lib)
    d = lib[name]
    k = len(d.normals)

    def f(normals, safes):
        return naive.call(name, list(normals), list(safes))

    for args in tuples(d):
        assert prop(f, args[:k], args[k:]), (name, args)


def test_tc_and_rank_small_closures(lib):
    s = Store()
    ev = Evaluator(lib, s)
    for x in U + [NestedSet.of(a, b) for a, b in itertools.combinations(U, 2)]:
        if ns.card_tc(x) > 6:
            continue
        node = ns.from_nested(s, x)
        assert ns.to_nested(s, ev("tc", [node], [])) == ns.tc(x)
        assert ev("rank", [node], []) == s.numeral(ns.rank(x))


def test_product_small(lib):
    s = Store()
    ev = Evaluator(lib, s)
    small = [x for x in U if ns.card_tc(x) <= 4]
    for x, y in itertools.product(small, repeat=2):
        got = ns.to_nested(s, ev("product", [ns.from_nested(s, x), ns.from_nested(s, y)], []))
        assert got == NestedSet(ns.kpair(u, v) for u in x for v in y)


def test_item12_table_equation(lib):
    # k(x) = f | TC(x) with f = frec
    s = Store()
    ev = Evaluator(lib, s)
    for x in U:
        node = ns.from_nested(s, x)
        table = ns.to_nested(s, ev("k", [node], []))
        want = NestedSet(ns.kpair(z, ns.to_nested(s, ev("frec", [ns.from_nested(s, z)], []))) for z in ns.tc(x))
        assert table == want


def test_shipped_sources_load():
    assert "defrec tc" in source()
    assert stdlib() is stdlib()
    assert prime_prelude().profile == "pcsf-prime"


def test_prime_prelude_agrees_with_stdlib(lib):
    pre = prime_prelude()
    s = Store()
    a, b = Evaluator(lib, s), Evaluator(pre, s)
    strings = [ns.from_nested(s, x) for x in U]
    for name in ("S0", "S1", "Pred", "ParityCond", "eq", "is_empty", "other", "kp_test", "two_test"):
        if name not in pre:
            continue
        d = pre[name]
        for args in itertools.product(strings, repeat=len(d.safes)):
            # the primed other() is only meant for w minus {j} of one or two members
            if name == "other" and not 1 <= s.card(s.difference(args[0], s.singleton(args[1]))) <= 2:
                continue
            assert a(name, [], list(args)) == b(name, [], list(args)), (name, args)
