"""The shipped library: sources, the catalog and its equational suite.

Each catalog entry pairs a definition with a tag naming the closure
property it exhibits and an executable property.  A property receives the
function under test as ``f(normals, safes) -> NestedSet`` together with
the arguments, and returns whether the defining equation holds there.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Callable, Sequence

from .. import nested as ns
from ..checker import check
from ..nested import EMPTY, NestedSet
from ..syntax import PcsfDef, PcsfProgram, parse

ZERO = ns.numeral(0)
ONE = ns.numeral(1)
TWO = ns.numeral(2)


def source(name: str = "stdlib.pcsf") -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


@cache
def stdlib() -> PcsfProgram:
    """The checked standard library (pcsf profile)."""
    return check(parse(source("stdlib.pcsf")))


@cache
def prime_prelude() -> PcsfProgram:
    """String helpers for the pcsf-prime profile."""
    return check(parse(source("prime_prelude.pcsf"), profile="pcsf-prime"))


# -- references ---------------------------------------------------------------

Args = Sequence[NestedSet]
F = Callable[[Args, Args], NestedSet]
Property = Callable[[F, Args, Args], bool]


def _chi(b: bool) -> NestedSet:
    return ONE if b else ZERO


def _succ(a: NestedSet) -> NestedSet:
    return ns.union2(a, ns.single(a))


def _apply(b: NestedSet, c: NestedSet) -> NestedSet:
    # pairs <c, d> in b, read off as {{c}, {c, d}}
    out = []
    for p in b:
        for d in ns.union(p):
            if p == ns.kpair(c, d):
                out.append(d)
    return ns.union(NestedSet(out))


def _restrict(x: NestedSet, a: NestedSet) -> NestedSet:
    return NestedSet(ns.kpair(z, _apply(a, z)) for z in x)


def _image(x: NestedSet, a: NestedSet) -> NestedSet:
    return ns.union(NestedSet(_apply(a, z) for z in x))


def _pred(a: NestedSet) -> NestedSet:
    return ns.union(a) if 1 <= len(a) <= 2 else EMPTY


def _other(w: NestedSet, j: NestedSet) -> NestedSet:
    return ns.union(ns.diff(w, ns.single(j)))


def _frec_h(x: NestedSet, r: NestedSet) -> NestedSet:
    return _succ(_image(x, r))


def _value(expected: Callable[..., NestedSet]) -> Property:
    """Property: f equals the reference on the same arguments."""

    def prop(f: F, normals: Args, safes: Args) -> bool:
        return f(normals, safes) == expected(*normals, *safes)

    return prop


def _g_equation(h: Callable[..., NestedSet]) -> Property:
    """G(u, x, ys / as) = h(u, ys / as) if u in x, else the union of G over u."""

    def prop(f: F, normals: Args, safes: Args) -> bool:
        u, x, *ys = normals
        if ns.member(u, x):
            want = h(u, *ys, *safes)
        else:
            want = ns.union(NestedSet(f([z, x, *ys], safes) for z in u))
        return f(normals, safes) == want

    return prop


def _tc_property(f: F, normals: Args, safes: Args) -> bool:
    (x,) = normals
    t = f(normals, safes)
    return ns.is_transitive(t) and all(ns.member(e, t) for e in x) and t == ns.tc(x)


def _rank_property(f: F, normals: Args, safes: Args) -> bool:
    (x,) = normals
    r = f(normals, safes)
    return ns.is_transitive(r) and r == ns.numeral(ns.rank(x))


def _closure_with(x: NestedSet) -> list[NestedSet]:
    return list(ns.tc(x)) + [x]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    tag: str
    prop: Property
    definition: PcsfDef


_TABLE: dict[str, tuple[str, Property]] = {
    "pair2": ("initial", _value(ns.pair)),
    "single": ("helper", _value(ns.single)),
    "finunion": ("helper", _value(ns.union2)),
    "succ_set": ("helper", _value(_succ)),
    "kpair": ("helper", _value(ns.kpair)),
    "is_empty": ("helper", _value(lambda a: _chi(a == EMPTY))),
    "mem": ("bounded-exists", _value(lambda c, d: _chi(ns.member(c, d)))),
    "diff": ("difference", _value(ns.diff)),
    "subset": ("helper", _value(lambda a, b: _chi(all(ns.member(e, b) for e in a)))),
    "not": ("boolean-closure", _value(lambda p: _chi(not ns.member(EMPTY, p)))),
    "or": ("boolean-closure", _value(ns.union2)),
    "and": ("boolean-closure", _value(lambda p, q: q if ns.member(EMPTY, p) else ZERO)),
    "truthy": ("boolean-closure", _value(lambda a: _chi(a != EMPTY))),
    "eq": ("helper", _value(lambda a, b: _chi(a == b))),
    "ite_rel": ("conditional-by-relation", _value(lambda r, g, h: g if ns.member(EMPTY, r) else h)),
    "meets": ("bounded-exists", _value(lambda c, d: _chi(any(ns.member(b, d) for b in c)))),
    "apply": ("application", _value(_apply)),
    "tc": ("closure-and-rank", _tc_property),
    "rank_succ": ("closure-and-rank", _value(lambda x: ns.numeral(ns.rank(x) + 1))),
    "rank": ("closure-and-rank", _rank_property),
    "tagged": ("union-valued-recursion", _value(lambda x, a: NestedSet(ns.kpair(z, a) for z in _closure_with(x)))),
    "bunion_G": ("bounded-union", _g_equation(ns.kpair)),
    "bunion": ("bounded-union", _value(lambda x, a: ns.union(NestedSet(ns.kpair(z, a) for z in x)))),
    "gunion_h": ("guarded-union", _value(lambda z, a: ns.tc(z) if ns.member(z, a) else EMPTY)),
    "gunion_G": ("guarded-union", _g_equation(lambda z, a: ns.tc(z) if ns.member(z, a) else EMPTY)),
    "gunion": ("guarded-union", _value(lambda x, a: ns.union(NestedSet(ns.tc(z) for z in x if ns.member(z, a))))),
    "gimage_h": ("guarded-image", _value(lambda z, a: ns.single(ns.tc(z)) if ns.member(z, a) else EMPTY)),
    "gimage_G": ("guarded-image", _g_equation(lambda z, a: ns.single(ns.tc(z)) if ns.member(z, a) else EMPTY)),
    "gimage": ("guarded-image", _value(lambda x, a: NestedSet(ns.tc(z) for z in x if ns.member(z, a)))),
    "restrict_G": ("restriction-and-image", _g_equation(lambda z, a: ns.single(ns.kpair(z, _apply(a, z))))),
    "restrict": ("restriction-and-image", _value(_restrict)),
    "image_G": ("restriction-and-image", _g_equation(lambda z, a: _apply(a, z))),
    "image": ("restriction-and-image", _value(_image)),
    "frec_h": ("function-recursion", _value(_frec_h)),
    "kset_G": ("function-recursion", _g_equation(lambda w, u: ns.single(ns.kpair(w, _frec_h(w, _restrict(w, u)))))),
    "kset": ("function-recursion", _value(lambda x, u: NestedSet(ns.kpair(z, _frec_h(z, _restrict(z, u))) for z in x))),
    "k": ("function-recursion", _value(lambda x: NestedSet(ns.kpair(z, ns.numeral(ns.rank(z) + 1)) for z in ns.tc(x)))),
    "frec": ("function-recursion", _value(lambda x: ns.numeral(ns.rank(x) + 1))),
    "uchoice_h": ("unique-choice", _value(lambda y, x: y if ns.member(x, y) else EMPTY)),
    "uchoice_G": ("unique-choice", _g_equation(lambda u, x: u if ns.member(x, u) else EMPTY)),
    "uchoice": ("unique-choice", _value(lambda x, z: ns.union(NestedSet(y for y in z if ns.member(x, y))))),
    "row_G": ("product", _g_equation(lambda v, u: ns.single(ns.kpair(u, v)))),
    "row": ("product", _value(lambda u, y: NestedSet(ns.kpair(u, v) for v in y))),
    "product_G": ("product", _g_equation(lambda w, y: NestedSet(ns.kpair(w, v) for v in y))),
    "product": ("product", _value(lambda x, y: NestedSet(ns.kpair(u, v) for u in x for v in y))),
    "S0": ("string-helper", _value(lambda a: ns.kpair(ONE, a))),
    "S1": ("string-helper", _value(lambda a: ns.kpair(TWO, a))),
    "pred_h": ("string-helper", _value(lambda b, a: NestedSet(c for c in a if a == ns.pair(b, c)))),
    "pred_g": ("string-helper", _value(lambda a: NestedSet(b for b in a if any(a == ns.pair(b, c) for c in a)))),
    "pred": ("string-helper", _value(_pred)),
    "Pred": ("string-helper", _value(lambda a: ns.diff(_pred(_pred(a)), TWO))),
    "ParityCond": ("string-helper", _value(lambda a, b, c: b if ns.member(ns.single(TWO), a) else c)),
    "other": ("string-helper", _value(_other)),
    "kp_test": ("string-helper", _value(lambda w, j: _chi(w == ns.kpair(j, _other(ns.union(w), j))))),
    "two_test": ("string-helper", _value(lambda w, j: _chi(w == ns.pair(j, _other(w, j))))),
}


@cache
def catalog() -> dict[str, CatalogEntry]:
    prog = stdlib()
    missing = set(prog.names()) ^ set(_TABLE)
    if missing:
        raise AssertionError(f"catalog and sources disagree on {sorted(missing)}")
    return {d.name: CatalogEntry(d.name, _TABLE[d.name][0], _TABLE[d.name][1], d) for d in prog}


def equational_suite() -> list[tuple[str, Property]]:
    return [(e.name, e.prop) for e in catalog().values()]
