"""Native replacements for a few library definitions.

``apply``, ``restrict`` and ``image`` are interpreted as separations and
bounded recursions whose cost grows with the whole table they read.  The
native versions index a table once per node and answer each lookup from
the index.  They are only substituted for a definition that is
structurally identical to the shipped one, callees included, so a user
program that redefines ``apply`` keeps its own meaning.
"""
from __future__ import annotations

from typing import Callable

from .hfset import SetNode, Store
from .syntax import Call, PcsfDef, PcsfProgram, subterms

Native = Callable[[tuple, tuple], SetNode]


class _Tables:
    """Per-store index of relations: b -> {c: [d, ...]} for each <c, d> in b."""

    def __init__(self, store: Store):
        self.store = store
        self._index: dict[SetNode, dict[SetNode, list[SetNode]]] = {}

    def pairs(self, b: SetNode) -> dict[SetNode, list[SetNode]]:
        idx = self._index.get(b)
        if idx is None:
            ms = self.store.members
            idx = {}
            for p in ms(b):
                parts = _kpair_parts(ms, p)
                if parts is not None:
                    idx.setdefault(parts[0], []).append(parts[1])
            self._index[b] = idx
        return idx

    def apply(self, b: SetNode, c: SetNode) -> SetNode:
        ds = self.pairs(b).get(c)
        if not ds:
            return self.store.empty
        ms = self.store.members
        return self.store.intern(frozenset().union(*(ms(d) for d in ds)))

    def restrict(self, normals: tuple, safes: tuple) -> SetNode:
        (x,), (a,) = normals, safes
        store = self.store
        return store.intern([store.kpair(z, self.apply(a, z)) for z in store.members(x)])

    def image(self, normals: tuple, safes: tuple) -> SetNode:
        (x,), (a,) = normals, safes
        ms = self.store.members
        return self.store.intern(frozenset().union(*(ms(self.apply(a, z)) for z in ms(x))))


def _kpair_parts(ms, p: SetNode) -> tuple[SetNode, SetNode] | None:
    kids = ms(p)
    if len(kids) == 1:
        (q,) = kids
        inner = ms(q)
        if len(inner) == 1:
            (c,) = inner
            return c, c
        return None
    if len(kids) == 2:
        s, t = kids
        if len(ms(t)) == 1:
            s, t = t, s
        single, double = ms(s), ms(t)
        if len(single) == 1 and len(double) == 2 and single <= double:
            (c,) = single
            (d,) = double - single
            return c, d
    return None


NAMES = ("apply", "restrict", "image")


def bind(store: Store, names=NAMES) -> dict[str, Native]:
    """Natives for ``names`` over ``store``, sharing one relation index."""
    t = _Tables(store)
    table = {
        "apply": lambda normals, safes: t.apply(safes[0], safes[1]),
        "restrict": t.restrict,
        "image": t.image,
    }
    return {n: table[n] for n in names}


def _closure(program: PcsfProgram, name: str) -> dict[str, PcsfDef]:
    out: dict[str, PcsfDef] = {}
    todo = [name]
    while todo:
        n = todo.pop()
        if n in out:
            continue
        d = program.by_name.get(n)
        if d is None:
            return {}
        out[n] = d
        todo.extend(t.name for t in subterms(d.body) if isinstance(t, Call) and not t.builtin)
    return out


def matching(program: PcsfProgram) -> tuple[str, ...]:
    """The natives whose definitions in ``program`` coincide with the library's."""
    from .stdlib import stdlib

    lib = stdlib()
    if program.profile != lib.profile:
        return ()
    return tuple(n for n in NAMES if (mine := _closure(program, n)) and mine == _closure(lib, n))
