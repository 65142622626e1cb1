"""Reference semantics on nested sets.

A direct reading of the schemes: the recursion equation is unfolded as
written, ``f(x, y/a) = h(x, y/a, {f(z, y/a) : z in x})``, with no sharing
and no tables, and the builtins are computed on :class:`NestedSet` trees.
Nothing here touches the node store.
"""
from __future__ import annotations

from typing import Sequence

from . import nested as ns
from .checker import ArityMismatch
from .literals import to_nested
from .nested import NestedSet
from .syntax import Call, Lit, PcsfProgram, Rec, Sep, Term, Var


def _pred(a: NestedSet) -> NestedSet:
    return ns.union(a) if 1 <= len(a) <= 2 else ns.EMPTY


_BUILTINS = {
    "null": lambda: ns.EMPTY,
    "pair": ns.pair,
    "union": ns.union,
    "cond_in": lambda a, b, c, d: a if ns.member(c, d) else b,
    "diff": ns.diff,
    "single": ns.single,
    "finunion": ns.union2,
    "pred": _pred,
}


class Naive:
    def __init__(self, program: PcsfProgram):
        self.program = program
        self._lits: dict[int, NestedSet] = {}

    def call(self, name: str, normals: Sequence[NestedSet], safes: Sequence[NestedSet]) -> NestedSet:
        d = self.program[name]
        if (len(normals), len(safes)) != (len(d.normals), len(d.safes)):
            raise ArityMismatch(f"{name} takes {len(d.normals)} normal and {len(d.safes)} safe arguments")
        env = dict(zip(d.normals, normals))
        env.update(zip(d.safes, safes))
        rec = None
        if d.recursive:
            x, rest = normals[0], list(normals[1:])
            rec = NestedSet(self.call(name, [z] + rest, safes) for z in x)
        return self.term(d.body, env, rec)

    def term(self, t: Term, env: dict, rec: NestedSet | None) -> NestedSet:
        kind = type(t)
        if kind is Call:
            normals = [self.term(a, env, rec) for a in t.normals]
            safes = [self.term(a, env, rec) for a in t.safes]
            if t.builtin:
                return _BUILTINS[t.name](*safes)
            return self.call(t.name, normals, safes)
        if kind is Var:
            return env[t.name]
        if kind is Rec:
            return rec
        if kind is Lit:
            v = self._lits.get(id(t))
            if v is None:
                v = self._lits[id(t)] = to_nested(t.value)
            return v
        if kind is Sep:
            dom = self.term(t.domain, env, rec)
            keep = []
            for b in dom:
                inner = {**env, t.var: b}
                if self.term(t.body, inner, rec) != ns.EMPTY:
                    keep.append(b)
            return NestedSet(keep)
        raise TypeError(f"not a term: {t!r}")


def eval_naive(program: PcsfProgram, name: str, normals: Sequence[NestedSet], safes: Sequence[NestedSet]) -> NestedSet:
    return Naive(program).call(name, list(normals), list(safes))
