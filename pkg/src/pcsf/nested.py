"""Nested-set values for the reference evaluator.

A :class:`NestedSet` is a plain tree: a frozenset of nested sets, listed in
the canonical order by :meth:`NestedSet.sorted`.  Nothing is interned or
shared on purpose, so it is an independent reading of the set semantics,
and only meant for small sets.
"""
from __future__ import annotations

from typing import Iterable

from .hfset import SetNode, Store


class NestedSet(frozenset):
    """Nested set value; build with :meth:`of`.

    Iteration order is arbitrary; :meth:`sorted` lists members in the
    canonical order.
    """

    def __new__(cls, items: Iterable["NestedSet"] = ()):
        return super().__new__(cls, items)

    @classmethod
    def of(cls, *items: "NestedSet") -> "NestedSet":
        return cls(items)

    def sorted(self) -> list["NestedSet"]:
        return sorted(self, key=order_key)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.sorted())) + "}"

    def as_lists(self) -> list:
        return [c.as_lists() for c in self.sorted()]


def order_key(n: NestedSet) -> tuple:
    k = n.__dict__.get("_k")
    if k is None:
        kids = sorted(order_key(c) for c in n)
        rank = max((c[0] + 1 for c in kids), default=0)
        k = n.__dict__["_k"] = (rank, len(n), tuple(reversed(kids)))
    return k


EMPTY = NestedSet()


def rank(n: NestedSet) -> int:
    return order_key(n)[0]


def member(x: NestedSet, s: NestedSet) -> bool:
    return x in s


def union(n: NestedSet) -> NestedSet:
    return NestedSet(e for c in n for e in c)


def union2(a: NestedSet, b: NestedSet) -> NestedSet:
    return NestedSet(a | b)


def diff(a: NestedSet, b: NestedSet) -> NestedSet:
    return NestedSet(a - b)


def pair(a: NestedSet, b: NestedSet) -> NestedSet:
    return NestedSet((a, b))


def single(a: NestedSet) -> NestedSet:
    return NestedSet((a,))


def kpair(a: NestedSet, b: NestedSet) -> NestedSet:
    return NestedSet((NestedSet((a,)), NestedSet((a, b))))


def numeral(k: int) -> NestedSet:
    out = EMPTY
    for _ in range(k):
        out = NestedSet(out | {out})
    return out


def tc(n: NestedSet) -> NestedSet:
    """Least transitive superset, by fixpoint iteration."""
    cur = set(n)
    while True:
        nxt = cur | {e for c in cur for e in c}
        if nxt == cur:
            return NestedSet(cur)
        cur = nxt


def card_tc(n: NestedSet) -> int:
    return len(tc(n))


def is_transitive(n: NestedSet) -> bool:
    return all(e in n for c in n for e in c)


def to_nested(store: Store, x: SetNode) -> NestedSet:
    memo: dict[int, NestedSet] = {}
    for v in store.postorder(x):
        memo[v] = NestedSet(memo[c] for c in store.members(v))
    return memo[x]


def from_nested(store: Store, n: NestedSet) -> SetNode:
    return store.intern(from_nested(store, c) for c in n)


def universe(max_rank: int) -> list[NestedSet]:
    """Every hereditarily finite set of rank at most ``max_rank``."""
    level = [EMPTY]  # sets of rank < 1
    for _ in range(max_rank):
        nxt = []
        for mask in range(1 << len(level)):
            nxt.append(NestedSet(level[i] for i in range(len(level)) if mask >> i & 1))
        level = nxt
    return sorted(level, key=order_key)
