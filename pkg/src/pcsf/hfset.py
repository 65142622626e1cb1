"""Hereditarily finite sets as a maximally shared node store.

Every set lives in a :class:`Store` as an integer id.  Interning is keyed
on the extensional member set, so the store is fully collapsed by
construction: two ids are equal exactly when the sets are equal.

The second half of the module works on explicit, possibly uncollapsed
DAGs ``(V, E, r)`` with numeric labels: validation, bisimilarity,
rank-stratified collapse, joining, and the intensional max-node choice.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

SetNode = int


class StoreCapacityError(RuntimeError):
    """The store refused to intern more nodes than its capacity."""


class DagError(ValueError):
    """An explicit DAG violates the rooted-DAG conditions.

    ``kind`` is one of ``"empty"``, ``"dangling-edge"``, ``"root"``,
    ``"multiple-roots"``, ``"cycle"``, ``"edge-order"``, ``"unreachable"``
    or ``"singleton"``; ``"syntax"`` for unreadable DAG text.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class Store:
    """Append-only store of interned hereditarily finite sets.

    Reads of existing nodes are safe to share; interning must be
    serialized by the caller.
    """

    def __init__(self, max_nodes: int = 10**6):
        self.max_nodes = max_nodes
        self._members: list[frozenset[int]] = []
        self._rank: list[int] = []
        self._index: dict[frozenset[int], int] = {}
        self._sorted: dict[int, tuple[int, ...]] = {}
        self._tc: dict[int, int] = {}
        self._numerals: list[int] = []
        self.empty = self.intern(())

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and 0 <= x < len(self._members)

    # -- construction -------------------------------------------------

    def intern(self, children: Iterable[SetNode]) -> SetNode:
        members = children if type(children) is frozenset else frozenset(children)
        node = self._index.get(members)
        if node is not None:
            return node
        n = len(self._members)
        if members and (min(members) < 0 or max(members) >= n):
            raise KeyError(f"child ids {sorted(members)} not all stored")
        if n >= self.max_nodes:
            raise StoreCapacityError(f"store capacity {self.max_nodes} exhausted")
        rank = self._rank
        self._members.append(members)
        self._rank.append(max(rank[c] for c in members) + 1 if members else 0)
        self._index[members] = n
        return n

    def find(self, children: Iterable[SetNode]) -> SetNode | None:
        """Id of the set with these members if already stored; never interns."""
        return self._index.get(frozenset(children))

    def singleton(self, a: SetNode) -> SetNode:
        return self.intern((a,))

    def pair(self, a: SetNode, b: SetNode) -> SetNode:
        return self.intern((a, b))

    def kpair(self, a: SetNode, b: SetNode) -> SetNode:
        """Kuratowski pair {{a},{a,b}}."""
        return self.intern((self.intern((a,)), self.intern((a, b))))

    def numeral(self, n: int) -> SetNode:
        """Von Neumann numeral n = {0, ..., n-1}."""
        nums = self._numerals
        if not nums:
            nums.append(self.empty)
        while len(nums) <= n:
            nums.append(self.intern(nums))
        return nums[n]

    def finite_union(self, *xs: SetNode) -> SetNode:
        return self.intern(frozenset().union(*(self._members[x] for x in xs)))

    # -- observers ----------------------------------------------------

    def members(self, x: SetNode) -> frozenset[int]:
        return self._members[x]

    def card(self, x: SetNode) -> int:
        return len(self._members[x])

    def children(self, x: SetNode) -> tuple[int, ...]:
        """Members of ``x`` in ascending canonical order."""
        kids = self._sorted.get(x)
        if kids is None:
            # sort bottom-up so comparisons only ever read cached child lists
            done = self._sorted
            for v in self._postorder_unsorted(x):
                done[v] = tuple(sorted(self._members[v], key=self._sort_key))
            kids = done[x]
        return kids

    def _postorder_unsorted(self, x: SetNode) -> list[int]:
        ms, done = self._members, self._sorted
        out: list[int] = []
        seen = {x}
        stack: list[tuple[int, Iterator[int]]] = [(x, iter(ms[x]))]
        while stack:
            node, it = stack[-1]
            for c in it:
                if c not in seen and c not in done:
                    seen.add(c)
                    stack.append((c, iter(ms[c])))
                    break
            else:
                stack.pop()
                out.append(node)
        return out

    def rank(self, x: SetNode) -> int:
        return self._rank[x]

    def member(self, x: SetNode, s: SetNode) -> bool:
        return x in self._members[s]

    def union_of(self, x: SetNode) -> SetNode:
        ms = self._members
        return self.intern(frozenset().union(*(ms[c] for c in ms[x])))

    def difference(self, a: SetNode, b: SetNode) -> SetNode:
        return self.intern(self._members[a] - self._members[b])

    def reachable(self, x: SetNode) -> set[int]:
        """All nodes reachable from ``x``, ``x`` included."""
        ms = self._members
        seen = {x}
        stack = [x]
        while stack:
            for c in ms[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def tc_size(self, x: SetNode) -> int:
        """card(TC(x)); reachable count minus one since nothing is duplicated."""
        size = self._tc.get(x)
        if size is None:
            size = len(self.reachable(x)) - 1
            self._tc[x] = size
        return size

    def postorder(self, x: SetNode) -> list[int]:
        """Nodes reachable from ``x`` with every node after its members."""
        ms = self._members
        out: list[int] = []
        seen = {x}
        stack: list[tuple[int, Iterator[int]]] = [(x, iter(ms[x]))]
        while stack:
            node, it = stack[-1]
            for c in it:
                if c not in seen:
                    seen.add(c)
                    stack.append((c, iter(ms[c])))
                    break
            else:
                stack.pop()
                out.append(node)
        return out

    # -- canonical order ----------------------------------------------

    def compare(self, x: SetNode, y: SetNode) -> int:
        """Three-way comparison under the canonical order.

        Rank first, then cardinality, then the descending member
        sequences compared lexicographically.  Since ids are canonical the
        first differing pair of members decides, so the descent is a loop.
        """
        while x != y:
            rx, ry = self._rank[x], self._rank[y]
            if rx != ry:
                return -1 if rx < ry else 1
            cx, cy = len(self._members[x]), len(self._members[y])
            if cx != cy:
                return -1 if cx < cy else 1
            for a, b in zip(reversed(self.children(x)), reversed(self.children(y))):
                if a != b:
                    x, y = a, b
                    break
        return 0

    def _sort_key(self, x: SetNode):
        return (self._rank[x], len(self._members[x]), _Tie(self, x))

    def sort(self, nodes: Iterable[SetNode]) -> list[int]:
        return sorted(nodes, key=self._sort_key)

    # -- explicit DAG bridge ------------------------------------------

    def import_dag(self, g: "ExplicitDag") -> SetNode:
        """Intern ``set(g)``; bisimilar vertices land on the same id."""
        g.validate()
        succ = g.successors()
        ids: dict[int, int] = {}
        for v in sorted(g.vertices, key=g.ranks().__getitem__):
            ids[v] = self.intern(frozenset(ids[c] for c in succ[v]))
        return ids[g.root]

    def export_dag(self, x: SetNode) -> "ExplicitDag":
        """Compact fully collapsed DAG for ``x`` with labels 0..n-1 in canonical order."""
        nodes = self.sort(self.reachable(x))
        label = {v: i for i, v in enumerate(nodes)}
        edges = frozenset(
            (label[v], label[c]) for v in nodes for c in self._members[v]
        )
        return ExplicitDag(frozenset(range(len(nodes))), edges, label[x])


class _Tie:
    __slots__ = ("store", "x")

    def __init__(self, store: Store, x: int):
        self.store = store
        self.x = x

    def __lt__(self, other: "_Tie") -> bool:
        return self.store.compare(self.x, other.x) < 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Tie) and self.x == other.x


_default: Store | None = None


def default_store() -> Store:
    global _default
    if _default is None:
        _default = Store()
    return _default


# ---------------------------------------------------------------------------
# Explicit DAGs


@dataclass(frozen=True)
class ExplicitDag:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    root: int

    @classmethod
    def from_successors(cls, succ: Mapping[int, Iterable[int]], root: int) -> "ExplicitDag":
        edges = frozenset((a, b) for a, bs in succ.items() for b in bs)
        vertices = frozenset(succ) | {b for _, b in edges} | {root}
        return cls(vertices, edges, root)

    def successors(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            out[a].add(b)
        return {v: frozenset(s) for v, s in out.items()}

    def ranks(self) -> dict[int, int]:
        """rk(a) = max{rk(b)+1 : (a,b) in E}, max of nothing being 0.

        Assumes edges decrease labels, so ascending labels are a valid
        evaluation order.
        """
        succ = self.successors()
        rk: dict[int, int] = {}
        for v in sorted(self.vertices):
            rk[v] = max((rk[b] + 1 for b in succ[v]), default=0)
        return rk

    def lengths(self) -> dict[int, int]:
        """Longest path length from the root; the root itself gets 0."""
        ln = {v: 0 for v in self.vertices}
        succ = self.successors()
        for v in sorted(self.vertices, reverse=True):
            for b in succ[v]:
                ln[b] = max(ln[b], ln[v] + 1)
        return ln

    def validate(self) -> None:
        """Raise :class:`DagError` naming the first violated condition."""
        if not self.vertices:
            raise DagError("empty", "vertex set is empty")
        if self.root not in self.vertices:
            raise DagError("root", f"root {self.root} is not a vertex")
        for a, b in sorted(self.edges):
            if a not in self.vertices or b not in self.vertices:
                raise DagError("dangling-edge", f"edge ({a},{b}) leaves the vertex set")
        indeg = {v: 0 for v in self.vertices}
        for _, b in self.edges:
            indeg[b] += 1
        sources = sorted(v for v, d in indeg.items() if d == 0)
        if indeg[self.root]:
            raise DagError("root", f"root {self.root} has an incoming edge")
        if len(sources) > 1:
            raise DagError("multiple-roots", f"vertices of indegree zero: {sources}")
        bad = sorted((a, b) for a, b in self.edges if a <= b)
        if bad:
            if _has_cycle(self):
                raise DagError("cycle", f"edge set contains a cycle through {bad[0]}")
            raise DagError("edge-order", f"edge {bad[0]} does not decrease labels")
        unseen = self.vertices - self.restrict_to(self.root).vertices
        if unseen:
            raise DagError("unreachable", f"vertices {sorted(unseen)} are unreachable from the root")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except DagError:
            return False
        return True

    def restrict_to(self, a: int) -> "ExplicitDag":
        """G|a: the sub-DAG of vertices reachable from ``a``, rooted at ``a``."""
        succ = self.successors()
        seen = {a}
        stack = [a]
        while stack:
            for b in succ[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        edges = frozenset((x, y) for x, y in self.edges if x in seen)
        return ExplicitDag(frozenset(seen), edges, a)

    def is_balanced(self) -> bool:
        """Every label a is at most card(V_{G|a})."""
        return all(a <= len(self.restrict_to(a).vertices) for a in self.vertices)

    def is_fully_collapsed(self) -> bool:
        succ = self.successors()
        return len(set(_collapse_classes(self, succ).values())) == len(self.vertices)


def _has_cycle(g: ExplicitDag) -> bool:
    succ: dict[int, set[int]] = {v: set() for v in g.vertices}
    for a, b in g.edges:
        succ[a].add(b)
    state: dict[int, int] = {}
    for start in g.vertices:
        if start in state:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                s = state.get(w)
                if s == 1:
                    return True
                if s is None:
                    state[w] = 1
                    stack.append((w, iter(succ[w])))
                    break
            else:
                state[v] = 2
                stack.pop()
    return False


def bisimilar(g: ExplicitDag, h: ExplicitDag) -> bool:
    """Decide set(g) == set(h) by the pairwise recursive test.

    Each vertex pair is tested at most once, so the work is bounded by
    card(V_g) * card(V_h) tests.
    """
    g.validate()
    h.validate()
    sg, sh = g.successors(), h.successors()
    rg, rh = g.ranks(), h.ranks()

    @functools.cache
    def sim(a: int, b: int) -> bool:
        if rg[a] != rh[b]:
            return False
        return all(any(sim(x, y) for y in sh[b]) for x in sg[a]) and all(
            any(sim(x, y) for x in sg[a]) for y in sh[b]
        )

    # descend children first so the recursion depth stays shallow
    for a in sorted(g.vertices):
        for b in sorted(h.vertices):
            if rg[a] == rh[b]:
                sim(a, b)
    return sim(g.root, h.root)


def _collapse_classes(g: ExplicitDag, succ: Mapping[int, frozenset[int]]) -> dict[int, int]:
    """Map each vertex to the least label of its bisimilarity class.

    Rank stratum by stratum, vertices whose already-redirected successor
    sets coincide are bisimilar, and all of them point at the minimum.
    """
    rk = g.ranks()
    rep: dict[int, int] = {}
    by_rank: dict[int, list[int]] = {}
    for v in g.vertices:
        by_rank.setdefault(rk[v], []).append(v)
    for i in sorted(by_rank):
        classes: dict[frozenset[int], int] = {}
        for v in sorted(by_rank[i]):
            key = frozenset(rep[b] for b in succ[v])
            rep[v] = classes.setdefault(key, v)
    return rep


def collapse(g: ExplicitDag) -> ExplicitDag:
    """Fully collapsed DAG bisimilar to ``g``, keeping the least label per class."""
    g.validate()
    succ = g.successors()
    rep = _collapse_classes(g, succ)
    keep = frozenset(rep.values())
    edges = frozenset((rep[a], rep[b]) for a, b in g.edges if a in keep)
    return ExplicitDag(keep, edges, rep[g.root])


def cantor(i: int, j: int) -> int:
    return (i + j) * (i + j + 1) // 2 + j


def join(dags: Iterable[ExplicitDag]) -> ExplicitDag:
    """Fully collapsed DAG whose set is {set(G_i)}.

    Each input is relabelled into {i} x V_i through the Cantor pairing,
    which preserves the edge order, and a fresh root points at the old
    roots.
    """
    dags = list(dags)
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    roots = []
    for i, g in enumerate(dags):
        g.validate()
        vertices.update(cantor(i, a) for a in g.vertices)
        edges.update((cantor(i, a), cantor(i, b)) for a, b in g.edges)
        roots.append(cantor(i, g.root))
    r = max(roots, default=-1) + 1
    vertices.add(r)
    edges.update((r, s) for s in roots)
    return collapse(ExplicitDag(frozenset(vertices), frozenset(edges), r))


def choose_max(g: ExplicitDag) -> ExplicitDag:
    """G|a for the largest non-root label a; an element of set(g), chosen by code."""
    g.validate()
    rest = g.vertices - {g.root}
    if not rest:
        raise DagError("singleton", "the DAG has no vertex besides its root")
    return g.restrict_to(max(rest))


# ---------------------------------------------------------------------------
# Text and DOT formats

_LINE = re.compile(r"^\s*(\d+)\s*:\s*((?:\d+\s*)*)$")
_ROOT = re.compile(r"^\s*root\s*:\s*(\d+)\s*$")


def parse_dag(text: str) -> ExplicitDag:
    """Read ``<id>: <child> ...`` lines closed by ``root: <id>``."""
    succ: dict[int, list[int]] = {}
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ROOT.match(line)
        if m:
            if root is not None:
                raise DagError("syntax", f"line {lineno}: second root line")
            root = int(m.group(1))
            continue
        m = _LINE.match(line)
        if not m:
            raise DagError("syntax", f"line {lineno}: cannot parse {raw!r}")
        v = int(m.group(1))
        if v in succ:
            raise DagError("syntax", f"line {lineno}: vertex {v} listed twice")
        succ[v] = [int(t) for t in m.group(2).split()]
    if root is None:
        raise DagError("syntax", "missing 'root: <id>' line")
    return ExplicitDag.from_successors(succ, root)


def format_dag(g: ExplicitDag) -> str:
    succ = g.successors()
    lines = []
    for v in sorted(g.vertices):
        kids = " ".join(str(b) for b in sorted(succ[v], reverse=True))
        lines.append(f"{v}: {kids}".rstrip())
    lines.append(f"root: {g.root}")
    return "\n".join(lines) + "\n"


def to_dot(g: ExplicitDag, name: str = "G") -> str:
    out = [f"digraph {name} {{", "  rankdir=TB;"]
    for v in sorted(g.vertices, reverse=True):
        shape = "doublecircle" if v == g.root else "circle"
        out.append(f'  n{v} [label="{v}", shape={shape}];')
    for a, b in sorted(g.edges, reverse=True):
        out.append(f"  n{a} -> n{b};")
    out.append("}")
    return "\n".join(out) + "\n"
