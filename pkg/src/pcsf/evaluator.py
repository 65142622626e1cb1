"""Evaluation of checked programs over the node store.

Terms are compiled once into Python closures over an environment tuple
``(normals, safes, bound, rec)``.  Normal arguments are evaluated in an
environment whose safe slots are withheld, so a flow violation that slipped
past the checker fails loudly instead of computing something.

A ``defrec`` call on ``x`` walks the members of TC(x) and x itself in
post-order, applying the step body once per node; the value at a node is
built from the already computed values at its members, so the step runs
exactly tc_size(x) + 1 times for a fresh call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .hfset import SetNode, Store
from .intrinsics import bind, matching
from .literals import to_node
from .syntax import Call, Lit, PcsfError, PcsfProgram, Rec, Sep, Term, Var


class EvalError(PcsfError):
    code = "EvalError"


class StratumViolation(EvalError):
    code = "StratumViolation"


class ResourceLimit(EvalError):
    code = "ResourceLimit"


@dataclass
class EvalCost:
    h_applications: int = 0
    nodes_created: int = 0
    memo_hits: int = 0
    max_recursion_rank: int = 0
    steps: int = 0
    applications: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "h_applications": self.h_applications,
            "nodes_created": self.nodes_created,
            "memo_hits": self.memo_hits,
            "max_recursion_rank": self.max_recursion_rank,
            "steps": self.steps,
            "applications": dict(sorted(self.applications.items())),
        }


Env = tuple  # (normals, safes | None, bound, rec | None)
Code = Callable[[Env], SetNode]


def _withheld(env: Env) -> Env:
    return (env[0], None, (), None)


class Evaluator:
    """Compiled program bound to one store.

    ``persist_memo`` keeps recursion tables across :meth:`eval` calls
    (keys carry the whole parameter tuple, so reuse is sound).  With
    ``memo=False`` no table is shared even between calls inside one
    evaluation; every recursive call recomputes its own walk.

    ``intrinsics=True`` swaps in the native ``apply``/``restrict``/``image``
    wherever the program's definitions are the library's own; a sequence
    of names forces exactly those.
    """

    def __init__(
        self,
        program: PcsfProgram,
        store: Store | None = None,
        *,
        memo: bool = True,
        persist_memo: bool = False,
        max_steps: int = 10**7,
        intrinsics: Sequence[str] | bool = False,
    ):
        if not program.checked:
            from .checker import check

            program = check(program)
        self.program = program
        self.store = store if store is not None else Store()
        self.memo_enabled = memo
        self.persist_memo = persist_memo
        self.max_steps = max_steps
        self.memo: dict[tuple, SetNode] = {}
        self.cost = EvalCost()
        self._top: str | None = None
        self._bodies: dict[str, Code] = {}
        self._callers: dict[str, Callable] = {}
        if intrinsics is True:
            intrinsics = matching(program)
        self._natives = bind(self.store, tuple(intrinsics)) if intrinsics else {}
        for d in program.defs:
            self._bodies[d.name] = self._compile(d.body, d, [])
            self._callers[d.name] = self._make_caller(d)

    # -- public ---------------------------------------------------------

    def eval(self, name: str, normals: Sequence[SetNode], safes: Sequence[SetNode]) -> tuple[SetNode, EvalCost]:
        d = self.program[name]
        normals, safes = tuple(normals), tuple(safes)
        if (len(normals), len(safes)) != (len(d.normals), len(d.safes)):
            from .checker import ArityMismatch

            raise ArityMismatch(
                f"{name} takes {len(d.normals)} normal and {len(d.safes)} safe arguments, "
                f"got {len(normals)}/{len(safes)}"
            )
        for a in normals + safes:
            if a not in self.store:
                raise EvalError(f"argument {a!r} is not a node of this store")
        if not self.persist_memo:
            self.memo.clear()
        self.cost = EvalCost()
        self._top = name
        before = len(self.store)
        result = self._callers[name](normals, safes)
        self.cost.nodes_created = len(self.store) - before
        return result, self.cost

    def __call__(self, name: str, normals: Sequence[SetNode] = (), safes: Sequence[SetNode] = ()) -> SetNode:
        return self.eval(name, normals, safes)[0]

    # -- compilation ----------------------------------------------------

    def _tick(self) -> None:
        c = self.cost
        c.steps += 1
        if c.steps > self.max_steps:
            raise ResourceLimit(f"evaluation exceeded {self.max_steps} steps")

    def _compile(self, t: Term, d, bound: list[str]) -> Code:
        store = self.store
        if isinstance(t, Var):
            if t.kind == "bound":
                i = len(bound) - 1 - bound[::-1].index(t.name)
                return lambda env: env[2][i]
            if t.kind == "normal":
                i = d.normals.index(t.name)
                return lambda env: env[0][i]
            i = d.safes.index(t.name)

            def safe_var(env):
                s = env[1]
                if s is None:
                    raise StratumViolation(f"safe variable {t.name!r} read while computing a normal argument", t.loc, d.name)
                return s[i]

            return safe_var
        if isinstance(t, Rec):
            def rec(env):
                r = env[3]
                if r is None:
                    raise StratumViolation("@rec read outside recursion or in a normal argument", t.loc, d.name)
                return r

            return rec
        if isinstance(t, Lit):
            node = to_node(store, t.value)
            return lambda env: node
        if isinstance(t, Sep):
            dom = self._compile(t.domain, d, bound)
            body = self._compile(t.body, d, bound + [t.var])
            members, empty, intern, tick = store.members, store.empty, store.intern, self._tick

            def sep(env):
                tick()
                normals, safes, bvals, r = env
                keep = [b for b in members(dom(env)) if body((normals, safes, bvals + (b,), r)) != empty]
                return intern(keep)

            return sep
        return self._compile_call(t, d, bound)

    def _compile_call(self, t: Call, d, bound: list[str]) -> Code:
        store = self.store
        # normal arguments cannot see enclosing separation variables
        ncode = [self._compile(a, d, []) for a in t.normals]
        scode = [self._compile(a, d, bound) for a in t.safes]
        tick = self._tick
        if t.builtin:
            op = self._builtin(t.name)
            if len(scode) == 1:
                (a0,) = scode

                def call1(env):
                    tick()
                    return op(a0(env))

                return call1
            if len(scode) == 2:
                a0, a1 = scode

                def call2(env):
                    tick()
                    return op(a0(env), a1(env))

                return call2

            def calln(env):
                tick()
                return op(*[c(env) for c in scode])

            return calln
        callers = self._callers
        name = t.name

        def call(env):
            tick()
            wenv = _withheld(env)
            return callers[name](tuple(c(wenv) for c in ncode), tuple(c(env) for c in scode))

        return call

    def _builtin(self, name: str) -> Callable:
        s = self.store
        members = s.members
        if name == "null":
            return lambda: s.empty
        if name == "pair":
            return s.pair
        if name == "union":
            return s.union_of
        if name == "cond_in":
            return lambda a, b, c, d: a if c in members(d) else b
        if name == "diff":
            return s.difference
        if name == "single":
            return s.singleton
        if name == "finunion":
            return lambda a, b: s.intern(members(a) | members(b))
        if name == "pred":
            return lambda a: s.union_of(a) if 1 <= len(members(a)) <= 2 else s.empty
        raise EvalError(f"unknown builtin {name!r}")

    def _make_caller(self, d) -> Callable:
        native = self._natives.get(d.name)
        if native is not None:
            ev, tick = self, self._tick

            def intrinsic(normals, safes):
                tick()
                apps = ev.cost.applications
                apps[d.name] = apps.get(d.name, 0) + 1
                return native(normals, safes)

            return intrinsic
        body = self._bodies[d.name]
        if not d.recursive:
            return lambda normals, safes: body((normals, safes, (), None))
        store = self.store
        members, rank, intern, postorder = store.members, store.rank, store.intern, store.postorder
        name = d.name

        def recursive(normals, safes):
            x, params = normals[0], normals[1:]
            cost = self.cost
            table = self.memo if self.memo_enabled else {}
            key = (name, params, safes)
            cached = table.get((key, x))
            if cached is not None:
                cost.memo_hits += 1
                return cached
            cost.max_recursion_rank = max(cost.max_recursion_rank, rank(x))
            top = name == self._top
            for z in postorder(x):
                if (key, z) in table:
                    cost.memo_hits += 1
                    continue
                r = intern([table[(key, c)] for c in members(z)])
                table[(key, z)] = body(((z,) + params, safes, (), r))
                cost.applications[name] = cost.applications.get(name, 0) + 1
                if top:
                    cost.h_applications += 1
            return table[(key, x)]

        return recursive


def eval(
    program: PcsfProgram,
    name: str,
    normals: Sequence[SetNode],
    safes: Sequence[SetNode],
    store: Store | None = None,
    **options,
) -> tuple[SetNode, EvalCost]:
    """One-shot evaluation; build an :class:`Evaluator` to amortize compilation."""
    return Evaluator(program, store, **options).eval(name, normals, safes)
