"""Safe recursion on binary strings and its translation into set functions.

``.bc`` sources::

    bdef    name(s1, ... / a1, ...) := term
    bdefrec name(s, x1, ... / a1, ...) := base term | step0 term | step1 term

Terms are ``eps``, ``"0110"b``, variables, ``@rec`` (in steps only), the
initial functions ``s0(/t)``, ``s1(/t)``, ``p(/t)``, ``C(/a, b, c)`` and
calls ``f(normals / safes)`` of earlier definitions.  Strings grow at the
right end: ``s0(/"1"b)`` is ``"10"``, and recursion peels the last symbol,
``f(s i, x / a) = h_i(s, x / a, f(s, x / a))``.

:func:`compile` turns a program into pcsf definitions over string codes
(see :mod:`pcsf.literals` for the encoding).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from importlib import resources
from typing import Union

from .checker import (
    ArityMismatch, RecInNormalPosition, RecOutsideRecursion, RecursionWithoutNormal,
    SafeInNormalPosition, check,
)
from .lexer import TokenStream
from .literals import NotInImage, decode_nu, encode_nu  # noqa: F401  (re-exported)
from .syntax import (
    Call, DuplicateDefinition, PcsfProgram, UnknownIdentifier, parse, subterms,
)

Loc = tuple[int, int]

BC_BUILTINS = {"s0": 1, "s1": 1, "p": 1, "C": 3}
_KEYWORDS = frozenset({"bdef", "bdefrec", "base", "step0", "step1", "eps"})


@dataclass(frozen=True)
class BVar:
    name: str
    kind: str  # "normal" | "safe"
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BRec:
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BConst:
    bits: str
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BCall:
    name: str
    normals: tuple["BTerm", ...]
    safes: tuple["BTerm", ...]
    builtin: bool
    loc: Loc = field(default=(0, 0), compare=False)


BTerm = Union[BVar, BRec, BConst, BCall]


@dataclass(frozen=True)
class BDef:
    name: str
    normals: tuple[str, ...]
    safes: tuple[str, ...]
    body: BTerm | None = None
    base: BTerm | None = None
    step0: BTerm | None = None
    step1: BTerm | None = None
    loc: Loc = field(default=(0, 0), compare=False)

    @property
    def recursive(self) -> bool:
        return self.body is None


@dataclass
class BProgram:
    defs: list[BDef]

    def __post_init__(self):
        self.by_name = {d.name: d for d in self.defs}

    def __getitem__(self, name: str) -> BDef:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownIdentifier(f"no string function named {name!r}") from None

    def names(self) -> list[str]:
        return [d.name for d in self.defs]


def _subterms(t: BTerm):
    yield t
    if isinstance(t, BCall):
        for a in t.normals + t.safes:
            yield from _subterms(a)


# -- parsing ---------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.ts = TokenStream(source)
        self.known: dict[str, BDef] = {}

    def program(self) -> BProgram:
        defs = []
        while self.ts.peek().kind != "eof":
            d = self.definition()
            _check_def(d, self.known)
            self.known[d.name] = d
            defs.append(d)
        return BProgram(defs)

    def ident(self):
        tok = self.ts.expect_ident()
        if tok.text in _KEYWORDS:
            raise self.ts.error(f"keyword {tok.text!r} cannot be used as a name", tok)
        return tok

    def params(self, stop: str) -> list[str]:
        out: list[str] = []
        if not self.ts.at(stop):
            out.append(self.ident().text)
            while self.ts.accept(","):
                out.append(self.ident().text)
        return out

    def definition(self) -> BDef:
        ts = self.ts
        tok = ts.peek()
        if not (ts.accept("bdef") or ts.accept("bdefrec")):
            raise ts.error(f"expected 'bdef' or 'bdefrec', found {tok.text or 'end of input'!r}")
        name_tok = self.ident()
        name = name_tok.text
        loc = (name_tok.line, name_tok.col)
        if name in self.known or name in BC_BUILTINS:
            raise DuplicateDefinition(f"{name!r} is already defined", loc)
        ts.expect("(")
        normals = self.params("/")
        ts.expect("/")
        safes = self.params(")")
        ts.expect(")")
        if len(set(normals + safes)) != len(normals + safes):
            raise DuplicateDefinition("repeated parameter name", loc, name)
        ts.expect(":=")
        self.scope = {**{p: "normal" for p in normals}, **{p: "safe" for p in safes}}
        self.defname = name
        if tok.text == "bdef":
            return BDef(name, tuple(normals), tuple(safes), body=self.term(), loc=loc)
        ts.expect("base")
        base = self.term()
        ts.expect("|")
        ts.expect("step0")
        step0 = self.term()
        ts.expect("|")
        ts.expect("step1")
        step1 = self.term()
        return BDef(name, tuple(normals), tuple(safes), None, base, step0, step1, loc)

    def terms(self, stop: str) -> list[BTerm]:
        out: list[BTerm] = []
        if not self.ts.at(stop):
            out.append(self.term())
            while self.ts.accept(","):
                out.append(self.term())
        return out

    def term(self) -> BTerm:
        ts = self.ts
        tok = ts.peek()
        loc = (tok.line, tok.col)
        if tok.kind == "rec":
            ts.next()
            return BRec(loc)
        if tok.kind == "str":
            ts.next()
            return BConst(tok.text[1:-2], loc)
        if ts.accept("eps"):
            return BConst("", loc)
        if tok.kind != "ident":
            raise ts.error(f"expected a term, found {tok.text or 'end of input'!r}")
        name = self.ident().text
        if not ts.accept("("):
            kind = self.scope.get(name)
            if kind is None:
                raise UnknownIdentifier(f"{name!r} is not a parameter", loc, self.defname)
            return BVar(name, kind, loc)
        builtin = name in BC_BUILTINS
        if not builtin and name not in self.known:
            raise UnknownIdentifier(f"call of undefined function {name!r}", loc, self.defname)
        normals = self.terms("/")
        ts.expect("/")
        safes = self.terms(")")
        ts.expect(")")
        return BCall(name, tuple(normals), tuple(safes), builtin, loc)


def _check_term(t: BTerm, d: BDef, known: dict[str, BDef], rec_ok: bool) -> None:
    for s in _subterms(t):
        if isinstance(s, BRec) and not rec_ok:
            raise RecOutsideRecursion("@rec outside a step term", s.loc, d.name)
        if not isinstance(s, BCall):
            continue
        want = (0, BC_BUILTINS[s.name]) if s.builtin else (len(known[s.name].normals), len(known[s.name].safes))
        if (len(s.normals), len(s.safes)) != want:
            raise ArityMismatch(f"{s.name} takes {want[0]}/{want[1]} arguments", s.loc, d.name)
        for a in s.normals:
            for v in _subterms(a):
                if isinstance(v, BVar) and v.kind == "safe":
                    raise SafeInNormalPosition(f"safe variable {v.name!r} in a normal argument of {s.name}", v.loc, d.name)
                if isinstance(v, BRec):
                    raise RecInNormalPosition(f"@rec in a normal argument of {s.name}", v.loc, d.name)


def _check_def(d: BDef, known: dict[str, BDef]) -> None:
    if not d.recursive:
        _check_term(d.body, d, known, rec_ok=False)
        return
    if not d.normals:
        raise RecursionWithoutNormal("bdefrec needs a normal parameter", d.loc, d.name)
    rest = d.normals[1:]
    # the base case does not see the recursion parameter
    for v in _subterms(d.base):
        if isinstance(v, BVar) and v.name == d.normals[0]:
            raise UnknownIdentifier(f"{v.name!r} is not in scope in the base case", v.loc, d.name)
    _check_term(d.base, BDef(d.name, rest, d.safes, body=d.base, loc=d.loc), known, rec_ok=False)
    _check_term(d.step0, d, known, rec_ok=True)
    _check_term(d.step1, d, known, rec_ok=True)


def parse_bc(source: str) -> BProgram:
    return _Parser(source).program()


# -- string semantics ------------------------------------------------------------


def _eval_term(t: BTerm, prog: BProgram, env: dict[str, str], rec: str | None) -> str:
    if isinstance(t, BConst):
        return t.bits
    if isinstance(t, BVar):
        return env[t.name]
    if isinstance(t, BRec):
        return rec
    safes = [_eval_term(a, prog, env, rec) for a in t.safes]
    if t.builtin:
        if t.name == "s0":
            return safes[0] + "0"
        if t.name == "s1":
            return safes[0] + "1"
        if t.name == "p":
            return safes[0][:-1]
        a, b, c = safes
        return b if a.endswith("1") else c
    normals = [_eval_term(a, prog, env, rec) for a in t.normals]
    return _call_b(prog, prog[t.name], normals, safes)


def _call_b(prog: BProgram, d: BDef, normals: list[str], safes: list[str]) -> str:
    env = dict(zip(d.normals, normals))
    env.update(zip(d.safes, safes))
    if not d.recursive:
        return _eval_term(d.body, prog, env, None)
    w = normals[0]
    base_env = {k: v for k, v in env.items() if k != d.normals[0]}
    val = _eval_term(d.base, prog, base_env, None)
    for k in range(1, len(w) + 1):
        env[d.normals[0]] = w[: k - 1]
        step = d.step1 if w[k - 1] == "1" else d.step0
        val = _eval_term(step, prog, env, val)
    return val


def eval_b(prog: BProgram, name: str, normals: list[str], safes: list[str]) -> str:
    d = prog[name]
    if (len(normals), len(safes)) != (len(d.normals), len(d.safes)):
        raise ArityMismatch(f"{name} takes {len(d.normals)}/{len(d.safes)} arguments")
    for s in list(normals) + list(safes):
        if set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
    return _call_b(prog, d, list(normals), list(safes))


# -- compilation -----------------------------------------------------------------

_REC_PARAM = "rec_"
_WORD_PARAM = "w_"
_INITIAL = {"s0": "S0", "s1": "S1", "p": "Pred", "C": "ParityCond"}
_HELPERS = ("S0", "S1", "Pred", "ParityCond", "eq", "is_empty", "ite_rel", "or", "kp_test", "two_test", "other")


def _emit(t: BTerm) -> str:
    if isinstance(t, BConst):
        return f'"{t.bits}"b' if t.bits else "#0"
    if isinstance(t, BVar):
        return t.name
    if isinstance(t, BRec):
        return _REC_PARAM
    name = _INITIAL[t.name] if t.builtin else t.name
    normals = ", ".join(map(_emit, t.normals))
    safes = ", ".join(map(_emit, t.safes))
    return f"{name}({normals} / {safes})" if normals else f"{name}(/{safes})"


def _params(normals, safes) -> str:
    return f"{', '.join(normals)} / {', '.join(safes)}"


def compile_def_source(d: BDef) -> str:
    """pcsf source for one string definition."""
    if not d.recursive:
        return f"def {d.name}({_params(d.normals, d.safes)}) := {_emit(d.body)}\n"
    s, xs, a_s = d.normals[0], list(d.normals[1:]), list(d.safes)
    for p in d.normals + d.safes:
        if p in (_REC_PARAM, _WORD_PARAM):
            raise DuplicateDefinition(f"parameter name {p!r} is reserved by the compiler", d.loc, d.name)
    n, g, h0, h1 = d.name, f"{d.name}__g", f"{d.name}__h0", f"{d.name}__h1"
    call_g = f"{g}({_params(xs, a_s)})"

    def call_h(h: str, y: str, rec: str) -> str:
        return f"{h}({', '.join([y] + xs)} / {', '.join(a_s + [rec])})"

    lines = [
        f"def {g}({_params(xs, a_s)}) := {_emit(d.base)}",
        f"def {h0}({_params([s] + xs, a_s + [_REC_PARAM])}) := {_emit(d.step0)}",
        f"def {h1}({_params([s] + xs, a_s + [_REC_PARAM])}) := {_emit(d.step1)}",
        # case split on the shape of the recursion argument w:
        #   <1,0>       -> h0(0, x / a, g(x / a))        the code of "0"
        #   0           -> g(x / a)
        #   2           -> 0                               {1,0} is not a string code
        #   <i+1, y>    -> union of the values below       = value at {i+1, y}
        #   {i+1, y}    -> h_i(y, x / a, value at y)
        #   otherwise   -> 0
        f"defrec {n}({_params([_WORD_PARAM] + xs, a_s)}) :=",
        f"  ite_rel(/eq(/{_WORD_PARAM}, <#1, #0>), {call_h(h0, '#0', call_g)},",
        f"  ite_rel(/is_empty(/{_WORD_PARAM}), {call_g},",
        f"  ite_rel(/eq(/{_WORD_PARAM}, #2), #0,",
        f"  ite_rel(/or(/kp_test(/{_WORD_PARAM}, #1), kp_test(/{_WORD_PARAM}, #2)), union(/@rec),",
        f"  ite_rel(/two_test(/{_WORD_PARAM}, #1), {call_h(h0, f'other(/{_WORD_PARAM}, #1)', 'union(/@rec)')},",
        f"  ite_rel(/two_test(/{_WORD_PARAM}, #2), {call_h(h1, f'other(/{_WORD_PARAM}, #2)', 'union(/@rec)')}, #0))))))",
    ]
    return "\n".join(lines) + "\n"


def _needed(prog: BProgram, name: str | None) -> list[BDef]:
    if name is None:
        return list(prog.defs)
    want = {name}
    stack = [prog[name]]
    while stack:
        d = stack.pop()
        terms = [d.body] if not d.recursive else [d.base, d.step0, d.step1]
        for t in terms:
            for s in _subterms(t):
                if isinstance(s, BCall) and not s.builtin and s.name not in want:
                    want.add(s.name)
                    stack.append(prog[s.name])
    return [d for d in prog.defs if d.name in want]


def _closure(p: PcsfProgram, roots) -> PcsfProgram:
    want = set(roots)
    stack = list(roots)
    while stack:
        for s in subterms(p[stack.pop()].body):
            if isinstance(s, Call) and not s.builtin and s.name not in want:
                want.add(s.name)
                stack.append(s.name)
    return PcsfProgram([d for d in p.defs if d.name in want], p.profile)


@cache
def prelude(profile: str = "pcsf") -> PcsfProgram:
    """The helper definitions compiled string functions rely on."""
    from .stdlib import prime_prelude, stdlib

    if profile == "pcsf":
        return _closure(stdlib(), _HELPERS)
    if profile == "pcsf-prime":
        return _closure(prime_prelude(), _HELPERS)
    raise ValueError(f"unknown profile {profile!r}")


def compile_source(prog: BProgram, name: str | None = None) -> str:
    return "".join(compile_def_source(d) for d in _needed(prog, name))


def compile(prog: BProgram, name: str | None = None, profile: str = "pcsf") -> PcsfProgram:
    """Checked pcsf program with F(nu(s) / nu(t)) = nu(f(s / t)).

    With ``name`` only that definition and its dependencies are emitted.
    """
    pre = prelude(profile)
    taken = set(pre.names())
    for d in _needed(prog, name):
        for n in (d.name, f"{d.name}__g", f"{d.name}__h0", f"{d.name}__h1"):
            if n in taken:
                raise DuplicateDefinition(f"{n!r} clashes with a helper of the {profile} prelude", d.loc, d.name)
    return check(parse(compile_source(prog, name), profile, prelude=pre))


# -- shipped corpus --------------------------------------------------------------


def corpus_source() -> str:
    return resources.files("pcsf.bc_corpus").joinpath("strings.bc").read_text(encoding="utf-8")


@cache
def corpus() -> BProgram:
    return parse_bc(corpus_source())
