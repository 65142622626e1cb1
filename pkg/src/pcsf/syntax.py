"""Abstract syntax and parser for ``.pcsf`` programs.

Grammar::

    program = def*
    def     = ("def" | "defrec") name "(" params "/" params ")" ":=" term
    params  = [ident ("," ident)*]
    term    = ident | "@rec" | literal
            | name "(" [terms] "/" [terms] ")"
            | "sep" ident "in" term ":" term

Variables are resolved while parsing, so every :class:`Var` already knows
whether it is a normal parameter, a safe parameter or a separation-bound
name.  Calls always carry the ``/``; builtins take safe arguments only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .lexer import PcsfSyntaxError, TokenStream
from .literals import Literal, format_literal, parse_literal_from, starts_literal

Loc = tuple[int, int]

# builtin name -> number of safe arguments
BUILTINS = {
    "pcsf": {"null": 0, "pair": 2, "union": 1, "cond_in": 4},
    "pcsf-prime": {"diff": 2, "single": 1, "pred": 1, "finunion": 2, "cond_in": 4, "union": 1},
}
PROFILES = tuple(BUILTINS)
KEYWORDS = frozenset({"def", "defrec", "sep", "in"})


class PcsfError(Exception):
    """Static error in a program; ``code`` names the violated rule."""

    code = "PcsfError"

    def __init__(self, message: str, loc: Loc | None = None, defname: str | None = None):
        where = f"{loc[0]}:{loc[1]}: " if loc else ""
        inside = f"in {defname}: " if defname else ""
        super().__init__(f"{where}{self.code}: {inside}{message}")
        self.loc = loc
        self.defname = defname


class DuplicateDefinition(PcsfError):
    code = "DuplicateDefinition"


class UnknownIdentifier(PcsfError):
    code = "UnknownIdentifier"


@dataclass(frozen=True)
class Var:
    name: str
    kind: str  # "normal" | "safe" | "bound"
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Rec:
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Lit:
    value: Literal
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    normals: tuple["Term", ...]
    safes: tuple["Term", ...]
    builtin: bool
    loc: Loc = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Sep:
    var: str
    domain: "Term"
    body: "Term"
    loc: Loc = field(default=(0, 0), compare=False)


Term = Union[Var, Rec, Lit, Call, Sep]


@dataclass(frozen=True)
class PcsfDef:
    name: str
    normals: tuple[str, ...]
    safes: tuple[str, ...]
    body: Term
    recursive: bool
    loc: Loc = field(default=(0, 0), compare=False)
    # filled by the checker
    stratum: str | None = field(default=None, compare=False)
    prime: bool = field(default=False, compare=False)
    measure: int | None = field(default=None, compare=False)


@dataclass
class PcsfProgram:
    defs: list[PcsfDef]
    profile: str = "pcsf"
    checked: bool = False

    def __post_init__(self):
        self.by_name = {d.name: d for d in self.defs}

    def __getitem__(self, name: str) -> PcsfDef:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownIdentifier(f"no definition named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.by_name

    def __iter__(self) -> Iterator[PcsfDef]:
        return iter(self.defs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PcsfProgram) and self.defs == other.defs and self.profile == other.profile

    def names(self) -> list[str]:
        return [d.name for d in self.defs]


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Call):
        for a in t.normals + t.safes:
            yield from subterms(a)
    elif isinstance(t, Sep):
        yield from subterms(t.domain)
        yield from subterms(t.body)


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, source: str, profile: str, known: dict[str, PcsfDef]):
        if profile not in BUILTINS:
            raise ValueError(f"unknown profile {profile!r}; expected one of {PROFILES}")
        self.ts = TokenStream(source)
        self.builtins = BUILTINS[profile]
        self.known = dict(known)

    def program(self) -> list[PcsfDef]:
        defs = []
        while self.ts.peek().kind != "eof":
            d = self.definition()
            defs.append(d)
            self.known[d.name] = d
        return defs

    def definition(self) -> PcsfDef:
        ts = self.ts
        tok = ts.peek()
        if not (ts.accept("def") or ts.accept("defrec")):
            raise ts.error(f"expected 'def' or 'defrec', found {tok.text or 'end of input'!r}")
        recursive = tok.text == "defrec"
        name_tok = self.name()
        name = name_tok.text
        if name in self.known or name in self.builtins:
            what = "builtin" if name in self.builtins else "definition"
            raise DuplicateDefinition(f"{name!r} is already a {what}", (name_tok.line, name_tok.col))
        ts.expect("(")
        normals = self.params("/")
        ts.expect("/")
        safes = self.params(")")
        ts.expect(")")
        seen: set[str] = set()
        for p in normals + safes:
            if p in seen:
                raise DuplicateDefinition(f"parameter {p!r} repeated", (name_tok.line, name_tok.col), name)
            seen.add(p)
        ts.expect(":=")
        self.scope = {**{p: "normal" for p in normals}, **{p: "safe" for p in safes}}
        self.defname = name
        body = self.term()
        return PcsfDef(name, tuple(normals), tuple(safes), body, recursive, (tok.line, tok.col))

    def name(self):
        tok = self.ts.expect_ident()
        if tok.text in KEYWORDS:
            raise self.ts.error(f"keyword {tok.text!r} cannot be used as a name", tok)
        return tok

    def params(self, stop: str) -> list[str]:
        out: list[str] = []
        if self.ts.at(stop):
            return out
        out.append(self.name().text)
        while self.ts.accept(","):
            out.append(self.name().text)
        return out

    def terms(self, stop: str) -> list[Term]:
        out: list[Term] = []
        if self.ts.at(stop):
            return out
        out.append(self.term())
        while self.ts.accept(","):
            out.append(self.term())
        return out

    def term(self) -> Term:
        ts = self.ts
        tok = ts.peek()
        loc = (tok.line, tok.col)
        if tok.kind == "rec":
            ts.next()
            return Rec(loc)
        if starts_literal(ts):
            return Lit(parse_literal_from(ts), loc)
        if ts.accept("sep"):
            var = self.name().text
            ts.expect("in")
            domain = self.term()
            ts.expect(":")
            saved = self.scope
            self.scope = {**saved, var: "bound"}
            body = self.term()
            self.scope = saved
            return Sep(var, domain, body, loc)
        if tok.kind != "ident":
            raise ts.error(f"expected a term, found {tok.text or 'end of input'!r}")
        name = self.name().text
        if not ts.accept("("):
            kind = self.scope.get(name)
            if kind is None:
                raise UnknownIdentifier(f"{name!r} is not a parameter or bound variable", loc, self.defname)
            return Var(name, kind, loc)
        builtin = name in self.builtins
        if not builtin and name not in self.known:
            raise UnknownIdentifier(f"call of undefined function {name!r}", loc, self.defname)
        normals = self.terms("/")
        ts.expect("/")
        safes = self.terms(")")
        ts.expect(")")
        return Call(name, tuple(normals), tuple(safes), builtin, loc)


def parse(source: str, profile: str = "pcsf", *, prelude: PcsfProgram | None = None) -> PcsfProgram:
    """Parse ``source``; definitions of ``prelude`` come first and are callable."""
    base = list(prelude.defs) if prelude is not None else []
    if prelude is not None and prelude.profile != profile:
        raise ValueError(f"prelude profile {prelude.profile!r} differs from {profile!r}")
    p = _Parser(source, profile, {d.name: d for d in base})
    return PcsfProgram(base + p.program(), profile)


# -- printer ---------------------------------------------------------------


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Rec):
        return "@rec"
    if isinstance(t, Lit):
        return format_literal(t.value)
    if isinstance(t, Sep):
        return f"sep {t.var} in {format_term(t.domain)} : {format_term(t.body)}"
    normals = ", ".join(map(format_term, t.normals))
    safes = ", ".join(map(format_term, t.safes))
    if normals:
        return f"{t.name}({normals} / {safes})" if safes else f"{t.name}({normals} /)"
    return f"{t.name}(/{safes})"


def format_def(d: PcsfDef) -> str:
    kw = "defrec" if d.recursive else "def"
    return f"{kw} {d.name}({', '.join(d.normals)} / {', '.join(d.safes)}) := {format_term(d.body)}"


def format_program(p: PcsfProgram) -> str:
    return "".join(format_def(d) + "\n" for d in p.defs)


def shuffle_wrapper(target: PcsfDef, name: str, normals: list[str], safes: list[str]) -> str:
    """Source of ``def name(normals / safes) := target(...)``.

    Every parameter of ``target`` must appear exactly once among the new
    parameters; a normal parameter of ``target`` may be listed as a new
    normal only.  The checker enforces the latter.
    """
    params = list(target.normals) + list(target.safes)
    if sorted(params) != sorted(normals + safes):
        raise ValueError(f"{normals}/{safes} is not a rearrangement of {target.normals}/{target.safes}")
    call = f"{target.name}({', '.join(target.normals)} / {', '.join(target.safes)})"
    return f"def {name}({', '.join(normals)} / {', '.join(safes)}) := {call}\n"


__all__ = [
    "BUILTINS", "Call", "DuplicateDefinition", "Lit", "PcsfDef", "PcsfError", "PcsfProgram",
    "PcsfSyntaxError", "PROFILES", "Rec", "Sep", "Term", "UnknownIdentifier", "Var",
    "format_def", "format_program", "format_term", "parse", "shuffle_wrapper", "subterms",
]
