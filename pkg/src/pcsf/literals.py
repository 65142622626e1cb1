"""Set-literal syntax: ``{}``, ``{t, ...}``, ``<a,b>``, ``#n`` and ``"0110"b``.

``<a,b>`` is the Kuratowski pair {{a},{a,b}}, ``#n`` the von Neumann
numeral and ``"s"b`` the string encoding nu("") = 0,
nu(s i) = <i+1, nu(s)>.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import nested as ns
from .hfset import SetNode, Store
from .lexer import TokenStream


class NotInImage(ValueError):
    """The node is not the encoding of any binary string."""


@dataclass(frozen=True)
class Numeral:
    n: int


@dataclass(frozen=True)
class BitString:
    bits: str


@dataclass(frozen=True)
class PairLit:
    left: "Literal"
    right: "Literal"


@dataclass(frozen=True)
class SetLit:
    items: tuple["Literal", ...]


Literal = Union[Numeral, BitString, PairLit, SetLit]


def parse_literal_from(ts: TokenStream) -> Literal:
    tok = ts.peek()
    if tok.kind == "num":
        ts.next()
        return Numeral(int(tok.text[1:]))
    if tok.kind == "str":
        ts.next()
        return BitString(tok.text[1:-2])
    if ts.accept("<"):
        a = parse_literal_from(ts)
        ts.expect(",")
        b = parse_literal_from(ts)
        ts.expect(">")
        return PairLit(a, b)
    if ts.accept("{"):
        items = []
        if not ts.at("}"):
            items.append(parse_literal_from(ts))
            while ts.accept(","):
                items.append(parse_literal_from(ts))
        ts.expect("}")
        return SetLit(tuple(items))
    raise ts.error(f"expected a set literal, found {tok.text or 'end of input'!r}")


def starts_literal(ts: TokenStream) -> bool:
    tok = ts.peek()
    return tok.kind in ("num", "str") or ts.at("<") or ts.at("{")


def parse_literal(text: str) -> Literal:
    ts = TokenStream(text)
    lit = parse_literal_from(ts)
    if ts.peek().kind != "eof":
        raise ts.error(f"trailing input {ts.peek().text!r}")
    return lit


def parse_args(text: str) -> tuple[list[Literal], list[Literal]]:
    """Parse an argument tuple ``(x1, x2 / a1, a2)``."""
    ts = TokenStream(text)
    ts.expect("(")
    normals: list[Literal] = []
    safes: list[Literal] = []
    side = normals
    while not ts.at(")"):
        if ts.accept("/"):
            if side is safes:
                raise ts.error("second '/' in argument list")
            side = safes
            continue
        side.append(parse_literal_from(ts))
        if not ts.at(")") and not ts.at("/"):
            ts.expect(",")
    ts.expect(")")
    if ts.peek().kind != "eof":
        raise ts.error(f"trailing input {ts.peek().text!r}")
    if side is not safes:
        raise ts.error("argument list needs a '/' separating normal and safe arguments")
    return normals, safes


# -- building ------------------------------------------------------------


def encode_nu(store: Store, bits: str) -> SetNode:
    x = store.empty
    for b in bits:
        if b not in "01":
            raise ValueError(f"not a binary string: {bits!r}")
        x = store.kpair(store.numeral(int(b) + 1), x)
    return x


def decode_nu(store: Store, x: SetNode) -> str:
    one, two = store.find((store.empty,)), None
    if one is not None:
        two = store.find((store.empty, one))
    out = []
    while x != store.empty:
        kids = list(store.members(x))
        if len(kids) != 2:
            raise NotInImage(f"node {x} is not a string encoding")
        for single, double in (kids, kids[::-1]):
            (j,) = store.members(single) if store.card(single) == 1 else (None,)
            if j is not None and j in (one, two) and store.card(double) == 2 and j in store.members(double):
                break
        else:
            raise NotInImage(f"node {x} is not a string encoding")
        out.append("0" if j == one else "1")
        (x,) = store.members(double) - {j}
    return "".join(reversed(out))


def to_node(store: Store, lit: Literal) -> SetNode:
    if isinstance(lit, Numeral):
        return store.numeral(lit.n)
    if isinstance(lit, BitString):
        return encode_nu(store, lit.bits)
    if isinstance(lit, PairLit):
        return store.kpair(to_node(store, lit.left), to_node(store, lit.right))
    return store.intern(to_node(store, t) for t in lit.items)


def to_nested(lit: Literal) -> ns.NestedSet:
    if isinstance(lit, Numeral):
        return ns.numeral(lit.n)
    if isinstance(lit, BitString):
        x = ns.EMPTY
        for b in lit.bits:
            x = ns.kpair(ns.numeral(int(b) + 1), x)
        return x
    if isinstance(lit, PairLit):
        return ns.kpair(to_nested(lit.left), to_nested(lit.right))
    return ns.NestedSet(to_nested(t) for t in lit.items)


# -- printing ------------------------------------------------------------


def numeral_value(store: Store, x: SetNode) -> int | None:
    k = store.card(x)
    if store.rank(x) != k:
        return None
    kids = sorted(store.members(x), key=store.rank)
    for i, m in enumerate(kids):
        if store.rank(m) != i or store.members(m) != frozenset(kids[:i]):
            return None
    return k


def kpair_parts(store: Store, x: SetNode) -> tuple[SetNode, SetNode] | None:
    """(a, b) with x = <a,b> and a != b, else None."""
    kids = list(store.members(x))
    if len(kids) != 2:
        return None
    for single, double in (kids, kids[::-1]):
        if store.card(single) == 1 and store.card(double) == 2:
            (a,) = store.members(single)
            if a in store.members(double):
                (b,) = store.members(double) - {a}
                return a, b
    return None


def format_literal(lit: Literal) -> str:
    if isinstance(lit, Numeral):
        return f"#{lit.n}"
    if isinstance(lit, BitString):
        return f'"{lit.bits}"b'
    if isinstance(lit, PairLit):
        return f"<{format_literal(lit.left)}, {format_literal(lit.right)}>"
    return "{" + ", ".join(format_literal(t) for t in lit.items) + "}"


def format_node(store: Store, x: SetNode, *, strings: bool = True) -> str:
    """Readable literal for ``x``; numerals, then string codes, then pairs."""
    memo: dict[int, str] = {}

    def go(v: int) -> str:
        s = memo.get(v)
        if s is not None:
            return s
        k = numeral_value(store, v)
        if k is not None:
            s = f"#{k}"
        else:
            bits = None
            if strings:
                try:
                    bits = decode_nu(store, v)
                except NotInImage:
                    pass
            if bits is not None:
                s = f'"{bits}"b'
            elif (ab := kpair_parts(store, v)) is not None:
                s = f"<{go(ab[0])}, {go(ab[1])}>"
            else:
                s = "{" + ", ".join(go(c) for c in store.children(v)) + "}"
        memo[v] = s
        return s

    return go(x)


def format_nested(n: ns.NestedSet) -> str:
    store = Store()
    return format_node(store, ns.from_nested(store, n))
