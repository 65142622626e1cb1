import itertools

import pytest

from pcsf import bc
from pcsf.checker import (
    ArityMismatch, PCSF, RecOutsideRecursion, RecursionWithoutNormal, SafeInNormalPosition,
)
from pcsf.evaluator import Evaluator
from pcsf.hfset import Store
from pcsf.literals import decode_nu, encode_nu, parse_literal, to_node
from pcsf.syntax import DuplicateDefinition, UnknownIdentifier


def strings(max_len):
    for n in range(max_len + 1):
        yield from map("".join, itertools.product("01", repeat=n))


@pytest.fixture(scope="module")
def corpus():
    return bc.corpus()


def test_eval_b_examples(corpus):
    assert bc.eval_b(corpus, "identity", ["110"], []) == "110"
    assert bc.eval_b(corpus, "dup0", ["101"], []) == "000"
    p = bc.parse_bc("bdef pred(/a) := p(/a)")
    assert bc.eval_b(p, "pred", [], ["011"]) == "01"
    assert bc.eval_b(p, "pred", [], [""]) == ""


def test_eval_b_corpus_semantics(corpus):
    for s in strings(5):
        assert bc.eval_b(corpus, "last1", [], [s]) == ("1" if s.endswith("1") else "0")
        assert bc.eval_b(corpus, "trunc2", [], [s]) == s[:-2]
        assert bc.eval_b(corpus, "parity", [s], []) == str(s.count("1") % 2)
        for t in ("", "1", "01"):
            assert bc.eval_b(corpus, "cat", [s, t], []) == s + t
            assert bc.eval_b(corpus, "app", [s], [t]) == t + s
            assert bc.eval_b(corpus, "pad", [s, t], []) == t * len(s)


def test_eval_b_errors(corpus):
    with pytest.raises(ArityMismatch):
        bc.eval_b(corpus, "identity", [], [])
    with pytest.raises(ValueError):
        bc.eval_b(corpus, "identity", ["012"], [])


@pytest.mark.parametrize("src, err", [
    ("bdef f(x / a) := g(a /)", UnknownIdentifier),
    ("bdefrec g(s /) := base eps | step0 @rec | step1 @rec\nbdef f(x / a) := g(a /)", SafeInNormalPosition),
    ("bdef f(/a) := s0(/@rec)", RecOutsideRecursion),
    ("bdefrec f(s /) := base s | step0 @rec | step1 @rec", UnknownIdentifier),
    ("bdefrec f(/a) := base a | step0 a | step1 a", RecursionWithoutNormal),
    ("bdef f(/a) := C(/a, a)", ArityMismatch),
])
def test_bc_flow_rules(src, err):
    with pytest.raises(err):
        bc.parse_bc(src)


def compiled_helper(profile, name, bits):
    s = Store()
    ev = Evaluator(bc.prelude(profile), s)
    return s, ev(name, [], [encode_nu(s, b) for b in bits])


@pytest.mark.parametrize("profile", ["pcsf", "pcsf-prime"])
def test_compiled_initial_functions(profile):
    s, out = compiled_helper(profile, "S1", ["10"])
    assert out == encode_nu(s, "101")
    s, out = compiled_helper(profile, "S0", [""])
    assert out == s.kpair(s.numeral(1), s.empty)
    s, out = compiled_helper(profile, "Pred", ["10"])
    assert out == encode_nu(s, "1")
    for w in strings(4):
        s, out = compiled_helper(profile, "Pred", [w])
        assert decode_nu(s, out) == w[:-1]
        s, out = compiled_helper(profile, "ParityCond", [w, "0", "1"])
        assert decode_nu(s, out) == ("0" if w.endswith("1") else "1")


@pytest.mark.parametrize("profile", ["pcsf", "pcsf-prime"])
def test_dup0_cross_evaluator(corpus, profile):
    prog = bc.compile(corpus, "dup0", profile)
    assert prog["dup0"].stratum == PCSF
    s = Store()
    ev = Evaluator(prog, s, persist_memo=True)
    for w in strings(8):
        assert decode_nu(s, ev("dup0", [encode_nu(s, w)], [])) == bc.eval_b(corpus, "dup0", [w], [])


@pytest.mark.parametrize("name", ["identity", "last1", "trunc2", "app", "cat", "parity", "pad"])
def test_corpus_compiles_correctly(corpus, name):
    prog = bc.compile(corpus, name)
    d = corpus[name]
    s = Store()
    ev = Evaluator(prog, s, persist_memo=True)
    arity = len(d.normals) + len(d.safes)
    for args in itertools.product(list(strings(3)), repeat=arity):
        normals, safes = list(args[: len(d.normals)]), list(args[len(d.normals):])
        out = ev(name, [encode_nu(s, w) for w in normals], [encode_nu(s, w) for w in safes])
        assert decode_nu(s, out) == bc.eval_b(corpus, name, normals, safes)


# bare numerals i+1 and {i+1}, and shapes matching no case, are sent to 0
@pytest.mark.parametrize("text", ["#1", "#2", "{#2}", "#4", "{#0, #3, #4}", "<#3, #0>"])
def test_compiled_recursion_off_the_image_is_zero(corpus, text):
    prog = bc.compile(corpus, "identity")
    s = Store()
    assert Evaluator(prog, s)("identity", [to_node(s, parse_literal(text))], []) == s.empty


def test_prime_output_matches_pcsf(corpus):
    a, b = bc.compile(corpus, profile="pcsf"), bc.compile(corpus, profile="pcsf-prime")
    s = Store()
    ea, eb = Evaluator(a, s), Evaluator(b, s)
    for w in strings(4):
        x = encode_nu(s, w)
        assert ea("parity", [x], []) == eb("parity", [x], [])
        assert ea("cat", [x, x], []) == eb("cat", [x, x], [])


def test_name_clash_with_prelude():
    with pytest.raises(DuplicateDefinition):
        bc.compile(bc.parse_bc("bdef eq(/a) := a"))


def test_compile_source_shape(corpus):
    src = bc.compile_source(corpus, "dup0")
    assert "defrec dup0(w_ / )" in src
    assert "dup0__g" in src and "dup0__h0" in src and "dup0__h1" in src


def test_compile_selects_dependencies(corpus):
    names = bc.compile(corpus, "cat").names()
    assert "cat" in names and "app" in names and "pad" not in names
