"""Normal/safe flow checker, stratum assignment and the measure o(f).

Flow rules for a call ``g(r1..rn / t1..tm)``:

* the r_i mention normal variables only: no safe parameter, no bound
  variable and no ``@rec``;
* the t_j are unrestricted;
* a separation body sees only safe parameters, its bound variable and
  ``@rec``, and calls builtins or PCSF- definitions only;
* ``defrec`` recurses on its first normal parameter, so it needs one.

Under the ``pcsf-prime`` profile the builtin set is diff, single, pred,
finunion and cond_in, separation is unavailable, and union may only be
applied directly to ``@rec`` (the union-valued recursion scheme).
"""
from __future__ import annotations

import dataclasses

from .syntax import (
    BUILTINS, Call, Lit, PcsfDef, PcsfError, PcsfProgram, Rec, Sep, Term, Var, subterms,
)

PCSF_MINUS = "PCSF-"
PCSF = "PCSF"

# builtins that exist as initial functions of the primed class
_PRIME_INITIAL = frozenset({"diff", "single", "pred", "finunion", "cond_in"})


class SafeInNormalPosition(PcsfError):
    code = "SafeInNormalPosition"


class RecInNormalPosition(PcsfError):
    code = "RecInNormalPosition"


class NormalInSeparation(PcsfError):
    code = "NormalInSeparation"


class NonSimpleInSeparation(PcsfError):
    code = "NonSimpleInSeparation"


class RecursionWithoutNormal(PcsfError):
    code = "RecursionWithoutNormal"


class RecOutsideRecursion(PcsfError):
    code = "RecOutsideRecursion"


class ArityMismatch(PcsfError):
    code = "ArityMismatch"


class ProfileViolation(PcsfError):
    code = "ProfileViolation"


ERRORS = {
    cls.code: cls
    for cls in (
        SafeInNormalPosition, RecInNormalPosition, NormalInSeparation, NonSimpleInSeparation,
        RecursionWithoutNormal, RecOutsideRecursion, ArityMismatch, ProfileViolation,
    )
}


class _DefChecker:
    def __init__(self, d: PcsfDef, done: dict[str, PcsfDef], profile: str):
        self.d = d
        self.done = done
        self.profile = profile
        self.builtins = BUILTINS[profile]

    def fail(self, cls, message: str, t: Term):
        raise cls(message, t.loc, self.d.name)

    def run(self) -> None:
        d = self.d
        if d.recursive and not d.normals:
            raise RecursionWithoutNormal("defrec needs a normal parameter to recurse on", d.loc, d.name)
        self.term(d.body, in_sep=False)

    def arity(self, t: Call) -> None:
        if t.builtin:
            want = (0, self.builtins[t.name])
        else:
            g = self.done[t.name]
            want = (len(g.normals), len(g.safes))
        got = (len(t.normals), len(t.safes))
        if got != want:
            self.fail(ArityMismatch, f"{t.name} takes {want[0]} normal and {want[1]} safe arguments, got {got[0]}/{got[1]}", t)

    def normal_position(self, arg: Term, callee: str) -> None:
        for s in subterms(arg):
            if isinstance(s, Var) and s.kind == "safe":
                self.fail(SafeInNormalPosition, f"safe variable {s.name!r} in a normal argument of {callee}", s)
            if isinstance(s, Rec):
                self.fail(RecInNormalPosition, f"@rec in a normal argument of {callee}", s)
        # bound variables are only legal when bound inside the argument itself
        self._bound_closed(arg, frozenset(), callee)

    def _bound_closed(self, t: Term, bound: frozenset, callee: str) -> None:
        if isinstance(t, Var) and t.kind == "bound" and t.name not in bound:
            self.fail(SafeInNormalPosition, f"separation variable {t.name!r} in a normal argument of {callee}", t)
        elif isinstance(t, Call):
            for a in t.normals + t.safes:
                self._bound_closed(a, bound, callee)
        elif isinstance(t, Sep):
            self._bound_closed(t.domain, bound, callee)
            self._bound_closed(t.body, bound | {t.var}, callee)

    def term(self, t: Term, in_sep: bool) -> None:
        if isinstance(t, Var):
            if in_sep and t.kind == "normal":
                self.fail(NormalInSeparation, f"normal variable {t.name!r} inside a separation body", t)
        elif isinstance(t, Rec):
            if not self.d.recursive:
                self.fail(RecOutsideRecursion, "@rec outside a defrec body", t)
        elif isinstance(t, Lit):
            pass
        elif isinstance(t, Sep):
            if self.profile == "pcsf-prime":
                self.fail(ProfileViolation, "separation is not available in the pcsf-prime profile", t)
            self.term(t.domain, in_sep)
            self.term(t.body, True)
        else:
            self.arity(t)
            if t.builtin:
                if self.profile == "pcsf-prime" and t.name == "union" and not (
                    len(t.safes) == 1 and isinstance(t.safes[0], Rec)
                ):
                    self.fail(ProfileViolation, "union is only available as union(/@rec) in the pcsf-prime profile", t)
            # flow errors in the arguments take precedence over the callee's stratum
            for a in t.normals:
                self.normal_position(a, t.name)
                self.term(a, in_sep)
            for a in t.safes:
                self.term(a, in_sep)
            if not t.builtin and in_sep and self.done[t.name].stratum != PCSF_MINUS:
                self.fail(NonSimpleInSeparation, f"{t.name} is not a PCSF- function and cannot be called in a separation body", t)

    def stratum(self) -> str:
        d = self.d
        if d.normals or d.recursive:
            return PCSF
        for s in subterms(d.body):
            if isinstance(s, Call) and not s.builtin and self.done[s.name].stratum != PCSF_MINUS:
                return PCSF
        return PCSF_MINUS

    def prime(self) -> bool:
        """Whether the body only uses constructs of the primed class."""
        if self.profile == "pcsf-prime":
            return True
        for s in subterms(self.d.body):
            if isinstance(s, Sep):
                return False
            if isinstance(s, Call):
                if s.builtin:
                    if s.name == "union":
                        if not (len(s.safes) == 1 and isinstance(s.safes[0], Rec)):
                            return False
                    elif s.name not in _PRIME_INITIAL:
                        return False
                elif not self.done[s.name].prime:
                    return False
        return True


def term_measure(t: Term, done: dict[str, PcsfDef]) -> int:
    """Measure of a term read as the function of the parameters it computes.

    A bare variable is a projection (1).  A call whose arguments are all
    variables is the callee itself up to projections, so it costs the
    callee's measure; otherwise it is a composition and costs one plus the
    callee plus every argument.
    """
    if isinstance(t, (Var, Rec, Lit)):
        return 1
    if isinstance(t, Sep):
        if isinstance(t.domain, (Var, Rec)):
            return 1
        return 2 + term_measure(t.domain, done)
    callee = 1 if t.builtin else done[t.name].measure
    args = t.normals + t.safes
    if all(isinstance(a, (Var, Rec)) for a in args):
        return callee
    return 1 + callee + sum(term_measure(a, done) for a in args)


def check(p: PcsfProgram) -> PcsfProgram:
    """Return the checked program with stratum, prime flag and measure filled in."""
    done: dict[str, PcsfDef] = {}
    out = []
    for d in p.defs:
        c = _DefChecker(d, done, p.profile)
        c.run()
        body = term_measure(d.body, done)
        measure = 1 + body if d.recursive else body
        d2 = dataclasses.replace(d, stratum=c.stratum(), prime=False, measure=measure)
        done[d.name] = d2
        d2 = dataclasses.replace(d2, prime=_DefChecker(d2, done, p.profile).prime())
        done[d.name] = d2
        out.append(d2)
    return PcsfProgram(out, p.profile, checked=True)


def complexity(d: PcsfDef | str, p: PcsfProgram) -> int:
    """o(f) for a definition of a checked program."""
    name = d if isinstance(d, str) else d.name
    if not p.checked:
        p = check(p)
    return p[name].measure
