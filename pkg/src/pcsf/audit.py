"""Empirical check of the size bound cT(f(X / A)) <= p_f(cT(X)) + cT(union A).

Two experiments per function:

(a) normals fixed, every safe slot filled with the same growing family
    member; the offset cT(f) - cT(union A) must stay bounded.  The verdict
    compares the largest offset on the upper half of the family with the
    largest on the lower half (or zero): growth would show up as a larger
    late offset.
(b) safes fixed, every normal slot filled with the family member; the
    slope of log(cT(f) + 1) against log(cT(X) + 1) by least squares is the
    fitted degree, which must not exceed the threshold.

The families, the split into halves and the degree threshold are our own
choices; the bound itself says nothing about methodology.
"""
from __future__ import annotations

import math
import random
import statistics
from dataclasses import asdict, dataclass, field
from typing import Callable

from .evaluator import Evaluator
from .hfset import SetNode, Store
from .literals import encode_nu
from .syntax import PcsfProgram

# roughly geometric sizes between 1 and 200
DEFAULT_SIZES = (1, 2, 3, 4, 6, 8, 11, 15, 20, 27, 37, 50, 67, 90, 120, 160, 200)
METHODOLOGY = (
    "families, half split and degree threshold are constructions of this tool, "
    "not taken from the bound's statement"
)


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    """A family of sets indexed by a size parameter."""

    kind: str
    param: int
    seed: int = 0
    sizes: tuple[int, ...] = DEFAULT_SIZES

    @property
    def description(self) -> str:
        return f"{self.kind}:{self.param} seed={self.seed}"

    def members(self) -> list[int]:
        """Size parameters of the family, capped by ``param``."""
        if self.kind == "nu":
            return sorted({max(0, (t - 1) // 3) for t in self.sizes if (t - 1) // 3 <= self.param})
        return [t for t in self.sizes if t <= self.param]

    def sample_seed(self, t: int) -> str:
        return f"{self.kind}:{self.seed}:{t}"

    def build(self, store: Store, t: int) -> SetNode:
        rng = random.Random(self.sample_seed(t))
        if self.kind == "numeral":
            return store.numeral(t)
        if self.kind == "nu":
            return encode_nu(store, "".join(rng.choice("01") for _ in range(t)))
        if self.kind == "random":
            return random_set(store, t, self.param, rng)
        raise GeneratorError(f"unknown generator kind {self.kind!r}")


def parse_generator(spec: str, seed: int = 0) -> Generator:
    """``numeral:N``, ``nu:L`` or ``random:R`` (R bounds the rank)."""
    kind, _, param = spec.partition(":")
    if kind not in ("numeral", "nu", "random") or not param.isdigit():
        raise GeneratorError(f"bad generator {spec!r}; expected numeral:N, nu:L or random:R")
    return Generator(kind, int(param), seed)


def random_set(store: Store, size: int, max_rank: int, rng: random.Random) -> SetNode:
    """A set x of rank at most ``max_rank`` with cT(x) = ``size`` when reachable.

    Grows a transitive pool of distinct sets and returns the set of the
    whole pool, whose transitive closure is the pool itself.
    """
    if max_rank < 1:
        raise GeneratorError("random sets need a rank bound of at least 1")
    pool = [store.empty]
    in_pool = {store.empty}
    attempts = 0
    while len(pool) < size and attempts < 50 * size + 100:
        attempts += 1
        low = [v for v in pool if store.rank(v) < max_rank - 1]
        if not low:
            break
        k = rng.randint(1, min(len(low), 4))
        v = store.intern(rng.sample(low, k))
        if v not in in_pool:
            in_pool.add(v)
            pool.append(v)
    return store.intern(pool[:size]) if size else store.empty


@dataclass
class Sample:
    param: int
    seed: str
    normal_sizes: list[int]
    safe_union_size: int
    result_size: int


@dataclass
class AuditReport:
    function: str
    generator: str
    methodology: str
    safe_samples: list[Sample] = field(default_factory=list)
    normal_samples: list[Sample] = field(default_factory=list)
    safe_offset_lower: int | None = None
    safe_offset_upper: int | None = None
    fitted_degree: float | None = None
    degree_threshold: float = 4.0
    verdicts: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _run(program: PcsfProgram, name: str, make: Callable[[Store], tuple[list, list]], **caps) -> tuple[Store, list, list, SetNode]:
    store = Store(max_nodes=caps.get("max_nodes", 10**6))
    normals, safes = make(store)
    ev = Evaluator(program, store, max_steps=caps.get("max_steps", 10**7), intrinsics=caps.get("intrinsics", True))
    result = ev(name, normals, safes)
    return store, normals, safes, result


def safe_offsets_verdict(samples: list[Sample]) -> tuple[int, int, bool]:
    offsets = [s.result_size - s.safe_union_size for s in samples]
    half = len(offsets) // 2
    lower, upper = max(offsets[:half], default=0), max(offsets[half:], default=0)
    return lower, upper, upper <= max(lower, 0)


def fit_degree(samples: list[Sample]) -> float:
    xs = [math.log(sum(s.normal_sizes) + 1) for s in samples]
    ys = [math.log(s.result_size + 1) for s in samples]
    if len(set(xs)) < 2:
        return 0.0
    return statistics.linear_regression(xs, ys).slope


def audit_size(
    program: PcsfProgram,
    name: str,
    generator: Generator,
    *,
    fixed: int = 2,
    degree_threshold: float = 4.0,
    max_nodes: int = 10**6,
    max_steps: int = 10**7,
    intrinsics: bool = True,
) -> AuditReport:
    """Run both experiments; fixed arguments are the numeral ``fixed``.

    Sizes do not depend on how a value is computed, so the library's native
    relation lookups are used by default.
    """
    d = program[name]
    caps = {"max_nodes": max_nodes, "max_steps": max_steps, "intrinsics": intrinsics}
    report = AuditReport(name, generator.description, METHODOLOGY, degree_threshold=degree_threshold)
    params = generator.members()
    if not params:
        raise GeneratorError(f"generator {generator.description} produces no samples")

    if d.safes:
        for t in params:
            def make(store, t=t):
                a = generator.build(store, t)
                return [store.numeral(fixed)] * len(d.normals), [a] * len(d.safes)

            store, normals, safes, result = _run(program, name, make, **caps)
            report.safe_samples.append(Sample(
                t, generator.sample_seed(t), [store.tc_size(x) for x in normals],
                _union_size(store, safes), store.tc_size(result),
            ))
        lo, hi, ok = safe_offsets_verdict(report.safe_samples)
        report.safe_offset_lower, report.safe_offset_upper = lo, hi
        report.verdicts["safe_offset_bounded"] = ok

    if d.normals:
        for t in params:
            def make(store, t=t):
                x = generator.build(store, t)
                return [x] * len(d.normals), [store.numeral(fixed)] * len(d.safes)

            store, normals, safes, result = _run(program, name, make, **caps)
            report.normal_samples.append(Sample(
                t, generator.sample_seed(t), [store.tc_size(x) for x in normals],
                _union_size(store, safes), store.tc_size(result),
            ))
        report.fitted_degree = fit_degree(report.normal_samples)
        report.verdicts["normal_degree_bounded"] = report.fitted_degree <= degree_threshold
    return report


def _union_size(store: Store, safes: list[SetNode]) -> int:
    return store.tc_size(store.finite_union(*safes)) if safes else 0


def corollary_check(stdlib: PcsfProgram, ns_range=range(4, 21)) -> list[dict]:
    """cT({0} x a_n) against cT(a_n) + card(a_n) for a_n = {2, ..., n}."""
    rows = []
    for n in ns_range:
        store = Store()
        a = store.intern(store.numeral(k) for k in range(2, n + 1))
        prod = Evaluator(stdlib, store)("product", [store.numeral(1), a], [])
        ct_prod, ct_a, card = store.tc_size(prod), store.tc_size(a), store.card(a)
        rows.append({
            "n": n, "cT_product": ct_prod, "cT_a": ct_a, "card_a": card,
            "holds": ct_prod >= ct_a + card,
        })
    return rows
