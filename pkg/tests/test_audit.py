import json
import random

import pytest

from pcsf import nested as ns
from pcsf.audit import (
    DEFAULT_SIZES, Generator, GeneratorError, Sample, audit_size, corollary_check, fit_degree,
    parse_generator, random_set, safe_offsets_verdict,
)
from pcsf.hfset import Store


def test_parse_generator():
    g = parse_generator("numeral:50", seed=3)
    assert (g.kind, g.param, g.seed) == ("numeral", 50, 3)
    assert g.members() == [t for t in DEFAULT_SIZES if t <= 50]
    for bad in ("numeral", "cube:3", "nu:x", ""):
        with pytest.raises(GeneratorError):
            parse_generator(bad)


def test_generator_sizes():
    s = Store()
    g = parse_generator("numeral:200")
    assert [s.tc_size(g.build(s, t)) for t in g.members()] == g.members()
    nu = parse_generator("nu:66")
    sizes = [s.tc_size(nu.build(s, t)) for t in nu.members()]
    assert sizes == sorted(set(sizes)) and sizes[-1] <= 200


def test_random_sets_hit_their_size():
    s = Store()
    rng = random.Random(0)
    for size in (0, 1, 5, 20, 60, 200):
        x = random_set(s, size, 6, rng)
        assert s.tc_size(x) == size
        assert s.rank(x) <= 6
    # only 16 sets have rank below 4
    assert s.tc_size(random_set(s, 40, 4, rng)) == 16


def test_verdict_rules():
    def samples(offsets):
        return [Sample(i, "", [2], 10 * i, 10 * i + o) for i, o in enumerate(offsets)]

    assert safe_offsets_verdict(samples([3, 3, 3, 3])) == (3, 3, True)
    assert safe_offsets_verdict(samples([-1, -5, -9, -20]))[2]
    assert not safe_offsets_verdict(samples([1, 2, 3, 4]))[2]
    flat = [Sample(t, "", [t], 0, 5) for t in (1, 10, 100)]
    assert fit_degree(flat) == pytest.approx(0.0)
    square = [Sample(t, "", [t], 0, (t + 1) ** 2 - 1) for t in (1, 10, 100)]
    assert fit_degree(square) == pytest.approx(2.0)


def test_restrict_constant_offset(lib):
    r = audit_size(lib, "restrict", parse_generator("numeral:200"))
    assert r.verdicts["safe_offset_bounded"]
    offsets = {s.result_size - s.safe_union_size for s in r.safe_samples}
    late = [s.result_size - s.safe_union_size for s in r.safe_samples[-5:]]
    assert max(late) <= max(offsets)


def test_tc_degree_one(lib):
    r = audit_size(lib, "tc", parse_generator("random:5", seed=2))
    assert all(s.result_size == s.normal_sizes[0] for s in r.normal_samples)
    assert r.fitted_degree == pytest.approx(1.0)
    assert r.passed
    assert "safe_offset_bounded" not in r.verdicts


def test_product_degree_and_threshold(lib):
    gen = parse_generator("numeral:60")
    assert audit_size(lib, "product", gen).fitted_degree == pytest.approx(2.0, abs=0.2)
    assert not audit_size(lib, "product", gen, degree_threshold=1.5).passed


def test_reports_are_reproducible(lib):
    gen = parse_generator("random:4", seed=9)
    a = audit_size(lib, "bunion", gen).as_dict()
    b = audit_size(lib, "bunion", gen).as_dict()
    assert a == b
    assert json.loads(json.dumps(a)) == a
    assert {"safe_samples", "normal_samples", "verdicts", "methodology", "passed"} <= set(a)


def test_no_samples():
    with pytest.raises(GeneratorError):
        audit_size(__import__("pcsf").stdlib.stdlib(), "tc", Generator("numeral", 0, sizes=(1, 2)))


def test_corollary_numbers_against_oracle(lib):
    rows = corollary_check(lib, range(4, 9))
    for row in rows:
        n = row["n"]
        a = ns.NestedSet(ns.numeral(k) for k in range(2, n + 1))
        prod = ns.NestedSet(ns.kpair(ns.numeral(0), v) for v in a)
        assert row["cT_product"] == ns.card_tc(prod)
        assert row["cT_a"] == ns.card_tc(a) and row["card_a"] == len(a)
        assert row["holds"]


def test_random_set_low_rank_bounds():
    s = Store()
    rng = random.Random(1)
    assert [s.tc_size(random_set(s, 10, r, rng)) for r in (1, 2, 3)] == [1, 2, 4]
    with pytest.raises(GeneratorError):
        random_set(s, 3, 0, rng)
