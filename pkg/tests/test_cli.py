import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from pcsf.cli import main
from pcsf.hfset import ExplicitDag, format_dag

BAD = Path(__file__).parent / "data" / "bad"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_tc(capsys):
    assert run(capsys, "eval", "stdlib.pcsf", "tc", "(#3 /)") == (0, "#3\n", "")


def test_eval_cost_and_plain_sets(capsys):
    code, out, err = run(capsys, "eval", "stdlib", "S1", '(/ "1"b)', "--cost", "--sets")
    assert code == 0 and out == "<#2, <#2, #0>>\n"
    assert json.loads(err)["steps"] > 0


def test_eval_strings(capsys):
    assert run(capsys, "eval", "stdlib", "S0", '(/ "1"b)')[1] == '"10"b\n'


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "stdlib", "tc", "(#3")
    assert code == 2 and "argument tuple" in err
    code, _, err = run(capsys, "eval", "stdlib", "tc", "(/ #3)")
    assert code == 1 and "ArityMismatch" in err
    code, _, err = run(capsys, "eval", "stdlib", "rank", "(#40 /)", "--max-steps", "100")
    assert code == 1 and "ResourceLimit" in err


def test_check(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "stdlib")
    assert code == 0
    assert "tc\tPCSF\t" in out and "diff\tPCSF-\t" in out
    bad = tmp_path / "bad.pcsf"
    bad.write_text("def someg(y / b) := b\ndef bad(x / a) := someg(a / x)\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1 and "SafeInNormalPosition" in err
    code, _, err = run(capsys, "check", str(tmp_path / "missing.pcsf"))
    assert code == 2


def test_check_syntax_error(capsys, tmp_path):
    f = tmp_path / "s.pcsf"
    f.write_text("def bad( := ")
    code, _, err = run(capsys, "check", str(f))
    assert code == 1 and "1:10" in err


@pytest.mark.parametrize("path", sorted(BAD.glob("*.pcsf")), ids=lambda p: p.stem)
def test_check_bad_corpus(capsys, path):
    text = path.read_text()
    expected = text.split("expect:", 1)[1].split()[0]
    profile = ["--profile", "pcsf-prime"] if "profile: pcsf-prime" in text else []
    code, _, err = run(capsys, "check", str(path), *profile)
    assert code == 1 and f"{expected}:" in err


def test_bisim_numberings_of_two(capsys, tmp_path):
    a, b, c = tmp_path / "a.dag", tmp_path / "b.dag", tmp_path / "c.dag"
    a.write_text("0:\n1: 0\n2: 1 0\nroot: 2\n")
    b.write_text("# another numbering\n0:\n4: 0\n9: 4 0\nroot: 9\n")
    c.write_text("0:\n1: 0\n2: 1\nroot: 2\n")
    assert run(capsys, "bisim", str(a), str(b)) == (0, "bisimilar\n", "")
    assert run(capsys, "bisim", str(a), str(c))[0] == 1


def test_bisim_invalid_dag(capsys, tmp_path):
    a = tmp_path / "a.dag"
    a.write_text("0: 1\n1:\nroot: 0\n")
    code, _, err = run(capsys, "bisim", str(a), str(a))
    assert code == 1 and "DagError" in err


def random_dag(rng, n):
    succ = {0: []}
    for v in range(1, n):
        succ[v] = rng.sample(range(v), rng.randint(1, min(v, 3)))
    # a root above everything keeps every vertex reachable
    succ[n] = list(range(n))
    return ExplicitDag.from_successors(succ, n)


def test_collapse_then_bisim(capsys, tmp_path):
    rng = random.Random(5)
    for i in range(15):
        g = random_dag(rng, rng.randint(1, 12))
        src, dst = tmp_path / f"g{i}.dag", tmp_path / f"c{i}.dag"
        src.write_text(format_dag(g))
        code, out, _ = run(capsys, "collapse", str(src))
        assert code == 0
        dst.write_text(out)
        assert run(capsys, "bisim", str(src), str(dst))[0] == 0


def test_compile_bc_output_checks(capsys, tmp_path):
    for profile in ("pcsf", "pcsf-prime"):
        code, out, _ = run(capsys, "compile-bc", "corpus", "--profile", profile)
        assert code == 0 and "defrec dup0(" in out
        f = tmp_path / f"out-{profile}.pcsf"
        f.write_text(out)
        assert run(capsys, "check", str(f), "--profile", profile)[0] == 0
        code, out, _ = run(capsys, "eval", str(f), "cat", '("10"b, "01"b /)', "--profile", profile)
        assert out == '"1001"b\n'


def test_eval_bc(capsys):
    assert run(capsys, "eval-bc", "corpus", "dup0", '("101"b /)')[1] == '"000"b\n'
    assert run(capsys, "eval-bc", "corpus", "pad", '("11"b, "0"b /)', "--compiled")[1] == '"00"b\n'
    assert run(capsys, "eval-bc", "corpus", "dup0", "(#1 /)")[0] == 2


def test_audit_json(capsys):
    code, out, _ = run(capsys, "audit", "stdlib", "restrict", "--gen", "numeral:30", "--json")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["function"] == "restrict"
    assert set(report["verdicts"]) == {"safe_offset_bounded", "normal_degree_bounded"}
    assert report["safe_samples"] and report["normal_samples"]
    again = run(capsys, "audit", "stdlib", "restrict", "--gen", "numeral:30", "--json")[1]
    assert again == out


def test_audit_text_and_failures(capsys):
    code, out, _ = run(capsys, "audit", "stdlib", "product", "--gen", "numeral:30", "--threshold", "1.5")
    assert code == 1 and "normal_degree_bounded=FAIL" in out
    assert run(capsys, "audit", "stdlib", "tc", "--gen", "cube:3")[0] == 2
    assert run(capsys, "audit", "stdlib", "tc")[0] == 2


def test_corollary(capsys):
    code, out, _ = run(capsys, "corollary", "--high", "8", "--json")
    rows = json.loads(out)
    assert code == 0 and [r["n"] for r in rows] == [4, 5, 6, 7, 8]


def test_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "dot", "{#1, <#0, #1>}")
    assert code == 0 and out.startswith("digraph G {")
    f = tmp_path / "a.dag"
    f.write_text("0:\n1: 0\nroot: 1\n")
    assert "n1 -> n0;" in run(capsys, "dot", "--dag", str(f))[1]
    assert run(capsys, "dot", "{#1")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "eval", "stdlib")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "pcsf", "eval", "stdlib", "rank", "(#4 /)"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "#4\n"
