"""Command-line driver.

Exit status: 0 on success or a passing verdict, 1 when a program is
rejected, an evaluation fails or a verdict fails, 2 on usage errors
(bad flags, unreadable files, malformed argument tuples).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bc
from .audit import GeneratorError, audit_size, corollary_check, parse_generator
from .checker import check
from .evaluator import Evaluator
from .hfset import DagError, Store, StoreCapacityError, bisimilar, collapse, format_dag, parse_dag, to_dot
from .lexer import PcsfSyntaxError
from .literals import BitString, NotInImage, decode_nu, encode_nu, format_node, parse_args, parse_literal, to_node
from .stdlib import source as stdlib_source
from .syntax import PcsfError, PcsfProgram, format_program, parse

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _pcsf_text(path: str) -> str:
    if not Path(path).exists() and path in ("stdlib", "stdlib.pcsf"):
        return stdlib_source("stdlib.pcsf")
    return _read(path)


def _bc_text(path: str) -> str:
    if not Path(path).exists() and path in ("corpus", "strings.bc"):
        return bc.corpus_source()
    return _read(path)


def _load(path: str, profile: str) -> PcsfProgram:
    return check(parse(_pcsf_text(path), profile))


def _args(text: str):
    try:
        return parse_args(text)
    except PcsfSyntaxError as e:
        raise UsageError(f"bad argument tuple: {e}") from None


# -- subcommands -----------------------------------------------------------------


def cmd_check(ns) -> int:
    prog = _load(ns.file, ns.profile)
    for d in prog:
        tags = [d.stratum] + (["PCSF'"] if d.prime else [])
        print(f"{d.name}\t{'/'.join(tags)}\to={d.measure}")
    return OK


def cmd_eval(ns) -> int:
    prog = _load(ns.file, ns.profile)
    normals, safes = _args(ns.args)
    store = Store(max_nodes=ns.max_nodes)
    ev = Evaluator(prog, store, max_steps=ns.max_steps, intrinsics=not ns.no_intrinsics)
    result, cost = ev.eval(ns.fn, [to_node(store, a) for a in normals], [to_node(store, a) for a in safes])
    print(format_node(store, result, strings=not ns.sets))
    if ns.cost:
        print(json.dumps(cost.as_dict(), sort_keys=True), file=sys.stderr)
    return OK


def cmd_compile_bc(ns) -> int:
    prog = bc.parse_bc(_bc_text(ns.file))
    compiled = bc.compile(prog, ns.fn, ns.profile)
    sys.stdout.write(format_program(compiled))
    return OK


def _strings(lits, what: str) -> list[str]:
    out = []
    for a in lits:
        if not isinstance(a, BitString):
            raise UsageError(f"{what} arguments must be string literals like \"101\"b")
        out.append(a.bits)
    return out


def cmd_eval_bc(ns) -> int:
    prog = bc.parse_bc(_bc_text(ns.file))
    normals, safes = _args(ns.args)
    normals, safes = _strings(normals, "normal"), _strings(safes, "safe")
    if not ns.compiled:
        print(f'"{bc.eval_b(prog, ns.fn, normals, safes)}"b')
        return OK
    compiled = bc.compile(prog, ns.fn, ns.profile)
    store = Store()
    ev = Evaluator(compiled, store)
    out = ev(ns.fn, [encode_nu(store, s) for s in normals], [encode_nu(store, s) for s in safes])
    print(f'"{decode_nu(store, out)}"b')
    return OK


def cmd_bisim(ns) -> int:
    g, h = parse_dag(_read(ns.dag1)), parse_dag(_read(ns.dag2))
    same = bisimilar(g, h)
    print("bisimilar" if same else "not bisimilar")
    return OK if same else FAILED


def cmd_collapse(ns) -> int:
    sys.stdout.write(format_dag(collapse(parse_dag(_read(ns.dag)))))
    return OK


def cmd_audit(ns) -> int:
    prog = _load(ns.file, ns.profile)
    try:
        gen = parse_generator(ns.gen, ns.seed)
    except GeneratorError as e:
        raise UsageError(str(e)) from None
    names = prog.names() if ns.fn == "all" and "all" not in prog else [ns.fn]
    reports = [
        audit_size(
            prog, name, gen,
            fixed=ns.fixed, degree_threshold=ns.threshold,
            max_nodes=ns.max_nodes, max_steps=ns.max_steps,
            intrinsics=not ns.no_intrinsics,
        )
        for name in names
    ]
    if ns.json:
        payload = reports[0].as_dict() if len(reports) == 1 else [r.as_dict() for r in reports]
        print(json.dumps(payload, sort_keys=True))
    else:
        for r in reports:
            verdicts = " ".join(f"{k}={'pass' if v else 'FAIL'}" for k, v in r.verdicts.items())
            extra = []
            if r.safe_offset_upper is not None:
                extra.append(f"offsets {r.safe_offset_lower}/{r.safe_offset_upper}")
            if r.fitted_degree is not None:
                extra.append(f"degree {r.fitted_degree:.2f}")
            print(f"{r.function}\t{verdicts}\t{', '.join(extra)}")
    return OK if all(r.passed for r in reports) else FAILED


def cmd_corollary(ns) -> int:
    from .stdlib import stdlib

    rows = corollary_check(stdlib(), range(ns.low, ns.high + 1))
    if ns.json:
        print(json.dumps(rows, sort_keys=True))
    else:
        for r in rows:
            print(f"n={r['n']}\tcT(prod)={r['cT_product']}\tcT(a)+card(a)={r['cT_a'] + r['card_a']}\t{'ok' if r['holds'] else 'FAIL'}")
    return OK if all(r["holds"] for r in rows) else FAILED


def cmd_dot(ns) -> int:
    if ns.dag:
        g = parse_dag(_read(ns.expr))
    else:
        try:
            lit = parse_literal(ns.expr)
        except PcsfSyntaxError as e:
            raise UsageError(f"bad set literal: {e}") from None
        store = Store()
        g = store.export_dag(to_node(store, lit))
    sys.stdout.write(to_dot(g))
    return OK


# -- parser ----------------------------------------------------------------------


def _caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=10**6, help="store capacity (default 10^6)")
    p.add_argument("--max-steps", type=int, default=10**7, help="evaluation step cap (default 10^7)")
    p.add_argument("--no-intrinsics", action="store_true", help="interpret apply/restrict/image instead of using native lookups")


def _profile(p: argparse.ArgumentParser) -> None:
    p.add_argument("--profile", choices=("pcsf", "pcsf-prime"), default="pcsf")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcsf", description="Predicatively computable set functions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check", help="parse and check a .pcsf file")
    p.add_argument("file", help="source file, or 'stdlib' for the shipped library")
    _profile(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", help="evaluate a function on literal arguments")
    p.add_argument("file")
    p.add_argument("fn")
    p.add_argument("args", help="argument tuple, e.g. '(#3 / {#0})'")
    p.add_argument("--cost", action="store_true", help="print the cost record to stderr as JSON")
    p.add_argument("--sets", action="store_true", help="print plain sets, no string decoding")
    _profile(p)
    _caps(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("compile-bc", help="compile a .bc program to pcsf source")
    p.add_argument("file", help="B source file, or 'corpus' for the shipped examples")
    p.add_argument("--fn", default=None, help="emit only this function and its dependencies")
    _profile(p)
    p.set_defaults(run=cmd_compile_bc)

    p = sub.add_parser("eval-bc", help="evaluate a B function on string literals")
    p.add_argument("file")
    p.add_argument("fn")
    p.add_argument("args", help="e.g. '(\"101\"b / \"1\"b)'")
    p.add_argument("--compiled", action="store_true", help="run the compiled pcsf program and decode")
    _profile(p)
    p.set_defaults(run=cmd_eval_bc)

    p = sub.add_parser("bisim", help="decide bisimilarity of two DAG files")
    p.add_argument("dag1")
    p.add_argument("dag2")
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("collapse", help="print the fully collapsed form of a DAG file")
    p.add_argument("dag")
    p.set_defaults(run=cmd_collapse)

    p = sub.add_parser("audit", help="empirical size-bound audit")
    p.add_argument("file")
    p.add_argument("fn", help="function name, or 'all'")
    p.add_argument("--gen", required=True, help="numeral:N, nu:L or random:R")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixed", type=int, default=2, help="numeral used for the fixed arguments")
    p.add_argument("--threshold", type=float, default=4.0, help="largest accepted fitted degree")
    p.add_argument("--json", action="store_true")
    _profile(p)
    _caps(p)
    p.set_defaults(run=cmd_audit)

    p = sub.add_parser("corollary", help="cT({0} x a_n) against cT(a_n) + card(a_n)")
    p.add_argument("--low", type=int, default=4)
    p.add_argument("--high", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_corollary)

    p = sub.add_parser("dot", help="graphviz DOT for a set literal or DAG file")
    p.add_argument("expr", help="set literal such as '{#2, <#0, #1>}', or a DAG file with --dag")
    p.add_argument("--dag", action="store_true")
    p.set_defaults(run=cmd_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return ns.run(ns)
    except UsageError as e:
        print(f"pcsf: {e}", file=sys.stderr)
        return USAGE
    except PcsfError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAILED
    except PcsfSyntaxError as e:
        print(f"error: {e.line}:{e.col}: SyntaxError: {e.msg_text}", file=sys.stderr)
        return FAILED
    except (DagError, NotInImage, GeneratorError, StoreCapacityError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return FAILED


run = main

if __name__ == "__main__":
    sys.exit(main())
