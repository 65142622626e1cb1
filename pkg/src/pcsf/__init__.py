"""Predicatively computable set functions over hereditarily finite sets."""
from .checker import check, complexity
from .evaluator import EvalCost, Evaluator, eval
from .hfset import ExplicitDag, SetNode, Store, bisimilar, choose_max, collapse
from .literals import decode_nu, encode_nu
from .nested import NestedSet, from_nested, to_nested
from .oracle import eval_naive
from .syntax import PcsfDef, PcsfProgram, parse

__all__ = [
    "EvalCost", "Evaluator", "ExplicitDag", "NestedSet", "PcsfDef", "PcsfProgram", "SetNode", "Store",
    "bisimilar", "check", "choose_max", "collapse", "complexity", "decode_nu", "encode_nu", "eval",
    "eval_naive", "from_nested", "parse", "to_nested",
]
