"""LTL formulae: syntax, parsing, lasso-word semantics and random generation."""

from ltl2slaa.ltl.formula import (
    Formula,
    always,
    ap,
    atomic_propositions,
    collect_f_and_u,
    conj,
    conjuncts,
    disj,
    dnf_decompose,
    eventually,
    ff,
    is_mergeable,
    is_state_formula,
    is_temporal,
    nap,
    negate,
    next_,
    release,
    subformulae,
    to_text,
    tree_size,
    tt,
    until,
)
from ltl2slaa.ltl.lasso import (
    AlphabetError,
    LassoWord,
    eval_lasso,
    format_lasso,
    parse_lasso,
    random_lasso,
)
from ltl2slaa.ltl.parser import ParseError, parse
from ltl2slaa.ltl.randltl import PRESETS, random_formula

__all__ = [
    "AlphabetError", "Formula", "LassoWord", "PRESETS", "ParseError",
    "always", "ap", "atomic_propositions", "collect_f_and_u", "conj", "conjuncts",
    "disj", "dnf_decompose", "eval_lasso", "eventually", "ff", "format_lasso",
    "is_mergeable", "is_state_formula", "is_temporal", "nap", "negate", "next_",
    "parse", "parse_lasso", "random_formula", "random_lasso", "release",
    "subformulae", "to_text", "tree_size", "tt", "until",
]
