"""Translate LTL into self-loop alternating automata with Emerson-Lei acceptance."""

from ltl2slaa.backtranslate import letter_formula, slaa_to_ltl
from ltl2slaa.hoa import emit_dot, emit_hoa, parse_hoa
from ltl2slaa.ltl import LassoWord, eval_lasso, parse, parse_lasso, random_formula
from ltl2slaa.oracle import cross_check, membership
from ltl2slaa.simplify import simplify
from ltl2slaa.slaa import Slaa, minimal_models, stats, validate
from ltl2slaa.translate import translate, translate_basic, translate_f, translate_fg

__version__ = "0.1.0"

__all__ = [
    "LassoWord", "Slaa", "cross_check", "emit_dot", "emit_hoa", "eval_lasso",
    "letter_formula", "membership", "minimal_models", "parse", "parse_hoa",
    "parse_lasso", "random_formula", "simplify", "slaa_to_ltl", "stats",
    "translate", "translate_basic", "translate_f", "translate_fg", "validate",
]
