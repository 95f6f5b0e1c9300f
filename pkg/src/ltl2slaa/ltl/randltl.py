"""Random LTL formulae in the style of a classic tree-size generator.

A formula of size ``n`` is a leaf when ``n == 1``, a unary operator over a
formula of size ``n - 1`` when ``n == 2``, and a unary or binary operator when
``n >= 3``; binary operators split the remaining ``n - 1`` nodes uniformly
between their operands.  Operators are drawn proportionally to their priority.

Generation happens on a *surface* tree of nested tuples that still contains
negation, implication, equivalence, xor, W and M; :func:`surface_to_formula`
converts it to a PNF :class:`Formula`.
"""

from __future__ import annotations

import random
from typing import Mapping

from ltl2slaa.ltl.formula import (
    Formula,
    always,
    ap,
    conj,
    disj,
    eventually,
    ff,
    negate,
    next_,
    release,
    tt,
    until,
)

LEAVES = ("ap", "false", "true")
UNARY = ("not", "F", "G", "X")
BINARY = ("equiv", "implies", "xor", "R", "U", "W", "M", "and", "or")

DEFAULT_PRIORITIES: dict[str, int] = {
    "ap": 3, "false": 1, "true": 1,
    "not": 1, "F": 1, "G": 1, "X": 1,
    "equiv": 1, "implies": 1, "xor": 1,
    "R": 1, "U": 1, "W": 1, "M": 1,
    "and": 1, "or": 1,
}


def _preset(**overrides: int) -> dict[str, int]:
    prio = dict(DEFAULT_PRIORITIES)
    prio.update(overrides)
    return prio


PRESETS: dict[str, dict[str, int]] = {
    "rand1": _preset(),
    "rand2": _preset(F=2, G=2),
    "rand4": _preset(F=4, G=4),
    "randfg": _preset(F=2, G=2, X=0, U=0, R=0, W=0, M=0),
}


def ap_names(count: int) -> tuple[str, ...]:
    if count <= 26:
        return tuple(chr(ord("a") + i) for i in range(count))
    return tuple(f"p{i}" for i in range(count))


def _pick(rng: random.Random, ops: tuple[str, ...], prio: Mapping[str, int]) -> str:
    weights = [prio.get(op, 0) for op in ops]
    return rng.choices(ops, weights=weights)[0]


def random_surface(
    rng: random.Random,
    ap_count: int,
    tree_size: int,
    priorities: Mapping[str, int],
) -> tuple:
    """Random surface tree with exactly ``tree_size`` nodes (when operators allow)."""
    props = ap_names(ap_count)
    leaf_w = sum(priorities.get(op, 0) for op in LEAVES)
    unary_w = sum(priorities.get(op, 0) for op in UNARY)
    binary_w = sum(priorities.get(op, 0) for op in BINARY)
    if leaf_w <= 0:
        raise ValueError("at least one leaf operator needs a positive priority")

    def gen(n: int) -> tuple:
        if n == 1 or (n == 2 and unary_w <= 0) or (unary_w <= 0 and binary_w <= 0):
            op = _pick(rng, LEAVES, priorities)
            return ("ap", rng.choice(props)) if op == "ap" else (op,)
        if n == 2 or binary_w <= 0:
            return (_pick(rng, UNARY, priorities), gen(n - 1))
        op = _pick(rng, UNARY + BINARY, priorities)
        if op in UNARY:
            return (op, gen(n - 1))
        left = rng.randint(1, n - 2)
        return (op, gen(left), gen(n - 1 - left))

    return gen(tree_size)


def surface_size(t: tuple) -> int:
    if t[0] == "ap":
        return 1
    return 1 + sum(surface_size(c) for c in t[1:])


def surface_to_formula(t: tuple) -> Formula:
    op = t[0]
    if op == "ap":
        return ap(t[1])
    if op == "true":
        return tt()
    if op == "false":
        return ff()
    args = [surface_to_formula(c) for c in t[1:]]
    if op == "not":
        return negate(args[0])
    if op == "X":
        return next_(args[0])
    if op == "F":
        return eventually(args[0])
    if op == "G":
        return always(args[0])
    left, right = args
    if op == "and":
        return conj(left, right)
    if op == "or":
        return disj(left, right)
    if op == "implies":
        return disj(negate(left), right)
    if op == "equiv":
        return disj(conj(left, right), conj(negate(left), negate(right)))
    if op == "xor":
        return disj(conj(left, negate(right)), conj(negate(left), right))
    if op == "U":
        return until(left, right)
    if op == "R":
        return release(left, right)
    if op == "W":
        return release(right, disj(right, left))
    if op == "M":
        return until(right, conj(left, right))
    raise ValueError(f"unknown surface operator {op!r}")


_INFIX = {"and": "&", "or": "|", "implies": "->", "equiv": "<->", "U": "U", "R": "R", "W": "W", "M": "M"}


def surface_to_text(t: tuple) -> str:
    """Fully parenthesized text; xor is spelled out since the parser has no xor."""
    op = t[0]
    if op == "ap":
        return t[1]
    if op in ("true", "false"):
        return op
    if op == "not":
        return f"!({surface_to_text(t[1])})"
    if op in ("X", "F", "G"):
        return f"{op}({surface_to_text(t[1])})"
    left, right = surface_to_text(t[1]), surface_to_text(t[2])
    if op == "xor":
        return f"!(({left}) <-> ({right}))"
    return f"(({left}) {_INFIX[op]} ({right}))"


def random_formula(
    seed: int,
    ap_count: int,
    tree_size: int,
    priorities: Mapping[str, int] | str = "rand1",
) -> Formula:
    """Deterministic random PNF formula; ``priorities`` may name a preset."""
    if ap_count < 1 or tree_size < 1:
        raise ValueError("ap_count and tree_size must be positive")
    prio = PRESETS[priorities] if isinstance(priorities, str) else priorities
    if not any(v > 0 for v in prio.values()):
        raise ValueError("all operator priorities are zero")
    return surface_to_formula(random_surface(random.Random(seed), ap_count, tree_size, prio))
