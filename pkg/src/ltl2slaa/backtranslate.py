"""SLAA to LTL.

For each state ``s`` (successors first) the formula ``phi(s)`` says: either a
run leaves ``s`` after finitely many self-loops (``phi1``), or it loops in
``s`` forever (``phi2``) and the looping branch satisfies some minimal model
of the acceptance formula (``phi3``).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ltl2slaa.ltl.formula import (
    Formula,
    always,
    ap,
    conj,
    disj,
    eventually,
    nap,
    next_,
    until,
)
from ltl2slaa.slaa import Slaa, Transition


def letter_formula(letter: Iterable[str], ap_universe: Sequence[str]) -> Formula:
    """The minterm fixing every proposition of ``ap_universe``."""
    letter = frozenset(letter)
    extra = letter - set(ap_universe)
    if extra:
        raise ValueError(f"letter mentions {sorted(extra)} outside the universe")
    return conj(*(ap(a) if a in letter else nap(a) for a in ap_universe))


def slaa_to_ltl(a: Slaa) -> Formula:
    """An LTL formula with the same language as ``a``."""
    phi: dict[int, Formula] = {}
    minterms = {letter: letter_formula(letter, a.ap) for letter in a.letters()}

    def step(t: Transition, drop: int | None) -> Formula:
        rest = [phi[d] for d in sorted(t.dest) if d != drop]
        return conj(minterms[t.letter], next_(conj(*rest)))

    for s in a.order:
        loops = [t for t in a.outgoing[s] if t.is_loop]
        leaves = [t for t in a.outgoing[s] if not t.is_loop]
        stay = disj(*(step(t, s) for t in loops))
        phi1 = until(stay, disj(*(step(t, None) for t in leaves)))
        phi2 = always(stay)
        options = []
        for o in a.state_models(s):
            allowed = [t for t in loops if not (t.marks & o.fin_marks)]
            parts = []
            if o.fin_marks:
                parts.append(eventually(always(disj(*(step(t, s) for t in allowed)))))
            for m in sorted(o.inf_marks):
                parts.append(always(eventually(
                    disj(*(step(t, s) for t in allowed if m in t.marks))
                )))
            options.append(conj(*parts))
        phi3 = disj(*options)
        phi[s] = disj(phi1, conj(phi2, phi3))
    return phi[a.initial]
