"""Membership of lasso words in SLAA languages.

A run of an SLAA over ``u`` decomposes along the partial order of states: a
copy of state ``s`` reading from position ``i`` either leaves ``s`` after
finitely many self-loops or loops forever.  Acceptance is therefore decided
per state, bottom-up, on the *loop graph* of ``s``: nodes are folded word
positions and edges are usable self-loops, i.e. loops whose other
destination states accept from the next position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ltl2slaa.ltl.formula import Formula
from ltl2slaa.ltl.lasso import AlphabetError, LassoWord, eval_lasso
from ltl2slaa.slaa import MinimalModel, Slaa


def _check_alphabet(a: Slaa, w: LassoWord) -> None:
    if w.ap is not None and not set(a.ap) <= set(w.ap):
        missing = sorted(set(a.ap) - set(w.ap))
        raise AlphabetError(f"automaton propositions {missing} not in word alphabet")


def acceptance_table(a: Slaa, w: LassoWord) -> list[list[bool]]:
    """``table[s][i]``: whether a copy of ``s`` starting at folded position ``i`` accepts."""
    _check_alphabet(a, w)
    props = frozenset(a.ap)
    letters = [x & props for x in w.letters()]
    size = len(letters)
    succ = [w.successor(i) for i in range(size)]
    table: list[list[bool] | None] = [None] * len(a.states)
    for s in a.order:
        table[s] = _state_acceptance(a, s, letters, succ, table)
    return table  # type: ignore[return-value]


def _state_acceptance(a: Slaa, s: int, letters, succ, table) -> list[bool]:
    size = len(letters)
    edges: list[list[frozenset[int]]] = [[] for _ in range(size)]
    escape = [False] * size
    for i in range(size):
        j = succ[i]
        for t in a.by_letter[s].get(letters[i], ()):
            if all(table[d][j] for d in t.dest if d != s):
                if s in t.dest:
                    edges[i].append(t.marks)
                else:
                    escape[i] = True
    # leave s: reach an escaping position along usable loops
    good = list(escape)
    # stay in s: reach a nontrivial SCC satisfying some minimal model
    for o in a.state_models(s):
        for i in _accepting_sccs(edges, succ, o):
            good[i] = True
    # propagate backwards along loop edges
    changed = True
    while changed:
        changed = False
        for i in range(size):
            if not good[i] and edges[i] and good[succ[i]]:
                good[i] = True
                changed = True
    return good


def _accepting_sccs(edges, succ, o: MinimalModel) -> list[int]:
    """Positions lying in an SCC that, after deleting edges with ``Fin(O)`` marks,
    has an internal edge and covers ``Inf(O)``."""
    size = len(edges)
    kept = [[m for m in edges[i] if not (m & o.fin_marks)] for i in range(size)]
    # each node has at most one successor, so SCCs with an edge are simple cycles
    result = []
    seen_cycle = [False] * size
    for start in range(size):
        if seen_cycle[start] or not kept[start]:
            continue
        path = []
        i = start
        while kept[i] and i not in path:
            path.append(i)
            i = succ[i]
        if not kept[i] or i not in path:
            continue
        cycle = path[path.index(i):]
        for c in cycle:
            seen_cycle[c] = True
        marks = frozenset().union(*(m for c in cycle for m in kept[c]))
        if o.inf_marks <= marks:
            result.extend(cycle)
    return result


def membership(a: Slaa, w: LassoWord) -> bool:
    """Whether ``a`` accepts the lasso word ``w``."""
    return acceptance_table(a, w)[a.initial][0]


@dataclass(frozen=True)
class Disagreement:
    formula: Formula
    word: LassoWord
    expected: bool
    actual: bool

    def __str__(self) -> str:
        return f"{self.formula} on {self.word}: formula says {self.expected}, automaton says {self.actual}"


def cross_check(f: Formula, a: Slaa, words: Iterable[LassoWord]) -> list[Disagreement]:
    """Words on which the automaton and the formula disagree."""
    out = []
    for w in words:
        expected = eval_lasso(f, w)
        actual = membership(a, w)
        if expected != actual:
            out.append(Disagreement(f, w, expected, actual))
    return out


def formula_cross_check(f: Formula, g: Formula, words: Sequence[LassoWord]) -> list[LassoWord]:
    """Words distinguishing two formulae."""
    return [w for w in words if eval_lasso(f, w) != eval_lasso(g, w)]
