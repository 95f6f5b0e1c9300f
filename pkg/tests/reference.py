"""Deliberately naive reference implementations used as test oracles.

Nothing here shares code with the library's algorithms: formulas are
evaluated straight from the semantic definitions over surface syntax trees,
minimal models by subset enumeration, and SLAA membership by the recursive
Emerson-Lei SCC procedure on an explicit graph.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from ltl2slaa.ltl.formula import (
    ALWAYS, AND, AP, EVENTUALLY, FF, NAP, NEXT, OR, RELEASE, TT, UNTIL, Formula,
)
from ltl2slaa.ltl.lasso import LassoWord
from ltl2slaa.slaa import (
    ACC_AND, ACC_OR, FIN, INF, TRUE, Acc, Mark, MinimalModel, Slaa, Transition,
    acc_and, acc_marks, acc_or, fin, inf,
)


# -- LTL semantics by definition -------------------------------------------------

def _positions(w: LassoWord, i: int) -> range:
    """Positions j >= i that represent every distinct suffix reachable from i."""
    return range(i, max(i, len(w.prefix)) + len(w.period))


def _fold(w: LassoWord, i: int) -> int:
    n, p = len(w.prefix), len(w.period)
    return i if i < n else n + (i - n) % p


def surface_holds(t: tuple, w: LassoWord, i: int = 0) -> bool:
    """Satisfaction of a surface syntax tree (see ``randltl``) at position ``i``."""

    @lru_cache(maxsize=None)
    def sat(node: tuple, pos: int) -> bool:
        pos = _fold(w, pos)
        op = node[0]
        if op == "ap":
            return node[1] in w.letter(pos)
        if op == "true":
            return True
        if op == "false":
            return False
        if op == "not":
            return not sat(node[1], pos)
        if op == "X":
            return sat(node[1], pos + 1)
        if op == "F":
            return any(sat(node[1], j) for j in _positions(w, pos))
        if op == "G":
            return all(sat(node[1], j) for j in _positions(w, pos))
        left, right = node[1], node[2]
        if op == "and":
            return sat(left, pos) and sat(right, pos)
        if op == "or":
            return sat(left, pos) or sat(right, pos)
        if op == "implies":
            return not sat(left, pos) or sat(right, pos)
        if op == "equiv":
            return sat(left, pos) == sat(right, pos)
        if op == "xor":
            return sat(left, pos) != sat(right, pos)
        if op in ("U", "M"):
            # M: right U (left & right)
            goal = (lambda j: sat(right, j) and sat(left, j)) if op == "M" else (lambda j: sat(right, j))
            hold = (lambda k: sat(right, k)) if op == "M" else (lambda k: sat(left, k))
            return any(
                goal(j) and all(hold(k) for k in range(pos, j)) for j in _positions(w, pos)
            )
        if op in ("R", "W"):
            # a R b: b holds until and including the first a (or forever)
            # a W b: a holds until b (or forever)
            keep = (lambda j: sat(right, j)) if op == "R" else (lambda j: sat(left, j) or sat(right, j))
            stop = (lambda k: sat(left, k)) if op == "R" else (lambda k: sat(right, k))
            for j in _positions(w, pos):
                if op == "R" and not keep(j):
                    return False
                if op == "W" and not sat(left, j) and not sat(right, j):
                    return False
                if stop(j):
                    return True
            return True
        raise ValueError(op)

    return sat(t, i)


def formula_to_surface(f: Formula) -> tuple:
    """Surface tree of a PNF formula (binary ands/ors), for the reference evaluator."""
    op = f.op
    if op == TT:
        return ("true",)
    if op == FF:
        return ("false",)
    if op == AP:
        return ("ap", f.name)
    if op == NAP:
        return ("not", ("ap", f.name))
    if op in (AND, OR):
        name = "and" if op == AND else "or"
        args = [formula_to_surface(a) for a in f.args]
        out = args[0]
        for a in args[1:]:
            out = (name, out, a)
        return out
    if op in (NEXT, EVENTUALLY, ALWAYS):
        return (op, formula_to_surface(f.arg))
    if op in (UNTIL, RELEASE):
        return (op, formula_to_surface(f.left), formula_to_surface(f.right))
    raise ValueError(op)


def formula_holds(f: Formula, w: LassoWord) -> bool:
    return surface_holds(formula_to_surface(f), w)


# -- minimal models by enumeration ----------------------------------------------

def _mentions(phi: Acc) -> set[tuple[str, int]]:
    if phi.op in (FIN, INF):
        return {(phi.op, phi.mark)}
    return set().union(*(_mentions(a) for a in phi.args)) if phi.args else set()


def _terms_satisfy(phi: Acc, chosen: frozenset) -> bool:
    if phi.op in (FIN, INF):
        return (phi.op, phi.mark) in chosen
    if phi.op == ACC_AND:
        return all(_terms_satisfy(a, chosen) for a in phi.args)
    if phi.op == ACC_OR:
        return any(_terms_satisfy(a, chosen) for a in phi.args)
    return phi.op == TRUE


def brute_force_minimal_models(phi: Acc) -> set[MinimalModel]:
    terms = sorted(_mentions(phi))
    satisfying = [
        frozenset(c)
        for r in range(len(terms) + 1)
        for c in itertools.combinations(terms, r)
        if _terms_satisfy(phi, frozenset(c))
    ]
    minimal = [c for c in satisfying if not any(d < c for d in satisfying)]
    return {
        MinimalModel(frozenset(m for o, m in c if o == FIN), frozenset(m for o, m in c if o == INF))
        for c in minimal
    }


def acc_holds(phi: Acc, recurring: frozenset[int]) -> bool:
    if phi.op == FIN:
        return phi.mark not in recurring
    if phi.op == INF:
        return phi.mark in recurring
    if phi.op == ACC_AND:
        return all(acc_holds(a, recurring) for a in phi.args)
    if phi.op == ACC_OR:
        return any(acc_holds(a, recurring) for a in phi.args)
    return phi.op == TRUE


def random_acc(rng: random.Random, marks: int, depth: int = 3) -> Acc:
    if depth == 0 or rng.random() < 0.3:
        m = rng.randrange(marks)
        return fin(m) if rng.random() < 0.5 else inf(m)
    parts = [random_acc(rng, marks, depth - 1) for _ in range(rng.randint(2, 3))]
    return acc_and(*parts) if rng.random() < 0.5 else acc_or(*parts)


# -- SLAA membership by recursive Emerson-Lei ------------------------------------

def _sccs(nodes, edges):
    """Strongly connected components of a small graph (plain recursive Tarjan)."""
    index, low, stack, on, out = {}, {}, [], set(), []
    counter = [0]

    def visit(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for (a, b, _m) in edges:
            if a != v:
                continue
            if b not in index:
                visit(b)
                low[v] = min(low[v], low[b])
            elif b in on:
                low[v] = min(low[v], index[b])
        if low[v] == index[v]:
            comp = set()
            while True:
                x = stack.pop()
                on.discard(x)
                comp.add(x)
                if x == v:
                    break
            out.append(comp)

    for v in nodes:
        if v not in index:
            visit(v)
    return out


def _has_accepting_cycle(nodes, edges, phi: Acc) -> bool:
    for comp in _sccs(nodes, edges):
        inner = [e for e in edges if e[0] in comp and e[1] in comp]
        if not inner:
            continue
        marks = frozenset().union(*(e[2] for e in inner))
        if acc_holds(phi, marks):
            return True
        for m in marks:
            if _has_accepting_cycle(comp, [e for e in inner if m not in e[2]], phi):
                return True
    return False


def naive_membership(a: Slaa, w: LassoWord) -> bool:
    props = frozenset(a.ap)
    size = len(w)
    letters = [w.letter(i) & props for i in range(size)]
    accept: dict[tuple[int, int], bool] = {}

    def state_accepts(s: int, i: int) -> bool:
        if (s, i) in accept:
            return accept[s, i]
        nodes = list(range(size))
        edges = []
        exits = set()
        for j in range(size):
            nxt = w.successor(j)
            for t in a.transitions:
                if t.source != s or t.letter != letters[j]:
                    continue
                if all(state_accepts(d, nxt) for d in t.dest if d != s):
                    if s in t.dest:
                        edges.append((j, nxt, t.marks))
                    else:
                        exits.add(j)
        reach = {i}
        frontier = [i]
        while frontier:
            v = frontier.pop()
            for (x, y, _m) in edges:
                if x == v and y not in reach:
                    reach.add(y)
                    frontier.append(y)
        result = bool(reach & exits) or _has_accepting_cycle(
            sorted(reach), [e for e in edges if e[0] in reach], a.acceptance
        )
        accept[s, i] = result
        return result

    return state_accepts(a.initial, 0)


def random_slaa(rng: random.Random, ap=("a", "b"), max_states: int = 4, max_marks: int = 3) -> Slaa:
    """Random SLAA; state ``i`` only targets states ``<= i`` so state 0 is the bottom."""
    from ltl2slaa.slaa import all_letters

    n = rng.randint(1, max_states)
    k = rng.randint(1, max_marks)
    transitions = []
    for s in range(n):
        for letter in all_letters(ap):
            for _ in range(rng.choice((0, 1, 1, 2, 3))):
                dest = {d for d in range(s + 1) if rng.random() < 0.35}
                marks = {m for m in range(k) if rng.random() < 0.35}
                transitions.append(Transition(s, letter, frozenset(marks), frozenset(dest)))
    phi = random_acc(rng, k)
    marks = tuple(Mark("test", index=(i,)) for i in range(k))
    return Slaa(tuple(f"q{i}" for i in range(n)), tuple(ap), marks, tuple(transitions), n - 1, phi)
