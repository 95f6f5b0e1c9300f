"""LTL to SLAA translations: basic, F-merging and F,G-merging.

Successor sets are sets of ``(marks, configuration)`` pairs where marks are
integer ids and configurations are frozensets of formulae.  Transitions are
computed for every letter over the atomic propositions of the root formula.
"""

from __future__ import annotations

from collections import deque
from functools import reduce
from typing import Iterable

from ltl2slaa.ltl.formula import (
    ALWAYS,
    AND,
    AP,
    EVENTUALLY,
    FF,
    NAP,
    NEXT,
    OR,
    RELEASE,
    TT,
    UNTIL,
    Formula,
    atomic_propositions,
    collect_f_and_u,
    conjuncts,
    dnf_decompose,
    is_state_formula,
    is_temporal,
    subformulae,
)
from ltl2slaa.simplify import prune_entries, prune_unused_marks
from ltl2slaa.slaa import (
    Acc,
    Mark,
    Slaa,
    Transition,
    acc_and,
    acc_or,
    all_letters,
    fin,
    inf,
    minimal_models,
    substitute,
)

Entry = tuple[frozenset[int], frozenset[Formula]]
SuccessorSet = frozenset[Entry]

NO_MARKS: frozenset[int] = frozenset()
NO_STATES: frozenset[Formula] = frozenset()
TRUE_SUCC: SuccessorSet = frozenset({(NO_MARKS, NO_STATES)})
EMPTY_SUCC: SuccessorSet = frozenset()

BASIC = "basic"
F_MERGING = "f"
FG_MERGING = "fg"
MODES = (BASIC, F_MERGING, FG_MERGING)


def product(p: Iterable[Entry], q: Iterable[Entry]) -> SuccessorSet:
    q = tuple(q)
    return frozenset((m1 | m2, c1 | c2) for m1, c1 in p for m2, c2 in q)


def product_all(sets: Iterable[Iterable[Entry]]) -> SuccessorSet:
    return reduce(product, sets, TRUE_SUCC)


def marks_erase(p: Iterable[Entry]) -> SuccessorSet:
    return frozenset((NO_MARKS, c) for _, c in p)


def delta_L(clause: frozenset[Formula], succ: Iterable[Entry]) -> SuccessorSet:
    """Entries whose configuration contains the whole clause, with the clause removed."""
    return frozenset((m, c - clause) for m, c in succ if clause <= c)


def delta_NL(clause: frozenset[Formula], succ: Iterable[Entry]) -> SuccessorSet:
    return frozenset((m, c) for m, c in succ if not clause <= c)


def is_mergeable_g(f: Formula) -> bool:
    """Whether ``G psi`` gets the merged rule: every conjunct is temporal or a state formula."""
    return f.op == ALWAYS and all(
        is_temporal(c) or is_state_formula(c) for c in conjuncts(f.arg)
    )


def _entry_key(e: Entry) -> tuple:
    return (tuple(sorted(s.sort_key() for s in e[1])), tuple(sorted(e[0])))


class Translator:
    """Shared machinery of the three translations.

    ``mode`` selects the rules for ``F`` and ``G``; ``reuse_marks`` enables
    sharing of clause marks between ``F`` subformulae (F-merging only);
    ``prune`` removes dominated successors of each state during construction.
    """

    def __init__(self, root: Formula, mode: str = FG_MERGING, *, reuse_marks: bool = False,
                 prune: bool = True):
        if mode not in MODES:
            raise ValueError(f"unknown translation mode {mode!r}")
        if reuse_marks and mode != F_MERGING:
            raise ValueError("mark reuse is only defined for F-merging")
        self.root = root
        self.mode = mode
        self.reuse_marks = reuse_marks
        self.prune = prune
        self.ap = atomic_propositions(root)
        self.marks: list[Mark] = []
        self._mark_id: dict[Mark, int] = {}
        self._memo: dict[tuple[Formula, frozenset[str]], SuccessorSet] = {}
        self._clauses: dict[Formula, tuple[frozenset[Formula], ...]] = {}
        self._clause_marks: dict[tuple[Formula, frozenset[Formula]], frozenset[int]] = {}
        self.acceptance = self._declare_marks()

    # -- marks -----------------------------------------------------------------

    def _mark(self, mark: Mark) -> int:
        if mark not in self._mark_id:
            self._mark_id[mark] = len(self.marks)
            self.marks.append(mark)
        return self._mark_id[mark]

    def clauses(self, f: Formula) -> tuple[frozenset[Formula], ...]:
        if f not in self._clauses:
            self._clauses[f] = dnf_decompose(f.arg)
        return self._clauses[f]

    def _declare_marks(self) -> Acc:
        fs, us = collect_f_and_u(self.root)
        if self.mode == BASIC:
            return fin(self._mark(Mark("U-loop")))
        if self.mode == F_MERGING:
            loop = fin(self._mark(Mark("U-loop")))
            if self.reuse_marks:
                return acc_and(loop, self._declare_reused(fs))
            parts = [loop]
            for f in sorted(fs, key=Formula.sort_key):
                ids = []
                for k in self.clauses(f):
                    ids.append(self._mark(Mark("F-clause", f, k)))
                for k in self.clauses(f):
                    self._clause_marks[f, k] = frozenset(
                        self._mark_id[Mark("F-clause", f, k2)] for k2 in self.clauses(f) if k2 != k
                    )
                parts.append(acc_or(*map(fin, ids)))
            return acc_and(*parts)
        parts = []
        for g in sorted(fs | us, key=Formula.sort_key):
            if g.op == UNTIL:
                one = self._mark(Mark("U-loop", g))
                box = self._mark(Mark("G-escape", g))
                parts.append(acc_or(fin(one), inf(box)))
                continue
            one = self._mark(Mark("F-loop", g))
            box = self._mark(Mark("G-escape", g))
            ids = [self._mark(Mark("F-clause", g, k)) for k in self.clauses(g)]
            for k, i in zip(self.clauses(g), ids):
                self._clause_marks[g, k] = frozenset(ids) - {i}
            parts.append(acc_or(acc_and(fin(one), acc_or(*map(fin, ids))), inf(box)))
        return acc_and(*parts)

    def _declare_reused(self, fs: frozenset[Formula]) -> Acc:
        # F subformulae whose loops can end up on the same branch are those
        # linked by clause membership; each such group gets distinct pools,
        # pools are shared across groups.
        ordered = sorted(fs, key=Formula.sort_key)
        parent = {f: f for f in ordered}

        def find(f):
            while parent[f] is not f:
                f = parent[f]
            return f

        for f in ordered:
            for k in self.clauses(f):
                for g in k:
                    if g.op == EVENTUALLY:
                        parent[find(g)] = find(f)
        pool_of: dict[Formula, int] = {}
        used: dict[Formula, int] = {}
        for f in ordered:
            root = find(f)
            pool_of[f] = used.get(root, 0)
            used[root] = pool_of[f] + 1
        sizes: dict[int, int] = {}
        for f in ordered:
            sizes[pool_of[f]] = max(sizes.get(pool_of[f], 0), len(self.clauses(f)))
        parts = []
        for pool in sorted(sizes):
            ids = [self._mark(Mark("F-clause", index=(pool, i))) for i in range(sizes[pool])]
            parts.append(acc_or(*map(fin, ids)))
        for f in ordered:
            pool = pool_of[f]
            ids = frozenset(self._mark_id[Mark("F-clause", index=(pool, i))] for i in range(sizes[pool]))
            for i, k in enumerate(self.clauses(f)):
                self._clause_marks[f, k] = ids - {self._mark_id[Mark("F-clause", index=(pool, i))]}
        return acc_and(*parts)

    def _loop_mark(self, f: Formula) -> int:
        if self.mode == FG_MERGING:
            return self._mark_id[Mark("U-loop" if f.op == UNTIL else "F-loop", f)]
        return self._mark_id[Mark("U-loop")]

    # -- transition function ---------------------------------------------------

    def delta(self, f: Formula, letter: frozenset[str]) -> SuccessorSet:
        key = (f, letter)
        result = self._memo.get(key)
        if result is None:
            result = self._delta(f, letter)
            self._memo[key] = result
        return result

    def _delta(self, f: Formula, letter: frozenset[str]) -> SuccessorSet:
        op = f.op
        if op == TT:
            return TRUE_SUCC
        if op == FF:
            return EMPTY_SUCC
        if op == AP:
            return TRUE_SUCC if f.name in letter else EMPTY_SUCC
        if op == NAP:
            return EMPTY_SUCC if f.name in letter else TRUE_SUCC
        if op == AND:
            return marks_erase(product_all(self.delta(a, letter) for a in f.args))
        if op == OR:
            return marks_erase(frozenset().union(*(self.delta(a, letter) for a in f.args)))
        if op == NEXT:
            return frozenset({(NO_MARKS, frozenset((f.arg,)))})
        if op == UNTIL:
            loop = frozenset({(frozenset((self._loop_mark(f),)), frozenset((f,)))})
            return marks_erase(self.delta(f.right, letter)) | product(
                loop, marks_erase(self.delta(f.left, letter))
            )
        if op == RELEASE:
            right = self.delta(f.right, letter)
            stay = frozenset({(NO_MARKS, frozenset((f,)))})
            return marks_erase(product(self.delta(f.left, letter), right)) | marks_erase(
                product(stay, right)
            )
        if op == EVENTUALLY:
            if self.mode == BASIC:
                loop = frozenset({(frozenset((self._loop_mark(f),)), frozenset((f,)))})
                return marks_erase(self.delta(f.arg, letter)) | loop
            return self._delta_merged_f(f, letter)
        if op == ALWAYS:
            if self.mode == FG_MERGING and is_mergeable_g(f):
                return self._delta_merged_g(f, letter)
            stay = frozenset({(NO_MARKS, frozenset((f,)))})
            return marks_erase(product(stay, self.delta(f.arg, letter)))
        raise ValueError(f"unknown operator {op!r}")

    def clause_successors(self, clause: frozenset[Formula], letter: frozenset[str]) -> SuccessorSet:
        """Successors of the conjunction of ``clause``, keeping the members' marks."""
        members = sorted(clause, key=Formula.sort_key)
        return product_all(self.delta(g, letter) for g in members)

    def _delta_merged_f(self, f: Formula, letter: frozenset[str]) -> SuccessorSet:
        here = frozenset((f,))
        result = {(frozenset((self._loop_mark(f),)), here)}
        for k in self.clauses(f):
            succ = self.clause_successors(k, letter)
            result |= marks_erase(delta_NL(k, succ))
            result |= product({(self._clause_marks[f, k], here)}, delta_L(k, succ))
        return frozenset(result)

    def _delta_merged_g(self, f: Formula, letter: frozenset[str]) -> SuccessorSet:
        result: SuccessorSet = frozenset({(NO_MARKS, frozenset((f,)))})
        for g in conjuncts(f.arg):
            own = frozenset((g,))
            succ = self.delta(g, letter)
            if g.op in (EVENTUALLY, UNTIL):
                escape = frozenset((self._mark_id[Mark("G-escape", g)],))
                part = frozenset(
                    (m, c - own) if g in c else (escape, c) for m, c in succ
                )
            else:
                part = frozenset((m, c - own) for m, c in succ)
            result = product(result, part)
            if not result:
                break
        return result

    # -- automaton construction ------------------------------------------------

    def successors(self, state: Formula) -> dict[frozenset[str], list[Entry]]:
        """Successor entries of ``state`` per letter, pruned of dominated ones if enabled."""
        table = {letter: sorted(self.delta(state, letter), key=_entry_key) for letter in all_letters(self.ap)}
        if not self.prune:
            return table
        loop_marks = frozenset().union(
            *(m for entries in table.values() for m, c in entries if state in c)
        )
        models = minimal_models(substitute(self.acceptance, loop_marks))
        return {
            letter: prune_entries(entries, lambda e: e[1], lambda e: e[0], _entry_key, models)
            for letter, entries in table.items()
        }

    def build(self) -> Slaa:
        index = {self.root: 0}
        states = [self.root]
        queue = deque([self.root])
        pending: list[tuple[int, frozenset[str], frozenset[int], frozenset[Formula]]] = []
        while queue:
            s = queue.popleft()
            for letter, entries in self.successors(s).items():
                for marks, conf in entries:
                    for d in sorted(conf, key=Formula.sort_key):
                        if d not in index:
                            index[d] = len(states)
                            states.append(d)
                            queue.append(d)
                    pending.append((index[s], letter, marks, conf))
        transitions = tuple(
            Transition(src, letter, marks, frozenset(index[d] for d in conf))
            for src, letter, marks, conf in pending
        )
        return Slaa(tuple(states), self.ap, tuple(self.marks), transitions, 0, self.acceptance)


def delta_basic(state: Formula, letter: Iterable[str]) -> SuccessorSet:
    """Successors of ``state`` under the basic rules; mark ``0`` is the single loop mark."""
    return Translator(state, BASIC, prune=False).delta(state, frozenset(letter))


def translate_basic(root: Formula, *, prune: bool = True) -> Slaa:
    """Co-Buchi SLAA with the single mark ``0`` and acceptance ``Fin(0)``."""
    return Translator(root, BASIC, prune=prune).build()


def translate_f(root: Formula, reuse_marks: bool = False, *, prune: bool = True) -> Slaa:
    """SLAA where every ``F`` subformula is merged with the clauses of its argument.

    Marks not on any loop are dropped.
    """
    return prune_unused_marks(
        Translator(root, F_MERGING, reuse_marks=reuse_marks, prune=prune).build()
    )


def translate_fg(root: Formula, *, prune: bool = True) -> Slaa:
    """SLAA with merged ``F`` and ``G`` states; marks not on any loop are dropped."""
    return prune_unused_marks(Translator(root, FG_MERGING, prune=prune).build())


def translate(root: Formula, mode: str = FG_MERGING, *, reuse_marks: bool = False,
              prune: bool = True) -> Slaa:
    if mode == BASIC:
        return translate_basic(root, prune=prune)
    if mode == F_MERGING:
        return translate_f(root, reuse_marks, prune=prune)
    if mode == FG_MERGING:
        if reuse_marks:
            raise ValueError("mark reuse is only defined for F-merging")
        return translate_fg(root, prune=prune)
    raise ValueError(f"unknown translation mode {mode!r}")


def subformula_count(f: Formula) -> int:
    return sum(1 for _ in subformulae(f))
