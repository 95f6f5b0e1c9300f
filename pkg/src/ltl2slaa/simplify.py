"""Language-preserving SLAA reductions."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence, TypeVar

from ltl2slaa.slaa import (
    MinimalModel,
    Slaa,
    Transition,
    acc_marks,
    reachable,
    renumber_acc,
    substitute,
)

E = TypeVar("E")


def marks_dominate(
    m1: frozenset[int], m2: frozenset[int], models: Iterable[MinimalModel]
) -> bool:
    """Whether marks ``m1`` are at least as good for acceptance as ``m2``.

    For every minimal model ``O``: if ``m2`` avoids ``Fin(O)`` then so does
    ``m1``, and every ``Inf(O)`` mark that ``m2`` contributes is also on
    ``m1``.  The second clause is what makes replacing a transition by a
    dominating one safe when a model needs several ``Inf`` marks.
    """
    for o in models:
        if not (o.fin_marks & m2) and (o.fin_marks & m1):
            return False
        if not (o.inf_marks & m2) <= m1:
            return False
    return True


def dominates(t1: Transition, t2: Transition, models: Iterable[MinimalModel]) -> bool:
    """``t1`` dominates ``t2``: same source and letter, smaller destination, better marks."""
    if t1.source != t2.source or t1.letter != t2.letter:
        return False
    return t1.dest <= t2.dest and marks_dominate(t1.marks, t2.marks, models)


def prune_entries(
    entries: Iterable[E],
    dest: Callable[[E], frozenset],
    marks: Callable[[E], frozenset[int]],
    key: Callable[[E], Hashable],
    models: Sequence[MinimalModel],
) -> list[E]:
    """Drop every entry dominated by another one.

    Of two mutually dominating entries the one with the smaller ``key``
    survives.  Dominance is transitive, so comparing against all entries
    (kept or not) gives the same result as any removal order.
    """
    items = sorted(set(entries), key=key)
    kept = []
    for i, e in enumerate(items):
        beaten = False
        for j, f in enumerate(items):
            if i == j or not dest(f) <= dest(e) or not marks_dominate(marks(f), marks(e), models):
                continue
            if j < i or not (dest(e) <= dest(f) and marks_dominate(marks(e), marks(f), models)):
                beaten = True
                break
        if not beaten:
            kept.append(e)
    return kept


def _transition_key(t: Transition) -> tuple:
    return (tuple(sorted(t.dest)), tuple(sorted(t.marks)))


def prune_dominated(a: Slaa) -> Slaa:
    """Remove dominated transitions until none is left.

    Dominance for state ``s`` is judged against the acceptance formula
    restricted to the marks on loops of ``s``: only those marks can recur on
    a branch that stays in ``s``.
    """
    while True:
        kept: list[Transition] = []
        for s in range(len(a.states)):
            models = a.state_models(s)
            for ts in a.by_letter[s].values():
                kept.extend(prune_entries(ts, lambda t: t.dest, lambda t: t.marks, _transition_key, models))
        if len(kept) == len(a.transitions):
            return a
        a = a.replace(transitions=tuple(kept))


def remove_unreachable(a: Slaa) -> Slaa:
    """Keep the states reachable from the initial one, numbered in BFS order."""
    order = reachable(a)
    if order == list(range(len(a.states))):
        return a
    new_id = {s: i for i, s in enumerate(order)}
    transitions = tuple(
        Transition(new_id[t.source], t.letter, t.marks, frozenset(new_id[d] for d in t.dest))
        for t in a.transitions
        if t.source in new_id
    )
    return a.replace(
        states=tuple(a.states[s] for s in order),
        transitions=transitions,
        initial=0,
    )


def prune_unused_marks(a: Slaa) -> Slaa:
    """Drop marks that cannot influence acceptance.

    Only marks on self-loops can recur on a branch, so marks are stripped from
    other transitions; a mark on no loop has ``Fin`` replaced by true and
    ``Inf`` by false; a mark absent from the acceptance formula is removed
    from every transition.  Remaining marks are renumbered densely.
    """
    phi = a.acceptance
    transitions = [
        t if t.is_loop else Transition(t.source, t.letter, frozenset(), t.dest)
        for t in a.transitions
    ]
    while True:
        on_loops = frozenset().union(*(t.marks for t in transitions))
        phi = substitute(phi, on_loops)
        relevant = acc_marks(phi)
        if on_loops <= relevant:
            break
        transitions = [
            Transition(t.source, t.letter, t.marks & relevant, t.dest) for t in transitions
        ]
    used = sorted(acc_marks(phi))
    if used == list(range(len(a.marks))) and tuple(transitions) == a.transitions:
        return a
    new_id = {m: i for i, m in enumerate(used)}
    return a.replace(
        marks=tuple(a.marks[m] for m in used),
        transitions=tuple(
            Transition(t.source, t.letter, frozenset(new_id[m] for m in t.marks), t.dest)
            for t in transitions
        ),
        acceptance=renumber_acc(phi, new_id),
    )


def simplify(a: Slaa) -> Slaa:
    """Apply dominance pruning, unreachable-state removal and mark pruning to a fixpoint."""
    while True:
        b = prune_unused_marks(remove_unreachable(prune_dominated(a)))
        if b == a:
            return b
        a = b
