"""Self-loop alternating automata with Emerson-Lei acceptance."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ltl2slaa.ltl.formula import Formula

# -- acceptance formulae -------------------------------------------------------

TRUE = "t"
FALSE = "f"
FIN = "Fin"
INF = "Inf"
ACC_AND = "&"
ACC_OR = "|"


@dataclass(frozen=True)
class Acc:
    """Positive boolean combination of ``Fin``/``Inf`` terms.

    Build values with :func:`fin`, :func:`inf`, :func:`acc_and`,
    :func:`acc_or`, :data:`ACC_TRUE` and :data:`ACC_FALSE`; these keep the
    tree flat, deduplicated, canonically ordered and free of inner constants.
    """

    op: str
    mark: int | None = None
    args: tuple[Acc, ...] = ()

    def sort_key(self) -> tuple:
        order = {TRUE: 0, FALSE: 1, FIN: 2, INF: 3, ACC_AND: 4, ACC_OR: 5}[self.op]
        if self.op in (FIN, INF):
            return (2, self.mark, order)
        return (order + 10, -1, 0) + tuple(a.sort_key() for a in self.args)

    def __and__(self, other: Acc) -> Acc:
        return acc_and(self, other)

    def __or__(self, other: Acc) -> Acc:
        return acc_or(self, other)

    def __str__(self) -> str:
        return format_acc(self)


ACC_TRUE = Acc(TRUE)
ACC_FALSE = Acc(FALSE)


def fin(mark: int) -> Acc:
    return Acc(FIN, mark)


def inf(mark: int) -> Acc:
    return Acc(INF, mark)


def _acc_nary(op: str, absorbing: Acc, neutral: Acc, operands: Iterable[Acc]) -> Acc:
    seen: set[Acc] = set()
    for a in operands:
        if a == absorbing:
            return absorbing
        if a == neutral:
            continue
        if a.op == op:
            seen.update(a.args)
        else:
            seen.add(a)
    if not seen:
        return neutral
    if len(seen) == 1:
        return next(iter(seen))
    return Acc(op, None, tuple(sorted(seen, key=Acc.sort_key)))


def acc_and(*operands: Acc) -> Acc:
    return _acc_nary(ACC_AND, ACC_FALSE, ACC_TRUE, operands)


def acc_or(*operands: Acc) -> Acc:
    return _acc_nary(ACC_OR, ACC_TRUE, ACC_FALSE, operands)


def format_acc(phi: Acc) -> str:
    """HOA-style text, e.g. ``Fin(0) & (Fin(1) | Inf(2))``."""
    if phi.op == TRUE:
        return "t"
    if phi.op == FALSE:
        return "f"
    if phi.op in (FIN, INF):
        return f"{phi.op}({phi.mark})"
    parts = []
    for a in phi.args:
        text = format_acc(a)
        parts.append(f"({text})" if a.op in (ACC_AND, ACC_OR) else text)
    return f" {phi.op} ".join(parts)


def acc_marks(phi: Acc) -> frozenset[int]:
    if phi.op in (FIN, INF):
        return frozenset((phi.mark,))
    return frozenset().union(*(acc_marks(a) for a in phi.args))


def eval_acc(phi: Acc, recurring: Iterable[int]) -> bool:
    """Truth of ``phi`` for a branch whose infinitely recurring marks are ``recurring``."""
    rec = recurring if isinstance(recurring, (set, frozenset)) else frozenset(recurring)
    return _eval(phi, rec)


def _eval(phi: Acc, rec) -> bool:
    op = phi.op
    if op == FIN:
        return phi.mark not in rec
    if op == INF:
        return phi.mark in rec
    if op == ACC_AND:
        return all(_eval(a, rec) for a in phi.args)
    if op == ACC_OR:
        return any(_eval(a, rec) for a in phi.args)
    return op == TRUE


def substitute(phi: Acc, keep: Iterable[int]) -> Acc:
    """Replace terms over marks outside ``keep``: ``Fin`` by true, ``Inf`` by false."""
    keep = frozenset(keep)

    def go(a: Acc) -> Acc:
        if a.op == FIN:
            return a if a.mark in keep else ACC_TRUE
        if a.op == INF:
            return a if a.mark in keep else ACC_FALSE
        if a.op == ACC_AND:
            return acc_and(*map(go, a.args))
        if a.op == ACC_OR:
            return acc_or(*map(go, a.args))
        return a

    return go(phi)


def renumber_acc(phi: Acc, mapping: Mapping[int, int]) -> Acc:
    if phi.op == FIN:
        return fin(mapping[phi.mark])
    if phi.op == INF:
        return inf(mapping[phi.mark])
    if phi.op == ACC_AND:
        return acc_and(*(renumber_acc(a, mapping) for a in phi.args))
    if phi.op == ACC_OR:
        return acc_or(*(renumber_acc(a, mapping) for a in phi.args))
    return phi


def acc_shape(phi: Acc) -> tuple:
    """Mark-agnostic canonical shape, for comparing acceptance structure."""
    if phi.op in (FIN, INF, TRUE, FALSE):
        return (phi.op,)
    return (phi.op,) + tuple(sorted(acc_shape(a) for a in phi.args))


@dataclass(frozen=True, order=True)
class MinimalModel:
    fin_marks: frozenset[int]
    inf_marks: frozenset[int]

    def terms(self) -> frozenset[tuple[str, int]]:
        return frozenset({(FIN, m) for m in self.fin_marks} | {(INF, m) for m in self.inf_marks})

    def holds_on(self, recurring: Iterable[int]) -> bool:
        rec = frozenset(recurring)
        return self.inf_marks <= rec and not (self.fin_marks & rec)

    def sort_key(self) -> tuple:
        return (len(self.fin_marks) + len(self.inf_marks), sorted(self.fin_marks), sorted(self.inf_marks))


def _dnf(phi: Acc) -> set[frozenset[tuple[str, int]]]:
    op = phi.op
    if op == TRUE:
        return {frozenset()}
    if op == FALSE:
        return set()
    if op in (FIN, INF):
        return {frozenset(((op, phi.mark),))}
    if op == ACC_OR:
        return set().union(*(_dnf(a) for a in phi.args))
    clauses = {frozenset()}
    for a in phi.args:
        clauses = _absorb({c | d for c in clauses for d in _dnf(a)})
    return clauses


def _absorb(clauses: set[frozenset]) -> set[frozenset]:
    ordered = sorted(clauses, key=len)
    kept: list[frozenset] = []
    for c in ordered:
        if not any(k <= c for k in kept):
            kept.append(c)
    return set(kept)


def minimal_models(phi: Acc) -> tuple[MinimalModel, ...]:
    """Subset-minimal sets of terms that make ``phi`` true, in canonical order.

    Terms are treated as independent propositions; the models are the prime
    implicants of the monotone formula, obtained as its absorbed DNF.
    """
    models = []
    for clause in _absorb(_dnf(phi)):
        models.append(MinimalModel(
            frozenset(m for op, m in clause if op == FIN),
            frozenset(m for op, m in clause if op == INF),
        ))
    return tuple(sorted(models, key=MinimalModel.sort_key))


# -- automata ------------------------------------------------------------------

@dataclass(frozen=True)
class Mark:
    """Where a mark comes from.

    ``kind`` is one of ``U-loop``, ``F-loop``, ``F-clause`` and ``G-escape``;
    ``owner`` is the subformula the mark belongs to (``None`` when shared) and
    ``clause`` the DNF clause for ``F-clause`` marks.  ``index`` distinguishes
    shared marks (reused clause marks and their level).
    """

    kind: str
    owner: Formula | None = None
    clause: frozenset[Formula] | None = None
    index: tuple[int, ...] | None = None

    def label(self) -> str:
        text = self.kind
        if self.owner is not None:
            text += f"[{self.owner}]"
        if self.clause is not None:
            text += "{" + ", ".join(sorted(map(str, self.clause))) + "}"
        if self.index is not None:
            text += "#" + ".".join(map(str, self.index))
        return text


@dataclass(frozen=True)
class Transition:
    source: int
    letter: frozenset[str]
    marks: frozenset[int]
    dest: frozenset[int]

    @property
    def is_loop(self) -> bool:
        return self.source in self.dest


@dataclass(frozen=True)
class Slaa:
    """An automaton ``(S, 2^AP, M, Delta, s_I, Phi)``.

    ``states`` holds the label of each state (an LTL formula for translated
    automata); state ``i`` is referred to by its index everywhere else.
    """

    states: tuple
    ap: tuple[str, ...]
    marks: tuple[Mark, ...]
    transitions: tuple[Transition, ...]
    initial: int
    acceptance: Acc
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        key = transition_sort_key(self.ap)
        object.__setattr__(self, "transitions", tuple(sorted(set(self.transitions), key=key)))

    @cached_property
    def outgoing(self) -> tuple[tuple[Transition, ...], ...]:
        out: list[list[Transition]] = [[] for _ in self.states]
        for t in self.transitions:
            out[t.source].append(t)
        return tuple(map(tuple, out))

    @cached_property
    def by_letter(self) -> tuple[dict[frozenset[str], tuple[Transition, ...]], ...]:
        tables: list[dict] = [{} for _ in self.states]
        for t in self.transitions:
            tables[t.source].setdefault(t.letter, []).append(t)
        return tuple({k: tuple(v) for k, v in d.items()} for d in tables)

    @cached_property
    def loop_marks(self) -> tuple[frozenset[int], ...]:
        """Marks occurring on self-loops of each state."""
        return tuple(
            frozenset().union(*(t.marks for t in ts if t.is_loop)) for ts in self.outgoing
        )

    @cached_property
    def order(self) -> tuple[int, ...]:
        """States such that every destination of a state comes before it."""
        return topological_order(self)

    def state_models(self, s: int) -> tuple[MinimalModel, ...]:
        """Minimal models of the acceptance restricted to the loop marks of ``s``."""
        cache = self._cache.setdefault("models", {})
        keep = self.loop_marks[s]
        if keep not in cache:
            cache[keep] = minimal_models(substitute(self.acceptance, keep))
        return cache[keep]

    def letters(self) -> list[frozenset[str]]:
        return all_letters(self.ap)

    def replace(self, **changes) -> Slaa:
        values = {
            "states": self.states, "ap": self.ap, "marks": self.marks,
            "transitions": self.transitions, "initial": self.initial,
            "acceptance": self.acceptance,
        }
        values.update(changes)
        return Slaa(**values)


def all_letters(ap: Sequence[str]) -> list[frozenset[str]]:
    """Every subset of ``ap``, ordered by the binary number it encodes (``ap[0]`` lowest)."""
    letters = []
    for bits in range(1 << len(ap)):
        letters.append(frozenset(a for i, a in enumerate(ap) if bits >> i & 1))
    return letters


def letter_code(letter: Iterable[str], ap: Sequence[str]) -> int:
    index = {a: i for i, a in enumerate(ap)}
    return sum(1 << index[a] for a in letter)


def transition_sort_key(ap: Sequence[str]):
    index = {a: i for i, a in enumerate(ap)}

    def key(t: Transition) -> tuple:
        code = sum(1 << index.get(a, len(index)) for a in t.letter)
        return (t.source, code, tuple(sorted(t.dest)), tuple(sorted(t.marks)))

    return key


def topological_order(a: Slaa) -> tuple[int, ...]:
    """Order in which each state follows all its non-self successors.

    Raises ``ValueError`` if the automaton has a cycle other than a self-loop.
    """
    succ = [set() for _ in a.states]
    for t in a.transitions:
        succ[t.source].update(d for d in t.dest if d != t.source)
    order: list[int] = []
    state = [0] * len(a.states)  # 0 new, 1 on stack, 2 done
    for root in range(len(a.states)):
        if state[root]:
            continue
        stack = [(root, iter(sorted(succ[root])))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                state[node] = 2
                order.append(node)
            elif state[nxt] == 1:
                raise ValueError(f"cycle through states {nxt} and {node}")
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(sorted(succ[nxt]))))
    return tuple(order)


def reachable(a: Slaa) -> list[int]:
    """States reachable from the initial one, in breadth-first discovery order."""
    seen = {a.initial}
    order = [a.initial]
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for t in a.outgoing[s]:
            for d in sorted(t.dest):
                if d not in seen:
                    seen.add(d)
                    order.append(d)
                    queue.append(d)
    return order


# -- validation and statistics -------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    states: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate(a: Slaa) -> Violation | None:
    """Return the first broken invariant, or ``None`` for a well-formed automaton."""
    n = len(a.states)
    if not 0 <= a.initial < n:
        return Violation("initial", f"initial state {a.initial} out of range")
    universe = set(a.ap)
    if len(universe) != len(a.ap):
        return Violation("alphabet", "duplicate atomic propositions")
    bad = acc_marks(a.acceptance) - set(range(len(a.marks)))
    if bad:
        return Violation("mark", f"acceptance uses undeclared marks {sorted(bad)}")
    for t in a.transitions:
        if not 0 <= t.source < n or any(not 0 <= d < n for d in t.dest):
            return Violation("state", f"transition {t} refers to an unknown state")
        if not t.letter <= universe:
            return Violation("alphabet", f"letter {sorted(t.letter)} outside {list(a.ap)}")
        undeclared = [m for m in t.marks if not 0 <= m < len(a.marks)]
        if undeclared:
            return Violation("mark", f"transition from {t.source} uses undeclared marks {undeclared}")
    cycle = _find_cycle(a)
    if cycle:
        path = " -> ".join(map(str, cycle))
        return Violation("cycle", f"non-self-loop cycle {path}", tuple(cycle))
    return None


def _find_cycle(a: Slaa) -> list[int] | None:
    succ = [set() for _ in a.states]
    for t in a.transitions:
        succ[t.source].update(d for d in t.dest if d != t.source)
    colour = [0] * len(a.states)
    for root in range(len(a.states)):
        if colour[root]:
            continue
        path = [root]
        iters = [iter(sorted(succ[root]))]
        colour[root] = 1
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                colour[path.pop()] = 2
                iters.pop()
            elif colour[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif colour[nxt] == 0:
                colour[nxt] = 1
                path.append(nxt)
                iters.append(iter(sorted(succ[nxt])))
    return None


@dataclass(frozen=True)
class Stats:
    states: int
    reachable_states: int
    marks: int
    is_deterministic: bool
    is_nonalternating: bool

    def line(self) -> str:
        det = "true" if self.is_deterministic else "false"
        nonalt = "true" if self.is_nonalternating else "false"
        return f"states={self.reachable_states} marks={self.marks} det={det} nonalt={nonalt}"


def stats(a: Slaa) -> Stats:
    live = set(reachable(a))
    nonalt = all(len(t.dest) <= 1 for t in a.transitions if t.source in live)
    det = nonalt and all(
        len(ts) <= 1 for s in live for ts in a.by_letter[s].values()
    )
    return Stats(len(a.states), len(live), len(a.marks), det, nonalt)
