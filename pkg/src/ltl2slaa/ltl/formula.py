"""LTL formulae in positive normal form.

Formulae are hash-consed: constructing the same formula twice yields the same
object, so equality is identity and hashing is O(1).  This matters because
automaton states are formulae and back-translated formulae share large
subterms.

All public constructors (``conj``, ``disj``, ``until``, ...) apply a small set
of local rewrites: boolean constant folding, flattening and deduplication of
``&``/``|`` with canonically sorted operands, recognition of ``tt U p`` and
``ff R p`` as ``F p`` and ``G p``, and folding of temporal operators applied to
constants.
"""

from __future__ import annotations

import threading
import weakref
from typing import Iterable, Iterator

TT = "tt"
FF = "ff"
AP = "ap"
NAP = "nap"
AND = "and"
OR = "or"
NEXT = "X"
UNTIL = "U"
RELEASE = "R"
EVENTUALLY = "F"
ALWAYS = "G"

TEMPORAL_OPS = frozenset({NEXT, UNTIL, RELEASE, EVENTUALLY, ALWAYS})

_RANK = {
    TT: 0,
    FF: 1,
    AP: 2,
    NAP: 2,
    NEXT: 3,
    EVENTUALLY: 4,
    ALWAYS: 5,
    UNTIL: 6,
    RELEASE: 7,
    AND: 8,
    OR: 9,
}


class Formula:
    """An interned LTL syntax-tree node.

    ``op`` is one of the module-level operator constants, ``args`` holds the
    children and ``name`` the proposition name for literals.
    """

    __slots__ = ("op", "args", "name", "_hash", "_key", "_size", "__weakref__")

    _table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
    _lock = threading.Lock()

    op: str
    args: tuple[Formula, ...]
    name: str | None

    def __new__(cls, op: str, args: tuple[Formula, ...] = (), name: str | None = None):
        key = (op, name, args)
        with cls._lock:
            node = cls._table.get(key)
            if node is not None:
                return node
            node = object.__new__(cls)
            object.__setattr__(node, "op", op)
            object.__setattr__(node, "args", args)
            object.__setattr__(node, "name", name)
            object.__setattr__(node, "_hash", hash(key))
            object.__setattr__(node, "_key", None)
            object.__setattr__(node, "_size", None)
            cls._table[key] = node
            return node

    def __setattr__(self, attr, value):
        raise AttributeError("Formula is immutable")

    def __reduce__(self):
        return (Formula, (self.op, self.args, self.name))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __lt__(self, other: Formula) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Formula({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    def sort_key(self) -> tuple:
        """Total order used for canonical operand, clause and mark ordering."""
        key = self._key
        if key is None:
            if self.op in (AP, NAP):
                key = (_RANK[self.op], self.name, 0 if self.op == AP else 1)
            else:
                key = (_RANK[self.op], "", 0) + tuple(a.sort_key() for a in self.args)
            object.__setattr__(self, "_key", key)
        return key

    @property
    def arg(self) -> Formula:
        return self.args[0]

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[-1]


# -- constructors -------------------------------------------------------------

def tt() -> Formula:
    return Formula(TT)


def ff() -> Formula:
    return Formula(FF)


def ap(name: str) -> Formula:
    return Formula(AP, (), name)


def nap(name: str) -> Formula:
    return Formula(NAP, (), name)


def _nary(op: str, absorbing: str, neutral: str, operands: Iterable[Formula]) -> Formula:
    seen: set[Formula] = set()
    for f in operands:
        if f.op == absorbing:
            return Formula(absorbing)
        if f.op == neutral:
            continue
        if f.op == op:
            seen.update(f.args)
        else:
            seen.add(f)
    if not seen:
        return Formula(neutral)
    if len(seen) == 1:
        return next(iter(seen))
    return Formula(op, tuple(sorted(seen, key=Formula.sort_key)))


def conj(*operands: Formula) -> Formula:
    return _nary(AND, FF, TT, operands)


def disj(*operands: Formula) -> Formula:
    return _nary(OR, TT, FF, operands)


def next_(f: Formula) -> Formula:
    if f.op in (TT, FF):
        return f
    return Formula(NEXT, (f,))


def eventually(f: Formula) -> Formula:
    if f.op in (TT, FF):
        return f
    return Formula(EVENTUALLY, (f,))


def always(f: Formula) -> Formula:
    if f.op in (TT, FF):
        return f
    return Formula(ALWAYS, (f,))


def until(left: Formula, right: Formula) -> Formula:
    if right.op in (TT, FF):
        return right
    if left.op == TT:
        return eventually(right)
    return Formula(UNTIL, (left, right))


def release(left: Formula, right: Formula) -> Formula:
    if right.op in (TT, FF):
        return right
    if left.op == FF:
        return always(right)
    return Formula(RELEASE, (left, right))


def negate(f: Formula) -> Formula:
    """Negation of a PNF formula, pushed down to the literals."""
    op = f.op
    if op == TT:
        return ff()
    if op == FF:
        return tt()
    if op == AP:
        return nap(f.name)
    if op == NAP:
        return ap(f.name)
    if op == AND:
        return disj(*(negate(a) for a in f.args))
    if op == OR:
        return conj(*(negate(a) for a in f.args))
    if op == NEXT:
        return next_(negate(f.arg))
    if op == EVENTUALLY:
        return always(negate(f.arg))
    if op == ALWAYS:
        return eventually(negate(f.arg))
    if op == UNTIL:
        return release(negate(f.left), negate(f.right))
    if op == RELEASE:
        return until(negate(f.left), negate(f.right))
    raise ValueError(f"unknown operator {op!r}")


# -- traversal and classification --------------------------------------------

def subformulae(f: Formula) -> Iterator[Formula]:
    """All distinct subformulae of ``f`` (including ``f``), parents first."""
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        stack.extend(reversed(g.args))


def atomic_propositions(f: Formula) -> tuple[str, ...]:
    return tuple(sorted({g.name for g in subformulae(f) if g.op in (AP, NAP)}))


def is_temporal(f: Formula) -> bool:
    return f.op not in (AND, OR)


def is_state_formula(f: Formula) -> bool:
    return not any(g.op in TEMPORAL_OPS for g in subformulae(f))


def conjuncts(f: Formula) -> tuple[Formula, ...]:
    return f.args if f.op == AND else (f,)


def tree_size(f: Formula) -> int:
    """Node count of the equivalent binary syntax tree (n-ary nodes count n-1)."""
    size = f._size
    if size is None:
        if f.op in (AND, OR):
            size = len(f.args) - 1 + sum(tree_size(a) for a in f.args)
        else:
            size = 1 + sum(tree_size(a) for a in f.args)
        object.__setattr__(f, "_size", size)
    return size


def dnf_decompose(f: Formula) -> tuple[frozenset[Formula], ...]:
    """Split ``f`` into clauses of temporal formulae.

    Temporal formulae are their own single clause, disjunction unions the
    clause sets and conjunction takes pairwise clause unions.  The result is
    deduplicated and canonically ordered.
    """
    if f.op == OR:
        clauses = set()
        for a in f.args:
            clauses.update(dnf_decompose(a))
    elif f.op == AND:
        clauses = {frozenset()}
        for a in f.args:
            clauses = {c | k for c in clauses for k in dnf_decompose(a)}
    else:
        clauses = {frozenset((f,))}
    return tuple(sorted(clauses, key=clause_key))


def clause_key(clause: frozenset[Formula]) -> tuple:
    return tuple(sorted(g.sort_key() for g in clause))


def collect_f_and_u(f: Formula) -> tuple[frozenset[Formula], frozenset[Formula]]:
    subs = list(subformulae(f))
    return (
        frozenset(g for g in subs if g.op == EVENTUALLY),
        frozenset(g for g in subs if g.op == UNTIL),
    )


def has_temporal_operator(f: Formula) -> bool:
    return not is_state_formula(f)


def is_mergeable(f: Formula) -> bool:
    """Whether F- or F,G-merging can change the automaton for ``f``.

    True iff some ``F p`` has a temporal operator inside ``p``, or some
    ``G p`` has a conjunct of ``p`` rooted at a temporal operator.
    """
    for g in subformulae(f):
        if g.op == EVENTUALLY and has_temporal_operator(g.arg):
            return True
        if g.op == ALWAYS and any(c.op in TEMPORAL_OPS for c in conjuncts(g.arg)):
            return True
    return False


# -- printing ------------------------------------------------------------------

_BINARY_SYMBOL = {UNTIL: "U", RELEASE: "R"}


def to_text(f: Formula) -> str:
    """Render ``f`` in the surface syntax accepted by :func:`parse`."""
    op = f.op
    if op == TT:
        return "true"
    if op == FF:
        return "false"
    if op == AP:
        return f.name
    if op == NAP:
        return "!" + f.name
    if op in (NEXT, EVENTUALLY, ALWAYS):
        return f"{op} {_wrap(f.arg)}"
    if op in _BINARY_SYMBOL:
        return f"{_wrap(f.left)} {_BINARY_SYMBOL[op]} {_wrap(f.right)}"
    sep = " & " if op == AND else " | "
    return sep.join(_wrap(a) for a in f.args)


def _wrap(f: Formula) -> str:
    if f.op in (AND, OR, UNTIL, RELEASE):
        return f"({to_text(f)})"
    return to_text(f)
