"""Ultimately periodic words and LTL evaluation on them."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

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
)

Letter = frozenset  # a set of atomic-proposition names


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix . period^omega``.

    ``ap`` optionally fixes the proposition universe; when given, every letter
    must be a subset of it.
    """

    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]
    ap: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(frozenset(x) for x in self.prefix))
        object.__setattr__(self, "period", tuple(frozenset(x) for x in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        if self.ap is not None:
            object.__setattr__(self, "ap", tuple(self.ap))
            universe = set(self.ap)
            for letter in self.prefix + self.period:
                if not letter <= universe:
                    raise AlphabetError(f"letter {sorted(letter)} outside {sorted(universe)}")

    def __len__(self) -> int:
        return len(self.prefix) + len(self.period)

    def __str__(self) -> str:
        return format_lasso(self)

    def letter(self, i: int) -> frozenset[str]:
        """Letter at position ``i`` (any nonnegative integer)."""
        n = len(self.prefix)
        if i < n:
            return self.prefix[i]
        return self.period[(i - n) % len(self.period)]

    def successor(self, i: int) -> int:
        """Next position in the folded range ``[0, len(self))``."""
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def letters(self) -> tuple[frozenset[str], ...]:
        return self.prefix + self.period

    def unrolled(self, k: int) -> LassoWord:
        """Equivalent word whose period is repeated ``k`` times."""
        return LassoWord(self.prefix, self.period * k, self.ap)

    def restricted(self, props: Iterable[str]) -> LassoWord:
        keep = frozenset(props)
        return LassoWord(
            tuple(x & keep for x in self.prefix),
            tuple(x & keep for x in self.period),
            tuple(sorted(keep)),
        )


def _format_letter(letter: frozenset[str]) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def format_lasso(w: LassoWord) -> str:
    return ",".join(map(_format_letter, w.prefix)) + ";" + ",".join(map(_format_letter, w.period))


_LETTER = re.compile(r"\{([^{}]*)\}")


def _parse_letters(text: str) -> tuple[frozenset[str], ...]:
    text = text.strip()
    if not text:
        return ()
    letters = []
    pos = 0
    for m in _LETTER.finditer(text):
        gap = text[pos:m.start()].strip()
        if gap not in ("", ","):
            raise ValueError(f"malformed letter list near {gap!r}")
        props = [p.strip() for p in m.group(1).split(",") if p.strip()]
        letters.append(frozenset(props))
        pos = m.end()
    if text[pos:].strip():
        raise ValueError(f"trailing text {text[pos:]!r}")
    return tuple(letters)


def parse_lasso(text: str, ap: Sequence[str] | None = None) -> LassoWord:
    """Parse ``prefix;period`` where each part is a comma-separated list of ``{a,b}``."""
    if text.count(";") != 1:
        raise ValueError("lasso word must contain exactly one ';'")
    prefix, period = text.split(";")
    return LassoWord(_parse_letters(prefix), _parse_letters(period), tuple(ap) if ap else None)


def random_lasso(
    rng: random.Random,
    ap: Sequence[str],
    max_prefix: int = 3,
    max_period: int = 4,
) -> LassoWord:
    """Prefix of length 0..max_prefix and period of length 1..max_period, uniform letters."""
    ap = tuple(ap)

    def letter() -> frozenset[str]:
        return frozenset(a for a in ap if rng.random() < 0.5)

    prefix = tuple(letter() for _ in range(rng.randint(0, max_prefix)))
    period = tuple(letter() for _ in range(rng.randint(1, max_period)))
    return LassoWord(prefix, period, ap)


def eval_lasso(f: Formula, w: LassoWord) -> bool:
    """Decide whether ``w`` satisfies ``f``.

    Each subformula gets a truth vector over the folded positions; ``U``/``F``
    are least and ``R``/``G`` greatest fixpoints of their one-step unfolding,
    reached by repeated backward sweeps.
    """
    if w.ap is not None:
        missing = set(atomic_propositions(f)) - set(w.ap)
        if missing:
            raise AlphabetError(f"propositions {sorted(missing)} not in word alphabet")
    return _truth_vectors(f, w)[f][0]


def _truth_vectors(f: Formula, w: LassoWord) -> dict[Formula, list[bool]]:
    size = len(w)
    letters = w.letters()
    succ = [w.successor(i) for i in range(size)]
    vectors: dict[Formula, list[bool]] = {}
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if g in vectors:
            continue
        if not expanded and g.args:
            stack.append((g, True))
            stack.extend((a, False) for a in g.args if a not in vectors)
            continue
        vectors[g] = _vector(g, vectors, letters, succ)
    return vectors


def _vector(g: Formula, vectors, letters, succ) -> list[bool]:
    size = len(letters)
    op = g.op
    if op == TT:
        return [True] * size
    if op == FF:
        return [False] * size
    if op == AP:
        return [g.name in x for x in letters]
    if op == NAP:
        return [g.name not in x for x in letters]
    if op == AND:
        vs = [vectors[a] for a in g.args]
        return [all(v[i] for v in vs) for i in range(size)]
    if op == OR:
        vs = [vectors[a] for a in g.args]
        return [any(v[i] for v in vs) for i in range(size)]
    if op == NEXT:
        v = vectors[g.arg]
        return [v[succ[i]] for i in range(size)]
    if op in (UNTIL, EVENTUALLY):
        hold = vectors[g.left] if op == UNTIL else [True] * size
        goal = vectors[g.right]
        val = [False] * size
        changed = True
        while changed:
            changed = False
            for i in reversed(range(size)):
                new = goal[i] or (hold[i] and val[succ[i]])
                if new != val[i]:
                    val[i] = new
                    changed = True
        return val
    if op in (RELEASE, ALWAYS):
        stop = vectors[g.left] if op == RELEASE else [False] * size
        keep = vectors[g.right]
        val = [True] * size
        changed = True
        while changed:
            changed = False
            for i in reversed(range(size)):
                new = keep[i] and (stop[i] or val[succ[i]])
                if new != val[i]:
                    val[i] = new
                    changed = True
        return val
    raise ValueError(f"cannot evaluate operator {op!r}")
