"""HOA v1 and Graphviz output, plus a reader for the HOA subset we write."""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Sequence

from ltl2slaa.slaa import (
    ACC_FALSE,
    ACC_TRUE,
    Acc,
    Mark,
    Slaa,
    Transition,
    acc_and,
    acc_or,
    eval_acc,
    fin,
    format_acc,
    inf,
    letter_code,
)

Cube = tuple[int, int]  # (values, care mask) over proposition indices


# -- label condensation --------------------------------------------------------

def prime_cubes(codes: set[int], width: int) -> list[Cube]:
    """Prime implicants of the set of minterms ``codes`` by repeated single-variable merging."""
    full = (1 << width) - 1
    current = {(c, full) for c in codes}
    primes: set[Cube] = set()
    while current:
        merged: set[Cube] = set()
        used: set[Cube] = set()
        by_care: dict[int, set[int]] = defaultdict(set)
        for values, care in current:
            by_care[care].add(values)
        for care, values_set in by_care.items():
            for values in values_set:
                for bit in range(width):
                    mask = 1 << bit
                    if care & mask and not values & mask and values | mask in values_set:
                        merged.add((values, care & ~mask))
                        used.add((values, care))
                        used.add((values | mask, care))
        primes |= current - used
        current = merged
    return sorted(primes, key=lambda c: (bin(c[1]).count("1"), c[1], c[0]))


def _covers(cube: Cube, code: int) -> bool:
    values, care = cube
    return code & care == values


def condense(codes: set[int], width: int) -> list[Cube]:
    """A cover of ``codes`` by prime cubes, chosen greedily in a fixed order."""
    primes = prime_cubes(codes, width)
    uncovered = set(codes)
    cover = []
    while uncovered:
        best = max(primes, key=lambda p: (sum(_covers(p, c) for c in uncovered), -primes.index(p)))
        cover.append(best)
        uncovered -= {c for c in uncovered if _covers(best, c)}
    return cover


def cube_text(cube: Cube, names: Sequence[str]) -> str:
    values, care = cube
    if not care:
        return "t"
    lits = []
    for i, name in enumerate(names):
        if care >> i & 1:
            lits.append(name if values >> i & 1 else "!" + name)
    return "&".join(lits)


def _grouped_edges(a: Slaa, s: int) -> list[tuple[frozenset[int], frozenset[int], list[Cube]]]:
    groups: dict[tuple[tuple[int, ...], tuple[int, ...]], set[int]] = defaultdict(set)
    for t in a.outgoing[s]:
        groups[tuple(sorted(t.dest)), tuple(sorted(t.marks))].add(letter_code(t.letter, a.ap))
    out = []
    for (dest, marks), codes in sorted(groups.items()):
        out.append((frozenset(dest), frozenset(marks), condense(codes, len(a.ap))))
    return out


# -- HOA -------------------------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_hoa(a: Slaa, name: str | None = None) -> str:
    """HOA v1 text; an empty destination becomes an accepting sink state."""
    needs_sink = any(not t.dest for t in a.transitions)
    n = len(a.states)
    acceptance = a.acceptance
    num_marks = len(a.marks)
    sink_mark = None
    if needs_sink and not eval_acc(acceptance, frozenset()):
        sink_mark = num_marks
        num_marks += 1
        acceptance = acc_or(acceptance, inf(sink_mark))
    universal = any(len(t.dest) > 1 for t in a.transitions)
    index_names = [str(i) for i in range(len(a.ap))]

    lines = ["HOA: v1"]
    if name is not None:
        lines.append(f"name: {_quote(name)}")
    lines.append(f"States: {n + needs_sink}")
    lines.append(f"Start: {a.initial}")
    lines.append(f"AP: {len(a.ap)}" + "".join(" " + _quote(p) for p in a.ap))
    lines.append(f"Acceptance: {num_marks} {format_acc(acceptance)}")
    props = ["trans-labels", "explicit-labels", "trans-acc"]
    if universal:
        props.append("univ-branch")
    lines.append("properties: " + " ".join(props))
    lines.append("--BODY--")
    for s in range(n):
        lines.append(f"State: {s} {_quote(str(a.states[s]))}")
        for dest, marks, cubes in _grouped_edges(a, s):
            target = "&".join(map(str, sorted(dest))) if dest else str(n)
            acc = " {" + " ".join(map(str, sorted(marks))) + "}" if marks else ""
            for cube in cubes:
                lines.append(f"[{cube_text(cube, index_names)}] {target}{acc}")
    if needs_sink:
        lines.append(f"State: {n} \"accept\"")
        acc = f" {{{sink_mark}}}" if sink_mark is not None else ""
        lines.append(f"[t] {n}{acc}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


class HoaError(ValueError):
    pass


def _acc_parse(text: str) -> Acc:
    tokens = re.findall(r"Fin|Inf|[()&|!]|\d+|t|f", text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ""

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def disj_():
        parts = [conj_()]
        while peek() == "|":
            take()
            parts.append(conj_())
        return acc_or(*parts)

    def conj_():
        parts = [atom()]
        while peek() == "&":
            take()
            parts.append(atom())
        return acc_and(*parts)

    def atom():
        tok = take()
        if tok == "t":
            return ACC_TRUE
        if tok == "f":
            return ACC_FALSE
        if tok == "(":
            inner = disj_()
            if take() != ")":
                raise HoaError("unbalanced parentheses in acceptance")
            return inner
        if tok in ("Fin", "Inf"):
            if take() != "(":
                raise HoaError("expected '(' in acceptance")
            negated = peek() == "!"
            if negated:
                raise HoaError("negated acceptance sets are not supported")
            mark = int(take())
            if take() != ")":
                raise HoaError("expected ')' in acceptance")
            return fin(mark) if tok == "Fin" else inf(mark)
        raise HoaError(f"unexpected token {tok!r} in acceptance")

    result = disj_()
    if pos != len(tokens):
        raise HoaError("trailing tokens in acceptance")
    return result


def _label_letters(label: str, ap: Sequence[str]) -> list[frozenset[str]]:
    tokens = re.findall(r"\d+|[tf!&|()]", label)
    letters = []
    for bits in range(1 << len(ap)):
        pos = 0

        def peek():
            return tokens[pos] if pos < len(tokens) else ""

        def take():
            nonlocal pos
            pos += 1
            return tokens[pos - 1]

        def disj_():
            value = conj_()
            while peek() == "|":
                take()
                value = conj_() or value
            return value

        def conj_():
            value = unary()
            while peek() == "&":
                take()
                value = unary() and value
            return value

        def unary():
            tok = take()
            if tok == "!":
                return not unary()
            if tok == "(":
                value = disj_()
                take()
                return value
            if tok == "t":
                return True
            if tok == "f":
                return False
            if tok.isdigit():
                return bool(bits >> int(tok) & 1)
            raise HoaError(f"bad label {label!r}")

        if disj_():
            letters.append(frozenset(p for i, p in enumerate(ap) if bits >> i & 1))
    return letters


def parse_hoa(text: str) -> Slaa:
    """Read HOA text with explicit transition labels and transition-based marks."""
    header, sep, body = text.partition("--BODY--")
    if not sep:
        raise HoaError("missing --BODY--")
    body, sep, _ = body.partition("--END--")
    if not sep:
        raise HoaError("missing --END--")
    fields: dict[str, str] = {}
    for line in header.splitlines():
        if ":" in line:
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
    if fields.get("HOA") != "v1":
        raise HoaError("only HOA v1 is supported")
    n = int(fields["States"])
    initial = int(fields["Start"])
    ap_field = fields.get("AP", "0").split(None, 1)
    ap = tuple(re.findall(r'"((?:[^"\\]|\\.)*)"', ap_field[1])) if len(ap_field) > 1 else ()
    if len(ap) != int(ap_field[0]):
        raise HoaError("AP count does not match the listed propositions")
    count, _, formula = fields["Acceptance"].partition(" ")
    acceptance = _acc_parse(formula)
    names = [str(i) for i in range(n)]
    transitions: list[Transition] = []
    current = None
    edge = re.compile(r"^\[(?P<label>[^\]]*)\]\s*(?P<dest>[\d&\s]+?)\s*(?:\{(?P<acc>[\d\s]*)\})?$")
    state_line = re.compile(r'^State:\s*(?P<id>\d+)\s*(?:"(?P<name>(?:[^"\\]|\\.)*)")?\s*$')
    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            continue
        m = state_line.match(line)
        if m:
            current = int(m.group("id"))
            if m.group("name") is not None:
                names[current] = m.group("name")
            continue
        m = edge.match(line)
        if not m or current is None:
            raise HoaError(f"cannot parse body line {line!r}")
        dest = frozenset(int(d) for d in m.group("dest").split("&"))
        marks = frozenset(int(x) for x in (m.group("acc") or "").split())
        for letter in _label_letters(m.group("label"), ap):
            transitions.append(Transition(current, letter, marks, dest))
    marks = tuple(Mark("parsed", index=(i,)) for i in range(int(count)))
    return Slaa(tuple(names), ap, marks, tuple(transitions), initial, acceptance)


# -- Graphviz --------------------------------------------------------------------

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def emit_dot(a: Slaa) -> str:
    """Graphviz text; universal edges fork through a point node, empty ones end in ``accept``."""
    lines = ["digraph slaa {", "  rankdir=LR;", '  node [shape=box, style=rounded];']
    lines.append(f'  label="{_dot_escape(format_acc(a.acceptance))}";')
    lines.append("  start [shape=point, style=invis];")
    lines.append(f"  start -> s{a.initial};")
    for s, label in enumerate(a.states):
        lines.append(f'  s{s} [label="{_dot_escape(str(label))}"];')
    uses_end = False
    fork = 0
    for s in range(len(a.states)):
        for dest, marks, cubes in _grouped_edges(a, s):
            text = " | ".join(cube_text(c, a.ap) for c in cubes)
            if marks:
                text += " {" + ",".join(map(str, sorted(marks))) + "}"
            label = _dot_escape(text)
            if not dest:
                uses_end = True
                lines.append(f'  s{s} -> accept [label="{label}"];')
            elif len(dest) == 1:
                (d,) = dest
                lines.append(f'  s{s} -> s{d} [label="{label}"];')
            else:
                node = f"u{fork}"
                fork += 1
                lines.append(f"  {node} [shape=point];")
                lines.append(f'  s{s} -> {node} [label="{label}", arrowhead=none];')
                for d in sorted(dest):
                    lines.append(f"  {node} -> s{d};")
    if uses_end:
        lines.append('  accept [shape=point, width=0.12, label=""];')
    lines.append("}")
    return "\n".join(lines) + "\n"
