"""Command-line interface: ``translate``, ``check`` and ``bench``."""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ltl2slaa import __version__
from ltl2slaa.backtranslate import slaa_to_ltl
from ltl2slaa.hoa import emit_dot, emit_hoa
from ltl2slaa.ltl.formula import Formula, is_mergeable, to_text
from ltl2slaa.ltl.lasso import LassoWord, eval_lasso, random_lasso
from ltl2slaa.ltl.parser import ParseError, parse
from ltl2slaa.ltl.randltl import PRESETS, ap_names, random_formula
from ltl2slaa.oracle import membership
from ltl2slaa.simplify import simplify
from ltl2slaa.slaa import Slaa, stats
from ltl2slaa.translate import MODES, translate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CHECK = 3

AP_COUNT = 5
TREE_SIZE = 15
MAX_ATTEMPTS = 10**6
CSV_VERSION = "# ltl2slaa-bench v1"
MODE_TITLES = {"basic": "basic", "f": "F-merging", "fg": "F,G-merging"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build(f: Formula, mode: str, *, simplified: bool = True, reuse_marks: bool = False) -> Slaa:
    """Translate ``f``; ``simplified`` enables construction-time pruning and the simplifier."""
    a = translate(f, mode, reuse_marks=reuse_marks, prune=simplified)
    return simplify(a) if simplified else a


def _colour(text: str, code: str, stream) -> str:
    if os.environ.get("NO_COLOR") or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


# -- translate ---------------------------------------------------------------------

def _read_formulae(args) -> list[str]:
    if args.formula is not None:
        return [args.formula]
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    return [line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def cmd_translate(args) -> int:
    if args.reuse_marks and args.mode != "f":
        raise UsageError("--reuse-marks only applies to --mode f")
    out = []
    for text in _read_formulae(args):
        try:
            f = parse(text)
        except ParseError as exc:
            print(f"error: cannot parse {text!r}: {exc}", file=sys.stderr)
            return EXIT_PARSE
        a = build(f, args.mode, simplified=not args.no_simplify, reuse_marks=args.reuse_marks)
        if args.format == "hoa":
            out.append(emit_hoa(a, name=text))
        elif args.format == "dot":
            out.append(emit_dot(a))
        elif args.format == "ltl":
            out.append(to_text(slaa_to_ltl(a)) + "\n")
        else:
            out.append(stats(a).line() + "\n")
    text = "".join(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- check -------------------------------------------------------------------------

def formula_for(seed: int, index: int, preset: str) -> Formula:
    return random_formula(seed + index, AP_COUNT, TREE_SIZE, preset)


def words_for(seed: int, index: int, count: int) -> list[LassoWord]:
    rng = random.Random(f"words-{seed}-{index}")
    return [random_lasso(rng, ap_names(AP_COUNT)) for _ in range(count)]


@dataclass(frozen=True)
class Failure:
    formula: str
    word: str
    stage: str
    expected: bool


def check_formula(f: Formula, words: Sequence[LassoWord], roundtrip: bool) -> Failure | None:
    """First disagreement between the formula and any translation stage, if any."""
    expected = [eval_lasso(f, w) for w in words]
    for mode in MODES:
        for simplified in (False, True):
            a = build(f, mode, simplified=simplified)
            stage = mode + ("+simplify" if simplified else "")
            for w, e in zip(words, expected):
                if membership(a, w) != e:
                    return Failure(to_text(f), str(w), stage, e)
            if roundtrip and simplified:
                g = slaa_to_ltl(a)
                for w, e in zip(words, expected):
                    if eval_lasso(g, w) != e:
                        return Failure(to_text(f), str(w), stage + "+roundtrip", e)
    return None


def _check_job(job: tuple[int, int, str, int, bool]) -> Failure | None:
    seed, index, preset, count, roundtrip = job
    return check_formula(formula_for(seed, index, preset), words_for(seed, index, count), roundtrip)


def _map(fn: Callable, jobs: Iterable, workers: int) -> list:
    jobs = list(jobs)
    if workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def cmd_check(args) -> int:
    jobs = [(args.seed, i, args.preset, args.words, args.roundtrip) for i in range(args.random)]
    results = _map(_check_job, jobs, args.jobs)
    failures = [r for r in results if r is not None]
    passed = len(results) - len(failures)
    if not failures:
        print(_colour(f"PASS {passed}/{len(results)}", "32", sys.stdout))
        return EXIT_OK
    print(_colour(f"FAIL {passed}/{len(results)}", "31", sys.stdout))
    first = failures[0]
    print(f"formula: {first.formula}")
    print(f"word: {first.word}")
    print(f"stage: {first.stage} (formula says {first.expected})")
    return EXIT_CHECK


# -- bench -------------------------------------------------------------------------

def mergeable_formulae(seed: int, count: int, preset: str, mergeable_only: bool) -> list[Formula]:
    """``count`` formulae from consecutive seeds, optionally rejecting non-mergeable ones."""
    out: list[Formula] = []
    attempts = 0
    while len(out) < count:
        if attempts >= MAX_ATTEMPTS:
            raise RuntimeError(f"only {len(out)} mergeable formulae in {MAX_ATTEMPTS} attempts")
        f = formula_for(seed, attempts, preset)
        attempts += 1
        if not mergeable_only or is_mergeable(f):
            out.append(f)
    return out


def bench_row(f: Formula) -> dict:
    row: dict = {"formula": to_text(f)}
    for mode in MODES:
        st = stats(build(f, mode))
        row[f"{mode}_states"] = st.reachable_states
        row[f"{mode}_marks"] = st.marks
        row[f"{mode}_det"] = int(st.is_deterministic)
        row[f"{mode}_nonalt"] = int(st.is_nonalternating)
    return row


BENCH_COLUMNS = ["formula"] + [
    f"{mode}_{col}" for mode in MODES for col in ("states", "marks", "det", "nonalt")
]


def bench_totals(rows: Sequence[dict]) -> dict[str, int]:
    return {col: sum(r[col] for r in rows) for col in BENCH_COLUMNS[1:]}


def format_tables(rows: Sequence[dict], preset: str) -> str:
    totals = bench_totals(rows)
    lines = [f"# of formulae: {len(rows)} ({preset})", ""]
    lines.append(f"{'':14}{'states':>10}{'marks':>10}")
    for mode in MODES:
        lines.append(f"{MODE_TITLES[mode]:14}{totals[mode + '_states']:>10}{totals[mode + '_marks']:>10}")
    lines.append("")
    lines.append(f"{'':14}{'deterministic':>15}{'nonalternating':>16}")
    for mode in MODES:
        lines.append(f"{MODE_TITLES[mode]:14}{totals[mode + '_det']:>15}{totals[mode + '_nonalt']:>16}")
    return "\n".join(lines) + "\n"


def write_csv(rows: Sequence[dict], stream) -> None:
    stream.write(CSV_VERSION + "\n")
    writer = csv.DictWriter(stream, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_bench(args) -> int:
    formulae = mergeable_formulae(args.seed, args.random, args.preset, args.mergeable_only)
    rows = _map(bench_row, formulae, args.jobs)
    buf = io.StringIO()
    write_csv(rows, buf)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    sys.stderr.write(format_tables(rows, args.preset))
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltl2slaa", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("translate", help="translate formulae to automata")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("-f", "--formula", help="formula text")
    src.add_argument("--file", help="file with one formula per line ('-' for stdin)")
    p.add_argument("--mode", choices=MODES, default="fg")
    p.add_argument("--no-simplify", action="store_true", help="skip dominance pruning and simplification")
    p.add_argument("--reuse-marks", action="store_true", help="share clause marks (mode f only)")
    p.add_argument("--format", choices=("hoa", "dot", "stats", "ltl"), default="hoa")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_translate)

    for name, func, text in (
        ("check", cmd_check, "compare translations against the formula semantics"),
        ("bench", cmd_bench, "collect size statistics on random formulae"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--random", type=int, required=True, metavar="N", help="number of formulae")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--preset", choices=sorted(PRESETS), default="rand1")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "check":
            p.add_argument("--words", type=int, default=20, help="lasso words per formula")
            p.add_argument("--roundtrip", action="store_true", help="also check back-translation")
        else:
            p.add_argument("--mergeable-only", action="store_true")
            p.add_argument("--csv", help="CSV output file (default stdout)")
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "random", 0) < 0:
        print("error: --random must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
