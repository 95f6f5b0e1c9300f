import csv
import io
import subprocess
import sys

import pytest

from ltl2slaa.cli import (
    BENCH_COLUMNS, CSV_VERSION, EXIT_CHECK, EXIT_OK, EXIT_PARSE, EXIT_USAGE, bench_row,
    bench_totals, check_formula, main, mergeable_formulae, words_for,
)
from ltl2slaa.hoa import parse_hoa
from ltl2slaa.ltl import is_mergeable, parse, parse_lasso
from ltl2slaa.oracle import membership


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_translate_stats_examples(capsys):
    code, out, _ = run(capsys, "translate", "-f", "F(G a | G F b)", "--mode", "fg",
                       "--format", "stats", "--no-simplify")
    assert code == EXIT_OK and out == "states=1 marks=5 det=false nonalt=true\n"
    code, out, _ = run(capsys, "translate", "-f", "G F a", "--mode", "basic", "--format", "stats")
    assert out.startswith("states=2 marks=1 ")


def test_translate_true_gives_universal_automaton(capsys):
    code, out, _ = run(capsys, "translate", "-f", "1", "--mode", "fg")
    assert code == EXIT_OK
    a = parse_hoa(out)
    for w in (";{}", "{};{}"):
        assert membership(a, parse_lasso(w))


def test_translate_all_formats(capsys):
    for fmt, marker in (("hoa", "HOA: v1"), ("dot", "digraph"), ("ltl", "G F a"), ("stats", "states=")):
        code, out, _ = run(capsys, "translate", "-f", "G F a", "--format", fmt)
        assert code == EXIT_OK and marker in out


def test_translate_ltl_format_is_equivalent(capsys):
    code, out, _ = run(capsys, "translate", "-f", "a U (b & X c)", "--format", "ltl", "--mode", "basic")
    g = parse(out.strip())
    assert check_formula(g, words_for(0, 0, 30), roundtrip=False) is None


def test_translate_parse_error(capsys):
    code, _, err = run(capsys, "translate", "-f", "a &")
    assert code == EXIT_PARSE and "cannot parse" in err


def test_translate_usage_errors(capsys):
    code, _, _ = run(capsys, "translate", "-f", "F a", "--mode", "fg", "--reuse-marks")
    assert code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["translate", "-f", "a", "--file", "x"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["bench"])
    assert info.value.code == EXIT_USAGE
    capsys.readouterr()


def test_translate_file_and_output(tmp_path, capsys):
    src = tmp_path / "in.ltl"
    src.write_text("# comment\nG F a\n\nF(G a | G F b)\n")
    out = tmp_path / "out.txt"
    code, stdout, _ = run(capsys, "translate", "--file", str(src), "--format", "stats", "--out", str(out))
    assert code == EXIT_OK and stdout == ""
    assert len(out.read_text().splitlines()) == 2


def test_translate_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "ltl2slaa", "translate", "--file", "-", "--format", "stats"],
        input="G F a\n", capture_output=True, text=True, check=False,
    )
    assert proc.returncode == EXIT_OK
    assert proc.stdout.startswith("states=1 ")


def test_check_passes(capsys):
    code, out, _ = run(capsys, "check", "--random", "20", "--seed", "7", "--preset", "randfg",
                       "--words", "10", "--roundtrip")
    assert code == EXIT_OK and out.strip() == "PASS 20/20"


def test_check_is_parallel_safe(capsys):
    code, out, _ = run(capsys, "check", "--random", "8", "--seed", "2", "--jobs", "2")
    assert code == EXIT_OK and out.strip() == "PASS 8/8"


def test_check_formula_on_infinitely_often():
    words = [parse_lasso(w) for w in (";{}{}{a}", ";{}", "{a};{}")]
    assert check_formula(parse("G F a"), words, roundtrip=True) is None


def test_check_reports_failure(monkeypatch, capsys):
    import ltl2slaa.cli as cli

    monkeypatch.setattr(cli, "membership", lambda a, w: False)
    code, out, _ = run(capsys, "check", "--random", "3", "--seed", "0", "--preset", "randfg")
    assert code == EXIT_CHECK
    assert out.startswith("FAIL") and "formula:" in out and "stage:" in out


def test_bench_empty_has_header_only(capsys):
    code, out, err = run(capsys, "bench", "--random", "0")
    assert code == EXIT_OK
    assert out.splitlines() == [CSV_VERSION, ",".join(BENCH_COLUMNS)]
    assert "# of formulae: 0" in err


def test_bench_totals_match_rows(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, _, err = run(capsys, "bench", "--random", "15", "--seed", "3", "--preset", "randfg",
                       "--mergeable-only", "--csv", str(path))
    assert code == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_VERSION
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 15
    assert all(is_mergeable(parse(r["formula"])) for r in rows)
    total = sum(int(r["fg_states"]) for r in rows)
    fg_line = next(line for line in err.splitlines() if line.startswith("F,G-merging") and "states" not in line)
    assert int(fg_line.split()[1]) == total


def test_bench_is_deterministic_and_order_preserving(capsys):
    _, first, _ = run(capsys, "bench", "--random", "6", "--seed", "1", "--jobs", "2")
    _, second, _ = run(capsys, "bench", "--random", "6", "--seed", "1")
    assert first == second


def test_bench_helpers_agree():
    formulae = mergeable_formulae(0, 5, "randfg", True)
    rows = [bench_row(f) for f in formulae]
    totals = bench_totals(rows)
    assert totals["basic_states"] == sum(r["basic_states"] for r in rows)
    assert set(totals) == set(BENCH_COLUMNS[1:])


def test_negative_count_is_usage_error(capsys):
    code, _, _ = run(capsys, "check", "--random", "-1")
    assert code == EXIT_USAGE
