import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ltl2slaa.ltl import parse, random_formula
from ltl2slaa.slaa import (
    ACC_FALSE, ACC_TRUE, Mark, MinimalModel, Slaa, Transition, acc_and, acc_or,
    acc_shape, all_letters, eval_acc, fin, format_acc, inf, minimal_models,
    reachable, renumber_acc, stats, substitute, topological_order, validate,
)
from ltl2slaa.translate import MODES, translate, translate_basic, translate_fg

from reference import acc_holds, brute_force_minimal_models, random_acc

PHI = fin(1) & (fin(2) | inf(3))


def model(fins=(), infs=()):
    return MinimalModel(frozenset(fins), frozenset(infs))


# -- acceptance formulae ---------------------------------------------------------

def test_acceptance_constructors_fold_and_sort():
    assert acc_and(fin(0), ACC_TRUE) == fin(0)
    assert acc_and(fin(0), ACC_FALSE) == ACC_FALSE
    assert acc_or(inf(1), ACC_TRUE) == ACC_TRUE
    assert acc_or(fin(0), fin(0)) == fin(0)
    assert acc_and(fin(1), fin(0)) == acc_and(fin(0), fin(1))


def test_format_acc():
    assert format_acc(ACC_TRUE) == "t"
    assert format_acc(ACC_FALSE) == "f"
    assert format_acc(PHI) == "Fin(1) & (Fin(2) | Inf(3))"


def test_minimal_models_examples():
    assert set(minimal_models(PHI)) == {model((1, 2)), model((1,), (3,))}
    assert minimal_models(ACC_TRUE) == (model(),)
    assert minimal_models(fin(0) | fin(0)) == (model((0,)),)
    assert minimal_models(ACC_FALSE) == ()


def test_minimal_models_keep_contradictory_terms():
    assert minimal_models(fin(0) & inf(0)) == (model((0,), (0,)),)


def test_minimal_models_match_enumeration():
    rng = random.Random(2)
    for _ in range(300):
        phi = random_acc(rng, 4)
        assert set(minimal_models(phi)) == brute_force_minimal_models(phi)


def test_eval_acc_examples():
    assert not eval_acc(fin(0), {0})
    assert eval_acc(PHI, {3})
    assert eval_acc(ACC_TRUE, {0, 5})
    assert not eval_acc(ACC_FALSE, set())


def test_eval_acc_agrees_with_minimal_models():
    rng = random.Random(4)
    for _ in range(1000):
        phi = random_acc(rng, 4)
        rec = frozenset(m for m in range(4) if rng.random() < 0.5)
        assert eval_acc(phi, rec) == acc_holds(phi, rec)
        assert eval_acc(phi, rec) == any(o.holds_on(rec) for o in minimal_models(phi))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**6), keep=st.sets(st.integers(0, 3)))
def test_substitute_agrees_on_kept_marks(seed, keep):
    phi = random_acc(random.Random(seed), 4)
    reduced = substitute(phi, keep)
    for rec in (frozenset(), frozenset(keep)):
        assert eval_acc(reduced, rec) == acc_holds(phi, rec)


def test_renumber_and_shape():
    phi = renumber_acc(PHI, {1: 0, 2: 1, 3: 2})
    assert format_acc(phi) == "Fin(0) & (Fin(1) | Inf(2))"
    assert acc_shape(phi) == acc_shape(PHI)
    assert acc_shape(fin(0) | inf(1)) == acc_shape(inf(7) | fin(3))


# -- automata ------------------------------------------------------------------

def _slaa(n, transitions, phi=ACC_TRUE, marks=0, ap=("a",)):
    return Slaa(
        tuple(f"q{i}" for i in range(n)), ap,
        tuple(Mark("test", index=(i,)) for i in range(marks)),
        tuple(transitions), 0, phi,
    )


def t(src, letter, marks, dest):
    return Transition(src, frozenset(letter), frozenset(marks), frozenset(dest))


def test_all_letters_order():
    assert all_letters(("a", "b")) == [frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")]


def test_translations_validate():
    for seed in range(100):
        f = random_formula(seed, 3, 12, "rand2")
        for mode in MODES:
            assert validate(translate(f, mode)) is None


def test_validate_reports_two_cycle():
    a = _slaa(2, [t(0, "", (), (1,)), t(1, "", (), (0,))])
    v = validate(a)
    assert v is not None and v.kind == "cycle"
    assert set(v.states) == {0, 1}


def test_validate_reports_undeclared_mark():
    v = validate(_slaa(1, [t(0, "", (2,), (0,))], marks=1))
    assert v is not None and v.kind == "mark"
    assert validate(_slaa(1, [t(0, "", (), (0,))], phi=inf(4))).kind == "mark"


def test_validate_reports_unknown_state_and_letter():
    assert validate(_slaa(1, [t(0, "", (), (3,))])).kind == "state"
    assert validate(_slaa(1, [t(0, "z", (), (0,))])).kind == "alphabet"


def test_self_loops_and_universal_edges_are_fine():
    a = _slaa(3, [t(0, "a", (), (0, 1, 2)), t(1, "", (), (1, 2)), t(2, "", (), ())])
    assert validate(a) is None
    order = topological_order(a)
    assert order.index(2) < order.index(1) < order.index(0)


def test_reachable_in_breadth_first_order():
    a = _slaa(4, [t(0, "", (), (2,)), t(2, "", (), (1,)), t(3, "", (), (0,))])
    assert reachable(a) == [0, 2, 1]


def test_stats_examples():
    f = parse("F(G a | G F b)")
    fg = stats(translate_fg(f))
    assert fg.reachable_states == 1
    assert fg.is_nonalternating
    # the letter {a,b} enables several loops of the merged state
    assert not fg.is_deterministic
    assert stats(translate_basic(f)).reachable_states == 4
    gfa = stats(translate_basic(parse("G F a")))
    assert gfa.reachable_states == 2 and not gfa.is_nonalternating


def test_stats_line_format():
    line = stats(translate_basic(parse("G F a"))).line()
    assert line == "states=2 marks=1 det=false nonalt=false"


def test_transitions_are_canonically_ordered():
    ts = [t(0, "a", (), (0,)), t(0, "", (), ()), t(0, "a", (), (0,))]
    a = _slaa(1, ts)
    assert len(a.transitions) == 2
    assert a.transitions == _slaa(1, list(reversed(ts))).transitions
