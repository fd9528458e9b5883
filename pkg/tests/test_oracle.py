import pytest

from conftest import program_text
from holwfs import load
from holwfs.domains import FALSE, TRUE, UNDEF
from holwfs.errors import NotNormalForm, NotPropositional
from holwfs.oracle import (
    NormalPropProgram, Rule, differential_check, exhaustive_suite, lower_hol, random_suite,
    self_check, stable_models, to_source, to_typed, wfs_alternating,
)


def prog(atoms, *rules):
    return NormalPropProgram(tuple(atoms), tuple(rules))


def test_lower_hol():
    p = lower_hol(load("a : o. b : o. a <- ~b."))
    assert p.rules == (Rule("a", neg=frozenset({"b"})),)
    p = lower_hol(load("a : o. b : o. a <- b & ~a & true. b <- true."))
    assert p.rules[0] == Rule("a", frozenset({"b"}), frozenset({"a"}))
    assert p.rules[1] == Rule("b")
    r = lower_hol(load("r : o. r <- ~r."))
    assert r.rules == (Rule("r", neg=frozenset({"r"})),)


@pytest.mark.parametrize("text, err", [
    ("p : o. p <- ~(~p).", NotNormalForm),
    ("p : o. q : o. p <- q | ~q.", NotNormalForm),
    ("p : o. p <- false.", NotNormalForm),
    ("p : o->o. p <- \\R. R.", NotPropositional),
])
def test_lower_rejections(text, err):
    with pytest.raises(err):
        lower_hol(load(text))


def test_classic_values():
    assert wfs_alternating(prog("r", Rule("r", neg=frozenset("r")))) == {"r": UNDEF}
    assert wfs_alternating(prog("s", Rule("s"))) == {"s": TRUE}
    assert wfs_alternating(prog("p", Rule("p", frozenset("p")))) == {"p": FALSE}
    even = prog("ab", Rule("a", neg=frozenset("b")), Rule("b", neg=frozenset("a")))
    assert wfs_alternating(even) == {"a": UNDEF, "b": UNDEF}
    assert len(stable_models(even)) == 2
    chain = prog("abc", Rule("a"), Rule("b", neg=frozenset("a")), Rule("c", neg=frozenset("b")))
    assert wfs_alternating(chain) == {"a": TRUE, "b": FALSE, "c": TRUE}


def test_undeclared_atoms_rejected():
    with pytest.raises(ValueError):
        prog("a", Rule("a", frozenset("z")))


def test_suites():
    ex = exhaustive_suite()
    assert len(ex) == 1 + 18 + 153 + 816
    assert random_suite(5, 3) == random_suite(5, 3)
    assert random_suite(5, 3) != random_suite(5, 4)
    for p in random_suite(50, 1):
        assert 1 <= len(p.atoms) <= 4 and len(p.rules) <= 6


def test_self_checks_on_exhaustive_suite():
    for p in exhaustive_suite():
        assert self_check(p) == []


def test_rendering_round_trip():
    p = prog("ab", Rule("a", frozenset("b"), frozenset("a")), Rule("b"))
    assert to_source(p) == "a : o.\nb : o.\na <- b & ~a.\nb <- true.\n"
    assert lower_hol(load(to_source(p))) == p
    assert lower_hol(to_typed(p)) == p


def test_differential_even_loop():
    report = differential_check(load(program_text("even_loop.hol")))
    assert report == {"atoms": 2, "mismatches": []}


def test_differential_reports_mismatches():
    p = prog("a", Rule("a"))
    report = differential_check(p, engine_model={"a": FALSE})
    assert report["mismatches"] == [{"atom": "a", "engine": "false", "oracle": "true"}]
