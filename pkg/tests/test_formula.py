from fractions import Fraction

import pytest
from hypothesis import given, settings

from blamelogic.errors import ResourceLimitError
from blamelogic.formula import (
    Blame,
    FormulaSyntaxError,
    Implies,
    Nec,
    Not,
    Var,
    conj,
    disj,
    is_tautology,
    modal_depth,
    parse_coalition,
    parse_degree,
    parse_formula,
    possibly,
    print_formula,
    subformulas,
    substitute,
)
from oracles import truth_table_tautology
from strategies import formulas

p, q, r = Var("p"), Var("q"), Var("r")


@pytest.mark.parametrize("text, expected", [
    ("B[{a1}; 1000] dead", Blame({"a1"}, 1000, Var("dead"))),
    ("!p -> p", Implies(Not(p), p)),
    ("NB[{}; 0] p", Nec(Blame(frozenset(), 0, p))),
    ("p -> q -> p", Implies(p, Implies(q, p))),
    ("(p -> q) -> p", Implies(Implies(p, q), p)),
    ("B[{a2, a1}; 1/3] p", Blame({"a1", "a2"}, Fraction(1, 3), p)),
    ("B[{a1}; 0.25] p", Blame({"a1"}, Fraction(1, 4), p)),
    ("N N p", Nec(Nec(p))),
])
def test_parse_examples(text, expected):
    assert parse_formula(text) == expected


def test_sugar_expands_to_core_connectives():
    assert parse_formula("p & q") == Not(Implies(p, Not(q)))
    assert parse_formula("p | q") == Implies(Not(p), q)
    assert parse_formula("~N p") == Not(Nec(Not(p)))
    assert parse_formula("p & q") == conj(p, q)
    assert parse_formula("p | q") == disj(p, q)
    assert parse_formula("~N p") == possibly(p)


def test_precedence_and_binds_tighter_than_or_and_implies():
    assert parse_formula("p | q & r -> p") == Implies(disj(p, conj(q, r)), p)


def test_identifier_that_starts_with_n_is_a_variable():
    assert parse_formula("Np") == Var("Np")
    assert parse_formula("NN p") == Nec(Nec(p))


@pytest.mark.parametrize("f, text", [
    (Blame({"a1"}, 1000, Var("dead")), "B[{a1}; 1000] dead"),
    (Implies(p, Implies(q, p)), "p -> q -> p"),
    (Not(Nec(Not(p))), "!N!p"),
    (Implies(Implies(p, q), p), "(p -> q) -> p"),
    (Blame({"a2", "a1"}, Fraction(3, 2), p), "B[{a1, a2}; 3/2] p"),
])
def test_print_examples(f, text):
    assert print_formula(f) == text


@settings(max_examples=300)
@given(formulas())
def test_print_parse_round_trip(f):
    assert parse_formula(print_formula(f)) == f


@pytest.mark.parametrize("text", [
    "p ->", "B[{a1} 1] p", "B[{a1}; -1] p", "B[{a1}; 1/0] p", "(p", "p q", "", "B[{a1,}; 1] p",
])
def test_syntax_errors_report_position(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.line >= 1 and info.value.column >= 1


def test_negative_degree_message():
    with pytest.raises(FormulaSyntaxError, match="negative"):
        parse_formula("B[{a1}; -1] p")


def test_negative_degree_rejected_in_constructor():
    with pytest.raises(ValueError):
        Blame({"a1"}, -1, p)


def test_coalition_and_degree_helpers():
    assert parse_coalition("{a1,a2}") == frozenset({"a1", "a2"})
    assert parse_coalition("{}") == frozenset()
    assert parse_degree("7/2") == Fraction(7, 2)


@pytest.mark.parametrize("text, expected", [
    ("p -> !!p", True),
    ("B[{a1};1] p -> B[{a1};1] p", True),
    ("N p -> p", False),
    ("p | !p", True),
    ("(p -> q) -> (q -> p)", False),
    ("N p -> (N p -> q) -> q", True),
])
def test_tautology_examples(text, expected):
    assert is_tautology(parse_formula(text)) is expected


@settings(max_examples=300)
@given(formulas(props=("p", "q", "r"), agents=("a1",), max_leaves=6))
def test_tautology_matches_truth_table(f):
    assert is_tautology(f) == truth_table_tautology(f)


def test_tautology_atom_cap():
    big = Var("x0")
    for k in range(1, 25):
        big = Implies(Var(f"x{k}"), big)
    with pytest.raises(ResourceLimitError):
        is_tautology(big)


def test_subformula_examples():
    assert subformulas(p) == [p]
    assert subformulas(Implies(p, p)) == [p, Implies(p, p)]
    b = Blame({"a1"}, 1, Not(p))
    assert subformulas(b) == [p, Not(p), b]


def test_modal_depth_and_substitute():
    f = parse_formula("N (p -> B[{a1}; 1] q)")
    assert modal_depth(f) == 2
    assert substitute(f, {"p": Nec(r)}) == parse_formula("N (N r -> B[{a1}; 1] q)")
