import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from blamelogic.formula import Blame, Nec, Var, parse_formula
from blamelogic.game import build_game, figure1_game
from blamelogic.semantics import EvaluationError, Evaluator, blame_verdict, evaluate, extension, prevention_cost
from strategies import degrees, formulas, games

G = figure1_game()
DEAD = Var("dead")


@pytest.mark.parametrize("play, text, expected", [
    (0, "dead", True),
    (0, "B[{a1}; 1000] dead", True),
    (0, "B[{a1}; 999] dead", False),
    (1, "B[{a3}; 1000] dead", False),
    (0, "B[{}; 5] dead", False),
    (3, "B[{}; 5] alive", False),
    (0, "N a2helps_implies_alive", True),
    (5, "N a2helps_implies_alive", True),
])
def test_eval_examples(play, text, expected):
    f = parse_formula(text)
    assert oracles.holds(G, play, f) is expected
    assert evaluate(G, play, f) is expected


def test_extension_examples():
    assert extension(G, parse_formula("alive")) == {2, 3, 4, 5, 6, 7}
    assert extension(G, parse_formula("p | !p"), lenient=True) == set(range(8))
    assert extension(G, parse_formula("dead & alive")) == frozenset()


def test_prevention_grand_pair():
    found = prevention_cost(G, {"a1", "a2"}, DEAD)
    assert found.cost == 1000
    assert found.witness in ({"a1": "help", "a2": "ignore"}, {"a1": "ignore", "a2": "help"})
    assert oracles.prevention(G, {"a1", "a2"}, DEAD)[0] == 1000


def test_no_prevention_for_latecomer():
    assert prevention_cost(G, {"a3"}, DEAD) is None
    assert oracles.prevention(G, {"a3"}, DEAD) is None


def test_empty_coalition_prevention():
    assert prevention_cost(G, set(), DEAD) is None
    empty = parse_formula("dead & alive")
    found = prevention_cost(G, set(), empty)
    assert found.cost == 0 and found.witness == {}
    assert not evaluate(G, 0, Blame(frozenset(), 0, empty))


def test_blame_verdict_examples():
    v = blame_verdict(G, 0, {"a1", "a2", "a3"}, 1000, DEAD)
    assert v.holds and v.minimal_degree == 1000
    for coalition in ({"a1"}, {"a2"}, {"a1", "a2", "a3"}):
        assert not blame_verdict(G, 2, coalition, 5000, DEAD).holds
    v = blame_verdict(G, 0, {"a1"}, 2000, DEAD)
    assert v.holds and v.minimal_degree == 1000 and v.witness == {"a1": "help"}


def test_unknown_agent_and_proposition_are_errors():
    with pytest.raises(EvaluationError, match="unknown agent"):
        evaluate(G, 0, parse_formula("B[{zz}; 1] dead"))
    with pytest.raises(EvaluationError):
        evaluate(G, 0, parse_formula("p"))
    assert evaluate(G, 0, parse_formula("p"), lenient=True) is False
    with pytest.raises(EvaluationError, match="out of range"):
        evaluate(G, 8, DEAD)


def test_rejects_unknown_mutation():
    with pytest.raises(ValueError):
        Evaluator(G, mutation="nonsense")


@st.composite
def game_and_formula(draw):
    g = draw(games())
    f = draw(formulas(agents=g.agents, max_leaves=6))
    return g, f


@settings(max_examples=300, deadline=None)
@given(game_and_formula())
def test_evaluator_matches_literal_oracle(gf):
    g, f = gf
    ev = Evaluator(g)
    ext = ev.extension(f)
    for i in range(len(g.plays)):
        assert (i in ext) == oracles.holds(g, i, f)


@settings(max_examples=300, deadline=None)
@given(game_and_formula(), st.data())
def test_prevention_matches_brute_force(gf, data):
    g, f = gf
    coalition = data.draw(st.frozensets(st.sampled_from(g.agents)))
    found = prevention_cost(g, coalition, f)
    expected = oracles.prevention(g, coalition, f)
    if expected is None:
        assert found is None
    else:
        assert (found.cost, found.witness) == expected


@settings(max_examples=200, deadline=None)
@given(game_and_formula(), st.data())
def test_truth_monotonicity_and_threshold(gf, data):
    g, f = gf
    c = data.draw(st.frozensets(st.sampled_from(g.agents)))
    d = c | data.draw(st.frozensets(st.sampled_from(g.agents)))
    s, t = sorted((data.draw(degrees), data.draw(degrees)))
    ev = Evaluator(g)
    for i in range(len(g.plays)):
        bc = ev.evaluate(i, Blame(c, s, f))
        if bc:
            assert ev.evaluate(i, f)
            assert ev.evaluate(i, Blame(d, t, f))
        v = ev.verdict(i, c, s, f)
        assert v.holds == bc
        if v.minimal_degree is not None:
            assert ev.evaluate(i, Blame(c, v.minimal_degree, f))
            assert v.holds == (v.minimal_degree <= s)


@settings(max_examples=200, deadline=None)
@given(game_and_formula())
def test_necessity_is_play_independent(gf):
    g, f = gf
    ext = extension(g, Nec(f))
    assert ext in (frozenset(), frozenset(range(len(g.plays))))


def test_mutations_change_answers():
    q = parse_formula("dead & alive")
    # Without the "holds here" conjunct, vacuous prevention makes B true where phi is false.
    assert Evaluator(G, mutation="drop-phi-conjunct").evaluate(0, Blame({"a1"}, 0, q))
    assert not Evaluator(G).evaluate(0, Blame({"a1"}, 0, q))
    # a1 spent 2 at play 0, so under relative pricing the cost-2 prevention is free there but not at play 1.
    g = build_game(["a1"], {"z": 0, "x": 2, "y": 2}, "z", ["o"], [({"a1": "x"}, "o"), ({"a1": "z"}, "o")],
                   {"p": [0, 1]})
    f = Blame({"a1"}, 0, Var("p"))
    assert Evaluator(g).extension(f) == frozenset()
    assert Evaluator(g, mutation="relative-sacrifice").extension(f) == {0}
