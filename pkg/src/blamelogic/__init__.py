"""Model checking, degree computation and proof checking for blameworthiness with sacrifice."""

from .formula import (
    Blame,
    Formula,
    FormulaSyntaxError,
    Implies,
    Nec,
    Not,
    Var,
    is_tautology,
    parse_coalition,
    parse_formula,
    print_formula,
    subformulas,
)
from .game import Game, GameError, Play, figure1_game, load_game, profile_cost, save_game
from .semantics import BlameVerdict, Evaluator, blame_verdict, evaluate, extension, prevention_cost

__all__ = [
    "Blame",
    "BlameVerdict",
    "Evaluator",
    "Formula",
    "FormulaSyntaxError",
    "Game",
    "GameError",
    "Implies",
    "Nec",
    "Not",
    "Play",
    "Var",
    "blame_verdict",
    "evaluate",
    "extension",
    "figure1_game",
    "is_tautology",
    "load_game",
    "parse_coalition",
    "parse_formula",
    "prevention_cost",
    "print_formula",
    "profile_cost",
    "save_game",
    "subformulas",
]
