"""Satisfaction of formulas at plays, extensions, and the cost-bounded prevention search."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BlameLogicError
from .formula import Blame, Formula, Implies, Nec, Not, Var, agents as formula_agents, subformulas, variables
from .game import Game

# Deliberately broken semantics, used only to check that the soundness harness can fail.
MUTATIONS = ("drop-phi-conjunct", "relative-sacrifice")


class EvaluationError(BlameLogicError, ValueError):
    pass


@dataclass(frozen=True)
class Prevention:
    cost: Fraction
    witness: dict


@dataclass(frozen=True)
class BlameVerdict:
    holds: bool
    witness: Optional[dict] = None
    minimal_degree: Optional[Fraction] = None


class Evaluator:
    """Evaluation session over one game; extensions are memoized per formula.

    In lenient mode a proposition missing from the valuation is false everywhere.
    """

    def __init__(self, game: Game, lenient: bool = False, mutation: str | None = None):
        if mutation is not None and mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}; choose from {MUTATIONS}")
        self.game = game
        self.lenient = lenient
        self.mutation = mutation
        self._all = frozenset(range(len(game.plays)))
        self._ext: dict = {}
        self._prevention: dict = {}

    def check(self, f: Formula) -> None:
        unknown = sorted(formula_agents(f) - set(self.game.agents))
        if unknown:
            raise EvaluationError(f"unknown agent {unknown[0]!r}")
        if not self.lenient:
            missing = sorted(variables(f) - set(self.game.valuation))
            if missing:
                raise EvaluationError(f"unknown proposition {missing[0]!r}")

    def extension(self, f: Formula) -> frozenset:
        cached = self._ext.get(f)
        if cached is not None:
            return cached
        self.check(f)
        for g in subformulas(f):
            if g not in self._ext:
                self._ext[g] = self._step(g)
        return self._ext[f]

    def _step(self, g: Formula) -> frozenset:
        ext = self._ext
        if isinstance(g, Var):
            return self.game.valuation.get(g.name, frozenset())
        if isinstance(g, Not):
            return self._all - ext[g.child]
        if isinstance(g, Implies):
            return (self._all - ext[g.left]) | ext[g.right]
        if isinstance(g, Nec):
            return self._all if ext[g.child] == self._all else frozenset()
        if isinstance(g, Blame):
            found = self._prevent(g.coalition, g.child)
            if found is not None and self.mutation == "relative-sacrifice":
                return self._relative(g, found.cost)
            if found is None or found.cost > g.degree:
                return frozenset()
            if self.mutation == "drop-phi-conjunct":
                return self._all
            return ext[g.child]
        raise TypeError(f"not a formula: {g!r}")

    def _relative(self, g: Blame, cheapest: Fraction) -> frozenset:
        # price the preventing profile above what the coalition actually spent at each play
        out = set()
        for i in self._ext[g.child]:
            spent = sum((self.game.costs[d] for d in self.game.restrict(i, g.coalition).values()), Fraction(0))
            if cheapest - spent <= g.degree:
                out.add(i)
        return frozenset(out)

    def evaluate(self, play_index: int, f: Formula) -> bool:
        self._check_play(play_index)
        return play_index in self.extension(f)

    def _check_play(self, play_index: int) -> None:
        if not (isinstance(play_index, int) and 0 <= play_index < len(self.game.plays)):
            raise EvaluationError(f"play index out of range: {play_index} (game has {len(self.game.plays)} plays)")

    def ordered(self, coalition: Iterable[str]) -> list[str]:
        members = set(coalition)
        unknown = sorted(members - set(self.game.agents))
        if unknown:
            raise EvaluationError(f"unknown agent {unknown[0]!r}")
        return [a for a in self.game.agents if a in members]

    def prevention_cost(self, coalition: Iterable[str], f: Formula) -> Optional[Prevention]:
        coalition = frozenset(coalition)
        self.ordered(coalition)
        self.extension(f)
        return self._prevent(coalition, f)

    def _prevent(self, coalition: frozenset, f: Formula) -> Optional[Prevention]:
        key = (coalition, f)
        if key in self._prevention:
            return self._prevention[key]
        result = cheapest_unmatched_profile(self.game, self.ordered(coalition), self._ext[f])
        self._prevention[key] = result
        return result

    def verdict(self, play_index: int, coalition: Iterable[str], degree, f: Formula) -> BlameVerdict:
        coalition = frozenset(coalition)
        self._check_play(play_index)
        self.ordered(coalition)
        if not self.evaluate(play_index, f):
            return BlameVerdict(False)
        found = self._prevent(coalition, f)
        if found is None:
            return BlameVerdict(False)
        holds = found.cost <= Fraction(degree)
        return BlameVerdict(holds, dict(found.witness), found.cost)


def cheapest_unmatched_profile(game: Game, members: list[str], matched_plays: frozenset) -> Optional[Prevention]:
    """Cheapest coalition profile that no play in ``matched_plays`` agrees with.

    Best-first over index vectors into per-agent action lists sorted by
    (cost, declaration order). Each vector has a single parent (decrement its last
    nonzero coordinate), so the heap sees every profile at most once, and ties
    are broken lexicographically by declaration order in agent order.
    """
    order = {a: k for k, a in enumerate(game.costs)}
    ranked = sorted(game.costs, key=lambda a: (game.costs[a], order[a]))
    positions = [game.agent_index(a) for a in members]
    forbidden = {tuple(game.plays[i].actions[p] for p in positions) for i in matched_plays}
    m = len(members)

    def entry(vec: tuple) -> tuple:
        cost = sum((game.costs[ranked[k]] for k in vec), Fraction(0))
        return (cost, tuple(order[ranked[k]] for k in vec), vec)

    heap = [entry((0,) * m)]
    width = len(ranked)
    while heap:
        cost, _, vec = heapq.heappop(heap)
        profile = tuple(ranked[k] for k in vec)
        if profile not in forbidden:
            return Prevention(cost, dict(zip(members, profile)))
        last = max((j for j in range(m) if vec[j] > 0), default=0)
        for j in range(last, m):
            if vec[j] + 1 < width:
                child = vec[:j] + (vec[j] + 1,) + vec[j + 1:]
                heapq.heappush(heap, entry(child))
    return None


def evaluate(game: Game, play_index: int, f: Formula, lenient: bool = False) -> bool:
    return Evaluator(game, lenient=lenient).evaluate(play_index, f)


def extension(game: Game, f: Formula, lenient: bool = False) -> frozenset:
    return Evaluator(game, lenient=lenient).extension(f)


def prevention_cost(game: Game, coalition: Iterable[str], f: Formula, lenient: bool = False) -> Optional[Prevention]:
    return Evaluator(game, lenient=lenient).prevention_cost(coalition, f)


def blame_verdict(game: Game, play_index: int, coalition: Iterable[str], degree, f: Formula,
                  lenient: bool = False) -> BlameVerdict:
    return Evaluator(game, lenient=lenient).verdict(play_index, coalition, degree, f)
