"""Executable soundness checks for the axioms and bounded countermodel search."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .axioms import SCHEMAS, SLOTS, SideConditionError, instantiate, match_axiom  # noqa: F401  (re-exported)
from .errors import ResourceLimitError
from .formula import Blame, Formula, Implies, Nec, Not, Var, agents as formula_agents, degrees, print_formula, variables
from .game import Game, GameParams, Play, generate_game, save_game
from .semantics import MUTATIONS, Evaluator

SUITE_MUTATIONS = ("swap-monotonicity",) + MUTATIONS
DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class ValidityResult:
    valid_here: bool
    failing_play: Optional[int] = None


def check_validity_in_game(g: Game, f: Formula, evaluator: Evaluator | None = None) -> ValidityResult:
    ev = evaluator or Evaluator(g)
    ext = ev.extension(f)
    for i in range(len(g.plays)):
        if i not in ext:
            return ValidityResult(False, i)
    return ValidityResult(True)


# -- random sampling ----------------------------------------------------------

def random_coalition(rng: random.Random, agents: Sequence[str]) -> frozenset:
    return frozenset(a for a in agents if rng.random() < 0.5)


def random_formula(rng: random.Random, props: Sequence[str], agents: Sequence[str],
                   degree_pool: Sequence[Fraction], depth: int = 2, size: int = 4) -> Formula:
    """Random formula with modal depth at most ``depth`` and roughly ``size`` connectives."""
    if size <= 0 or rng.random() < 0.25:
        return Var(rng.choice(props))
    ops = ["not", "imp"] + (["nec", "blame", "blame"] if depth > 0 else [])
    op = rng.choice(ops)
    if op == "not":
        return Not(random_formula(rng, props, agents, degree_pool, depth, size - 1))
    if op == "imp":
        return Implies(random_formula(rng, props, agents, degree_pool, depth, size // 2),
                       random_formula(rng, props, agents, degree_pool, depth, size // 2))
    child = random_formula(rng, props, agents, degree_pool, depth - 1, size - 1)
    if op == "nec":
        return Nec(child)
    return Blame(random_coalition(rng, agents), rng.choice(degree_pool), child)


def sample_bindings(name: str, rng: random.Random, props: Sequence[str], agents: Sequence[str],
                    degree_pool: Sequence[Fraction], depth: int = 2) -> dict:
    b: dict = {}
    for slot in SLOTS[name]:
        if slot in ("phi", "psi"):
            b[slot] = random_formula(rng, props, agents, degree_pool, depth)
        elif slot in ("s", "t"):
            b[slot] = rng.choice(degree_pool)
    if name == "Monotonicity":
        b["C"] = random_coalition(rng, agents)
        b["D"] = b["C"] | random_coalition(rng, agents)
        b["s"], b["t"] = sorted((b["s"], b["t"]))
    elif name == "JointResponsibility":
        side = {a: rng.randrange(3) for a in agents}
        b["C"] = frozenset(a for a in agents if side[a] == 1)
        b["D"] = frozenset(a for a in agents if side[a] == 2)
    elif "C" in SLOTS[name]:
        b["C"] = random_coalition(rng, agents)
    return b


def corrupted_monotonicity(rng: random.Random, props, agents, degree_pool, depth: int = 2) -> Formula:
    """``B^t_C phi -> B^s_D phi`` with ``C ⊆ D`` and ``s < t``: not valid."""
    s, t = sorted(rng.sample(sorted(set(degree_pool)), 2))
    c = random_coalition(rng, agents)
    d = c | random_coalition(rng, agents)
    phi = random_formula(rng, props, agents, degree_pool, depth)
    return Implies(Blame(c, t, phi), Blame(d, s, phi))


# -- soundness suite ----------------------------------------------------------

@dataclass(frozen=True)
class SuiteParams:
    max_agents: int = 3
    max_actions: int = 3
    max_outcomes: int = 2
    max_plays: int = 8
    cost_pool: tuple = (Fraction(0), Fraction(1), Fraction(2))
    propositions: tuple = ("p", "q")
    depth: int = 2


@dataclass
class SoundnessReport:
    trials: int
    seed: object
    mutation: Optional[str]
    counts: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(c["fail"] for c in self.counts.values())

    def to_document(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "mutation": self.mutation,
            "violations": self.violations,
            "schemas": self.counts,
            "counterexamples": self.counterexamples,
        }


def degree_pool_for(costs: Sequence[Fraction]) -> list[Fraction]:
    """Costs, their pairwise sums, and 0: the thresholds profile costs can hit in small games."""
    base = {Fraction(0)} | {Fraction(c) for c in costs}
    return sorted(base | {a + b for a in base for b in base})


def soundness_suite(params: SuiteParams = SuiteParams(), seed=0, n_trials: int = 1000,
                    mutation: str | None = None, out_dir=None, max_bundles: int = 20) -> SoundnessReport:
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if mutation is not None and mutation not in SUITE_MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; choose from {SUITE_MUTATIONS}")
    report = SoundnessReport(n_trials, seed, mutation, {n: {"pass": 0, "fail": 0} for n in SCHEMAS})
    semantic = mutation if mutation in MUTATIONS else None
    pool = degree_pool_for(params.cost_pool)
    for trial in range(n_trials):
        rng = random.Random(f"{seed}:{trial}")
        gp = GameParams(
            n_agents=rng.randint(1, params.max_agents),
            n_actions=rng.randint(1, params.max_actions),
            n_outcomes=rng.randint(1, params.max_outcomes),
            max_plays=params.max_plays,
            cost_pool=params.cost_pool,
            propositions=params.propositions,
        )
        g = generate_game(gp, rng.getrandbits(64))
        ev = Evaluator(g, mutation=semantic)
        for name in SCHEMAS:
            if name == "Monotonicity" and mutation == "swap-monotonicity":
                f = corrupted_monotonicity(rng, params.propositions, g.agents, pool, params.depth)
            else:
                f = instantiate(name, sample_bindings(name, rng, params.propositions, g.agents, pool, params.depth))
            result = check_validity_in_game(g, f, ev)
            if result.valid_here:
                report.counts[name]["pass"] += 1
                continue
            report.counts[name]["fail"] += 1
            cex = {"trial": trial, "schema": name, "formula": print_formula(f), "play": result.failing_play}
            if out_dir is not None and len(report.counterexamples) < max_bundles:
                path = Path(out_dir) / f"counterexample_{trial:05d}_{name}.json"
                path.parent.mkdir(parents=True, exist_ok=True)
                save_game(g, path, meta={k: cex[k] for k in ("formula", "play", "schema")} | {"mutation": mutation})
                cex["bundle"] = str(path)
            report.counterexamples.append(cex)
    return report


# -- bounded countermodel search ---------------------------------------------

class SearchBudgetExceeded(ResourceLimitError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"countermodel search exceeded its budget of {budget} games")


@dataclass(frozen=True)
class SearchBounds:
    max_agents: int = 2
    max_actions: int = 2
    max_outcomes: int = 2
    max_plays: int = 3
    degree_pool: Optional[tuple] = None

    def __post_init__(self):
        for name in ("max_agents", "max_actions", "max_outcomes", "max_plays"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def default_degree_pool(f: Formula) -> list[Fraction]:
    """0, the degree constants of ``f``, and pairwise sums not exceeding the largest constant."""
    consts = degrees(f) | {Fraction(0)}
    top = max(consts)
    return sorted(consts | {a + b for a in consts for b in consts if a + b <= top})


def enumerate_games(bounds: SearchBounds, agents: Sequence[str], props: Sequence[str],
                    cost_pool: Sequence[Fraction]) -> Iterator[Game]:
    """All games within ``bounds`` up to renaming of non-zero actions, in a fixed order.

    ``agents`` must be included in every game; further agents are named x1, x2, ...
    """
    agents = list(agents)
    fresh = (f"x{k}" for k in itertools.count(1))
    pad = []
    while len(agents) + len(pad) < bounds.max_agents:
        name = next(fresh)
        if name not in agents:
            pad.append(name)
    pool = sorted({Fraction(c) for c in cost_pool} | {Fraction(0)})
    for n_agents in range(max(1, len(agents)), bounds.max_agents + 1):
        names = tuple(agents + pad[: n_agents - len(agents)])
        for n_actions in range(1, bounds.max_actions + 1):
            actions = [f"d{k}" for k in range(n_actions)]
            for extra in itertools.combinations_with_replacement(pool, n_actions - 1):
                costs = {"d0": Fraction(0), **dict(zip(actions[1:], extra))}
                for n_outcomes in range(1, bounds.max_outcomes + 1):
                    outcomes = tuple(f"o{k}" for k in range(n_outcomes))
                    pairs = [Play(prof, o) for prof in itertools.product(actions, repeat=n_agents)
                             for o in outcomes]
                    for k in range(1, min(bounds.max_plays, len(pairs)) + 1):
                        for chosen in itertools.combinations(pairs, k):
                            for masks in itertools.product(range(1 << k), repeat=len(props)):
                                valuation = {p: frozenset(i for i in range(k) if m >> i & 1)
                                             for p, m in zip(props, masks)}
                                yield Game(names, costs, "d0", outcomes, chosen, valuation)


@dataclass(frozen=True)
class Countermodel:
    game: Game
    play: int


def find_countermodel(f: Formula, bounds: SearchBounds = SearchBounds(),
                      node_budget: int = DEFAULT_NODE_BUDGET) -> Optional[Countermodel]:
    """First (game, play) within ``bounds`` where ``f`` is false, or None if there is none.

    None only means the bounds were exhausted; it is not a proof of validity.
    """
    pool = list(bounds.degree_pool) if bounds.degree_pool is not None else default_degree_pool(f)
    missing = (degrees(f) | {Fraction(0)}) - {Fraction(d) for d in pool}
    if missing:
        raise ValueError(f"degree_pool lacks {sorted(missing)[0]}, a constant of the formula")
    fa = sorted(formula_agents(f))
    if len(fa) > bounds.max_agents:
        raise ValueError(f"formula names {len(fa)} agents but max_agents is {bounds.max_agents}")
    props = sorted(variables(f))
    seen = 0
    for g in enumerate_games(bounds, fa, props, pool):
        seen += 1
        if seen > node_budget:
            raise SearchBudgetExceeded(node_budget)
        result = check_validity_in_game(g, f)
        if not result.valid_here:
            if Evaluator(g).evaluate(result.failing_play, f):
                raise AssertionError("countermodel failed re-check")
            return Countermodel(g, result.failing_play)
    return None
