"""Finite cost-annotated games, profile costs, the on-disk format and a seeded generator."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import BlameLogicError
from .formula import format_degree, parse_degree


class GameError(BlameLogicError, ValueError):
    """Invalid game data. ``invariant`` names the rule that was broken."""

    def __init__(self, invariant: str, message: str, path: str | None = None):
        self.invariant = invariant
        self.path = path
        where = f" at {path}" if path else ""
        super().__init__(f"{invariant}{where}: {message}")


@dataclass(frozen=True)
class Play:
    """A complete action profile (one action per agent, in game agent order) and an outcome."""

    actions: tuple
    outcome: str


@dataclass(frozen=True)
class Game:
    agents: tuple
    costs: Mapping[str, Fraction]
    zero_action: str
    outcomes: tuple
    plays: tuple
    valuation: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "costs", {a: Fraction(c) for a, c in self.costs.items()})
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "plays", tuple(self.plays))
        object.__setattr__(self, "valuation", {p: frozenset(s) for p, s in self.valuation.items()})
        self._validate()
        object.__setattr__(self, "_agent_index", {a: i for i, a in enumerate(self.agents)})

    def _validate(self):
        if not self.agents:
            raise GameError("agents nonempty", "a game needs at least one agent", "agents")
        if len(set(self.agents)) != len(self.agents):
            raise GameError("agents distinct", "duplicate agent name", "agents")
        if not self.costs:
            raise GameError("actions nonempty", "a game needs at least one action", "actions")
        for a, c in self.costs.items():
            if c < 0:
                raise GameError("cost nonnegative", f"action {a!r} has cost {c}", f"actions.{a}.cost")
        if self.zero_action not in self.costs:
            raise GameError("zero_action declared", f"{self.zero_action!r} is not an action", "zero_action")
        if self.costs[self.zero_action] != 0:
            raise GameError("zero_action cost is 0",
                            f"{self.zero_action!r} costs {self.costs[self.zero_action]}", "zero_action")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise GameError("outcomes distinct", "duplicate outcome name", "outcomes")
        if not self.plays:
            raise GameError("plays nonempty", "a game needs at least one play", "plays")
        outcomes = set(self.outcomes)
        for i, play in enumerate(self.plays):
            if len(play.actions) != len(self.agents):
                raise GameError("play profile total", f"play {i} assigns {len(play.actions)} actions "
                                f"to {len(self.agents)} agents", f"plays[{i}].profile")
            for a, d in zip(self.agents, play.actions):
                if d not in self.costs:
                    raise GameError("play action declared", f"unknown action {d!r}", f"plays[{i}].profile.{a}")
            if play.outcome not in outcomes:
                raise GameError("play outcome declared", f"unknown outcome {play.outcome!r}",
                                f"plays[{i}].outcome")
        if len(set(self.plays)) != len(self.plays):
            raise GameError("plays distinct", "the same (profile, outcome) pair is listed twice", "plays")
        n = len(self.plays)
        for p, s in self.valuation.items():
            bad = [i for i in s if not (isinstance(i, int) and 0 <= i < n)]
            if bad:
                raise GameError("valuation out of range", f"{p!r} cites play index {bad[0]} of {n}",
                                f"valuation.{p}")

    @property
    def actions(self) -> tuple:
        return tuple(self.costs)

    def agent_index(self, agent: str) -> int:
        try:
            return self._agent_index[agent]
        except KeyError:
            raise GameError("agent declared", f"unknown agent {agent!r}") from None

    def profile(self, play_index: int) -> dict:
        """The complete action profile of a play as an agent -> action map."""
        return dict(zip(self.agents, self.plays[play_index].actions))

    def restrict(self, play_index: int, coalition: Iterable[str]) -> dict:
        actions = self.plays[play_index].actions
        return {a: actions[self.agent_index(a)] for a in coalition}


def build_game(agents: Sequence[str], costs: Mapping[str, object], zero_action: str,
               outcomes: Sequence[str], plays: Iterable[tuple[Mapping[str, str], str]],
               valuation: Mapping[str, Iterable[int]] | None = None) -> Game:
    """Build a game from agent-keyed profiles.

    Repeated (profile, outcome) pairs denote the same element of the play set and
    are merged; their valuation memberships must agree.
    """
    agents = tuple(agents)
    raw: list[Play] = []
    for i, (profile, outcome) in enumerate(plays):
        missing = [a for a in agents if a not in profile]
        extra = [a for a in profile if a not in agents]
        if missing:
            raise GameError("play profile total", f"no action for agent {missing[0]!r}", f"plays[{i}].profile")
        if extra:
            raise GameError("play profile total", f"unknown agent {extra[0]!r}", f"plays[{i}].profile")
        raw.append(Play(tuple(profile[a] for a in agents), outcome))
    valuation = {p: set(s) for p, s in (valuation or {}).items()}
    n = len(raw)
    for p, s in valuation.items():
        bad = [i for i in s if not (isinstance(i, int) and not isinstance(i, bool) and 0 <= i < n)]
        if bad:
            raise GameError("valuation out of range", f"{p!r} cites play index {bad[0]} of {n}", f"valuation.{p}")

    first: dict[Play, int] = {}
    remap: list[int] = []
    unique: list[Play] = []
    for i, play in enumerate(raw):
        if play in first:
            j = first[play]
            for p, s in valuation.items():
                if (i in s) != (j in s):
                    raise GameError("duplicate plays agree", f"plays {j} and {i} are the same pair but "
                                    f"differ on {p!r}", f"valuation.{p}")
            remap.append(remap[j])
        else:
            first[play] = i
            remap.append(len(unique))
            unique.append(play)
    merged = {p: frozenset(remap[i] for i in s) for p, s in valuation.items()}
    return Game(agents, dict(costs), zero_action, tuple(outcomes), tuple(unique), merged)


def profile_cost(g: Game, gamma: Mapping[str, str]) -> Fraction:
    """Total cost of a coalition action profile; 0 for the empty profile."""
    total = Fraction(0)
    for agent, action in gamma.items():
        g.agent_index(agent)
        if action not in g.costs:
            raise GameError("action declared", f"unknown action {action!r} for agent {agent!r}")
        total += g.costs[action]
    return total


def agrees_on(delta: Mapping[str, str], gamma: Mapping[str, str], coalition: Iterable[str]) -> bool:
    """True iff both profiles pick the same action for every member of ``coalition``."""
    for a in coalition:
        if a not in delta or a not in gamma:
            raise GameError("agent in profile domain", f"agent {a!r} is outside a profile's domain")
        if delta[a] != gamma[a]:
            return False
    return True


def figure1_game() -> Game:
    """Three passers-by who may help (cost 1000) or ignore (free); only a1 or a2 can save the child."""
    agents = ("a1", "a2", "a3")
    plays = []
    for d1 in ("ignore", "help"):
        for d2 in ("ignore", "help"):
            for d3 in ("ignore", "help"):
                outcome = "alive" if "help" in (d1, d2) else "dead"
                plays.append(Play((d1, d2, d3), outcome))
    valuation = {
        "dead": {i for i, p in enumerate(plays) if p.outcome == "dead"},
        "alive": {i for i, p in enumerate(plays) if p.outcome == "alive"},
        "a2helps_implies_alive": {i for i, p in enumerate(plays)
                                  if p.actions[1] != "help" or p.outcome == "alive"},
    }
    return Game(agents, {"help": Fraction(1000), "ignore": Fraction(0)}, "ignore",
                ("alive", "dead"), tuple(plays), valuation)


# -- file format -------------------------------------------------------------

def game_to_document(g: Game) -> dict:
    return {
        "agents": list(g.agents),
        "actions": [{"name": a, "cost": format_degree(c)} for a, c in g.costs.items()],
        "zero_action": g.zero_action,
        "outcomes": list(g.outcomes),
        "plays": [{"profile": dict(zip(g.agents, p.actions)), "outcome": p.outcome} for p in g.plays],
        "valuation": {p: sorted(s) for p, s in sorted(g.valuation.items())},
    }


def _require(doc: Mapping, key: str, kind, path: str):
    if key not in doc:
        raise GameError(f"{key} missing", f"required field {key!r} is absent", path + key)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise GameError("schema", f"expected {getattr(kind, '__name__', kind)}", path + key)
    return value


def _name(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise GameError("schema", "expected a nonempty string", path)
    return value


def _cost(value, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise GameError("schema", "cost must be a string like '3/2' or '1.5', or an integer", path)
    try:
        return parse_degree(str(value))
    except ValueError as e:
        raise GameError("schema", f"bad cost {value!r}: {e}", path) from None


def game_from_document(doc: Mapping) -> Game:
    if not isinstance(doc, Mapping):
        raise GameError("schema", "a game document must be an object", "$")
    agents = [_name(a, f"agents[{i}]") for i, a in enumerate(_require(doc, "agents", list, ""))]
    costs: dict[str, Fraction] = {}
    for i, entry in enumerate(_require(doc, "actions", list, "")):
        if not isinstance(entry, Mapping):
            raise GameError("schema", "expected an object with name and cost", f"actions[{i}]")
        name = _name(_require(entry, "name", str, f"actions[{i}]."), f"actions[{i}].name")
        if name in costs:
            raise GameError("actions distinct", f"action {name!r} declared twice", f"actions[{i}].name")
        if "cost" not in entry:
            raise GameError("cost missing", "required field 'cost' is absent", f"actions[{i}].cost")
        costs[name] = _cost(entry["cost"], f"actions[{i}].cost")
    zero = _name(_require(doc, "zero_action", str, ""), "zero_action")
    outcomes = [_name(o, f"outcomes[{i}]") for i, o in enumerate(_require(doc, "outcomes", list, ""))]
    plays = []
    for i, entry in enumerate(_require(doc, "plays", list, "")):
        if not isinstance(entry, Mapping):
            raise GameError("schema", "expected an object with profile and outcome", f"plays[{i}]")
        profile = _require(entry, "profile", dict, f"plays[{i}].")
        for a, d in profile.items():
            _name(d, f"plays[{i}].profile.{a}")
        outcome = _name(_require(entry, "outcome", str, f"plays[{i}]."), f"plays[{i}].outcome")
        plays.append((profile, outcome))
    valuation = {}
    for p, idx in doc.get("valuation", {}).items():
        if not isinstance(idx, list):
            raise GameError("schema", "expected a list of play indices", f"valuation.{p}")
        for k, i in enumerate(idx):
            if isinstance(i, bool) or not isinstance(i, int):
                raise GameError("schema", "play index must be an integer", f"valuation.{p}[{k}]")
        valuation[p] = idx
    return build_game(agents, costs, zero, outcomes, plays, valuation)


def save_game(g: Game, path, meta: Mapping | None = None) -> None:
    doc = game_to_document(g)
    if meta:
        doc["meta"] = dict(meta)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_game(path) -> Game:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GameError("schema", f"not valid JSON: {e}", "$") from None
    return game_from_document(doc)


def load_meta(path) -> dict:
    """The optional ``meta`` block of a game file (used by counterexample bundles)."""
    return dict(json.loads(Path(path).read_text(encoding="utf-8")).get("meta", {}))


# -- random generation -------------------------------------------------------

@dataclass(frozen=True)
class GameParams:
    n_agents: int = 2
    n_actions: int = 2
    n_outcomes: int = 2
    max_plays: int = 6
    cost_pool: tuple = (Fraction(0), Fraction(1), Fraction(2))
    propositions: tuple = ("p", "q")


def _decode(index: int, n_agents: int, n_actions: int, n_outcomes: int) -> tuple[tuple[int, ...], int]:
    index, outcome = divmod(index, n_outcomes)
    digits = []
    for _ in range(n_agents):
        index, d = divmod(index, n_actions)
        digits.append(d)
    return tuple(reversed(digits)), outcome


def generate_game(params: GameParams, seed) -> Game:
    if params.n_agents < 1 or params.n_actions < 1 or params.n_outcomes < 1 or params.max_plays < 1:
        raise ValueError("n_agents, n_actions, n_outcomes and max_plays must all be >= 1")
    pool = sorted({Fraction(c) for c in params.cost_pool})
    if not pool:
        raise ValueError("cost_pool is empty")
    if pool[0] != 0:
        raise ValueError("cost_pool must contain 0")
    rng = random.Random(seed)
    agents = tuple(f"a{i + 1}" for i in range(params.n_agents))
    actions = [f"d{i}" for i in range(params.n_actions)]
    costs = {actions[0]: Fraction(0)}
    for a in actions[1:]:
        costs[a] = rng.choice(pool)
    outcomes = tuple(f"o{i}" for i in range(params.n_outcomes))
    total = params.n_actions ** params.n_agents * params.n_outcomes
    k = rng.randint(1, min(params.max_plays, total))
    plays = []
    for index in sorted(rng.sample(range(total), k)):
        digits, o = _decode(index, params.n_agents, params.n_actions, params.n_outcomes)
        plays.append(Play(tuple(actions[d] for d in digits), outcomes[o]))
    valuation = {p: frozenset(i for i in range(k) if rng.random() < 0.5) for p in params.propositions}
    return Game(agents, costs, actions[0], outcomes, tuple(plays), valuation)
