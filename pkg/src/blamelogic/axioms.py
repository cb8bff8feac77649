"""The nine axiom schemata: instantiation with side conditions and syntactic matching."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import BlameLogicError
from .formula import Blame, Formula, Implies, Nec, Not, conj, disj, possibly

SCHEMAS = (
    "Truth-N",
    "Truth-B",
    "Distributivity",
    "NegativeIntrospection",
    "NoneToBlame",
    "Monotonicity",
    "JointResponsibility",
    "BlameForCause",
    "Fairness",
)

SLOTS = {
    "Truth-N": ("phi",),
    "Truth-B": ("phi", "C", "s"),
    "Distributivity": ("phi", "psi"),
    "NegativeIntrospection": ("phi",),
    "NoneToBlame": ("phi", "s"),
    "Monotonicity": ("phi", "C", "D", "s", "t"),
    "JointResponsibility": ("phi", "psi", "C", "D", "s", "t"),
    "BlameForCause": ("phi", "psi", "C", "s"),
    "Fairness": ("phi", "C", "s"),
}

FORMULA_SLOTS = frozenset({"phi", "psi"})
COALITION_SLOTS = frozenset({"C", "D"})
DEGREE_SLOTS = frozenset({"s", "t"})


class SideConditionError(BlameLogicError, ValueError):
    def __init__(self, schema: str, condition: str):
        self.schema = schema
        self.condition = condition
        super().__init__(f"{schema}: side condition {condition} fails")


def _template(name: str, slot: Callable[[str], object], blame: Callable[[str, str, object], object]):
    phi, psi = slot("phi"), slot("psi") if "psi" in SLOTS[name] else None
    if name == "Truth-N":
        return Implies(Nec(phi), phi)
    if name == "Truth-B":
        return Implies(blame("C", "s", phi), phi)
    if name == "Distributivity":
        return Implies(Nec(Implies(phi, psi)), Implies(Nec(phi), Nec(psi)))
    if name == "NegativeIntrospection":
        return Implies(Not(Nec(phi)), Nec(Not(Nec(phi))))
    if name == "NoneToBlame":
        return Not(blame("EMPTY", "s", phi))
    if name == "Monotonicity":
        return Implies(blame("C", "s", phi), blame("D", "t", phi))
    if name == "JointResponsibility":
        either = disj(phi, psi)
        premise = conj(possibly(blame("C", "s", phi)), possibly(blame("D", "t", psi)))
        return Implies(premise, Implies(either, blame("CD", "st", either)))
    if name == "BlameForCause":
        return Implies(Nec(Implies(phi, psi)),
                       Implies(blame("C", "s", psi), Implies(phi, blame("C", "s", phi))))
    if name == "Fairness":
        return Implies(blame("C", "s", phi), Nec(Implies(phi, blame("C", "s", phi))))
    raise ValueError(f"unknown axiom schema {name!r}")


def side_condition_violation(name: str, b: Mapping) -> Optional[str]:
    if name == "Monotonicity":
        if not b["C"] <= b["D"]:
            return "C ⊆ D"
        if not b["s"] <= b["t"]:
            return "s ≤ t"
    if name == "JointResponsibility" and b["C"] & b["D"]:
        return "C ∩ D = ∅"
    return None


def normalize_bindings(name: str, bindings: Mapping) -> dict:
    if name not in SLOTS:
        raise ValueError(f"unknown axiom schema {name!r}")
    missing = [k for k in SLOTS[name] if k not in bindings]
    if missing:
        raise ValueError(f"{name}: missing binding for slot {missing[0]!r}")
    out = {}
    for k in SLOTS[name]:
        v = bindings[k]
        if k in COALITION_SLOTS:
            v = frozenset(v)
        elif k in DEGREE_SLOTS:
            v = Fraction(v)
            if v < 0:
                raise ValueError(f"{name}: degree slot {k!r} must be nonnegative")
        out[k] = v
    return out


def instantiate(name: str, bindings: Mapping) -> Formula:
    b = normalize_bindings(name, bindings)
    bad = side_condition_violation(name, b)
    if bad:
        raise SideConditionError(name, bad)
    full = dict(b, EMPTY=frozenset())
    if name == "JointResponsibility":
        full["CD"] = b["C"] | b["D"]
        full["st"] = b["s"] + b["t"]
    return _template(name, full.__getitem__, lambda c, s, x: Blame(full[c], full[s], x))


@dataclass(frozen=True)
class _Meta:
    name: str


@dataclass(frozen=True)
class _MetaBlame:
    coalition: str
    degree: str
    child: object


def _unify(p, f, env: dict) -> bool:
    if isinstance(p, _Meta):
        if p.name in env:
            return env[p.name] == f
        env[p.name] = f
        return True
    if isinstance(p, _MetaBlame):
        if not isinstance(f, Blame):
            return False
        for slot, value in ((p.coalition, f.coalition), (p.degree, f.degree)):
            if slot in env and env[slot] != value:
                return False
            env[slot] = value
        return _unify(p.child, f.child, env)
    if type(p) is not type(f):
        return False
    if isinstance(p, Implies):
        return _unify(p.left, f.left, env) and _unify(p.right, f.right, env)
    return _unify(p.child, f.child, env)


def _patterns() -> dict:
    return {name: _template(name, _Meta, _MetaBlame) for name in SCHEMAS}


_PATTERNS = _patterns()


def match_shape(f: Formula, name: str) -> Optional[dict]:
    """Bindings under which ``f`` has the syntactic form of schema ``name``, side conditions unchecked."""
    env: dict = {}
    if not _unify(_PATTERNS[name], f, env):
        return None
    if name == "NoneToBlame" and env["EMPTY"]:
        return None
    if name == "JointResponsibility":
        if env["CD"] != env["C"] | env["D"] or env["st"] != env["s"] + env["t"]:
            return None
    return {k: env[k] for k in SLOTS[name]}


def match_axiom(f: Formula, schema: str | None = None) -> Optional[tuple[str, dict]]:
    """First schema (in ``SCHEMAS`` order, or only ``schema``) that ``f`` instantiates."""
    for name in (schema,) if schema else SCHEMAS:
        b = match_shape(f, name)
        if b is not None and side_condition_violation(name, b) is None:
            return name, b
    return None
