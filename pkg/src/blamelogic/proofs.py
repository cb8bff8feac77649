"""Hilbert-style derivations: checking, the deduction transformation, and lemma fixtures.

Derivations are built from tautologies, axiom instances, hypotheses, Modus Ponens
and Necessitation. Necessitation only applies to lines whose support contains no
hypothesis; this restriction is what makes the deduction transformation valid.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from .axioms import (
    COALITION_SLOTS,
    DEGREE_SLOTS,
    FORMULA_SLOTS,
    SCHEMAS,
    SideConditionError,
    instantiate,
    match_shape,
    side_condition_violation,
)
from .errors import BlameLogicError, ResourceLimitError
from .formula import (
    Formula,
    FormulaSyntaxError,
    Implies,
    Nec,
    format_coalition,
    format_degree,
    is_tautology,
    parse_coalition,
    parse_degree,
    parse_formula,
    print_formula,
)

FIXTURES = ("lemma1_n2", "lemma2_n2", "lemma3", "lemma4_inner_n2", "lemma4_n2")


class DerivationError(BlameLogicError, ValueError):
    pass


@dataclass(frozen=True)
class Tautology:
    def __str__(self):
        return "taut"


@dataclass(frozen=True)
class Axiom:
    schema: str
    bindings: Optional[Mapping] = field(default=None, compare=False)

    def __str__(self):
        return f"axiom:{self.schema}"


@dataclass(frozen=True)
class Hypothesis:
    index: int

    def __str__(self):
        return f"hyp:{self.index}"


@dataclass(frozen=True)
class ModusPonens:
    minor: int
    major: int

    def __str__(self):
        return f"mp:{self.minor},{self.major}"


@dataclass(frozen=True)
class Necessitation:
    premise: int

    def __str__(self):
        return f"nec:{self.premise}"


Justification = Union[Tautology, Axiom, Hypothesis, ModusPonens, Necessitation]


@dataclass(frozen=True)
class Line:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    hypotheses: tuple
    lines: tuple
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        object.__setattr__(self, "lines", tuple(self.lines))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: Optional[int] = None
    code: Optional[str] = None
    reason: Optional[str] = None
    supports: tuple = ()

    def __str__(self):
        if self.ok:
            return "ok"
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.reason}"


def _fail(k: int, code: str, reason: str | None = None) -> CheckResult:
    return CheckResult(False, k, code, reason or code.replace("-", " "))


def check_derivation(d: Derivation) -> CheckResult:
    """Check every line in order; the first failing line is reported (1-based)."""
    if not d.lines:
        return _fail(0, "empty-derivation", "derivation has no lines")
    supports: list[frozenset] = []

    def ref(i: int, k: int) -> bool:
        return isinstance(i, int) and 1 <= i < k

    for k, line in enumerate(d.lines, 1):
        f, j = line.formula, line.justification
        if isinstance(j, Tautology):
            try:
                if not is_tautology(f):
                    return _fail(k, "not-a-tautology")
            except ResourceLimitError as e:
                return _fail(k, "resource", str(e))
            support = frozenset()
        elif isinstance(j, Axiom):
            if j.schema not in SCHEMAS:
                return _fail(k, "unknown-schema", f"unknown axiom schema {j.schema!r}")
            if j.bindings is not None:
                try:
                    expected = instantiate(j.schema, j.bindings)
                except SideConditionError as e:
                    return _fail(k, "side-condition", f"side condition {e.condition} fails")
                except ValueError as e:
                    return _fail(k, "bad-bindings", str(e))
                if expected != f:
                    return _fail(k, "formula-mismatch")
            else:
                b = match_shape(f, j.schema)
                if b is None:
                    return _fail(k, "not-an-instance", f"not an instance of {j.schema}")
                bad = side_condition_violation(j.schema, b)
                if bad:
                    return _fail(k, "side-condition", f"side condition {bad} fails")
            support = frozenset()
        elif isinstance(j, Hypothesis):
            if not (isinstance(j.index, int) and 0 <= j.index < len(d.hypotheses)):
                return _fail(k, "bad-reference", f"no hypothesis {j.index}")
            if d.hypotheses[j.index] != f:
                return _fail(k, "formula-mismatch")
            support = frozenset({j.index})
        elif isinstance(j, ModusPonens):
            if not (ref(j.minor, k) and ref(j.major, k)):
                return _fail(k, "bad-reference", "modus ponens must cite earlier lines")
            if d.lines[j.major - 1].formula != Implies(d.lines[j.minor - 1].formula, f):
                return _fail(k, "formula-mismatch")
            support = supports[j.minor - 1] | supports[j.major - 1]
        elif isinstance(j, Necessitation):
            if not ref(j.premise, k):
                return _fail(k, "bad-reference", "necessitation must cite an earlier line")
            if f != Nec(d.lines[j.premise - 1].formula):
                return _fail(k, "formula-mismatch")
            if supports[j.premise - 1]:
                return _fail(k, "necessitation-over-hypothesis")
            support = frozenset()
        else:
            return _fail(k, "unknown-rule", f"unknown justification {j!r}")
        supports.append(support)
    if d.conclusion != d.lines[-1].formula:
        return _fail(len(d.lines), "conclusion-mismatch", "conclusion differs from the last line")
    return CheckResult(True, supports=tuple(supports))


def deduction_transform(d: Derivation, phi: Formula) -> Derivation:
    """From ``X, phi ⊢ psi`` build a derivation of ``phi -> psi`` from ``X``.

    Every occurrence of ``phi`` is removed from the hypothesis list.
    """
    result = check_derivation(d)
    if not result.ok:
        raise DerivationError(f"input derivation does not check: {result}")
    drop = {i for i, h in enumerate(d.hypotheses) if h == phi}
    if not drop:
        raise DerivationError(f"{print_formula(phi)} is not a hypothesis")
    remap, kept = {}, []
    for i, h in enumerate(d.hypotheses):
        if i not in drop:
            remap[i] = len(kept)
            kept.append(h)

    out: list[Line] = []

    def emit(f: Formula, j: Justification) -> int:
        out.append(Line(f, j))
        return len(out)

    plain: dict[int, int] = {}
    cond: dict[int, int] = {}

    def conditional(k: int) -> int:
        # phi -> psi_k for a line that does not depend on phi, emitted on first use
        if k not in cond:
            psi = d.lines[k - 1].formula
            weaken = emit(Implies(psi, Implies(phi, psi)), Tautology())
            cond[k] = emit(Implies(phi, psi), ModusPonens(plain[k], weaken))
        return cond[k]

    for k, line in enumerate(d.lines, 1):
        psi, j = line.formula, line.justification
        if result.supports[k - 1] & drop:
            if isinstance(j, Hypothesis):
                cond[k] = emit(Implies(phi, phi), Tautology())
            elif isinstance(j, ModusPonens):
                a = d.lines[j.minor - 1].formula
                dist = emit(Implies(Implies(phi, Implies(a, psi)), Implies(Implies(phi, a), Implies(phi, psi))),
                            Tautology())
                step = emit(Implies(Implies(phi, a), Implies(phi, psi)), ModusPonens(conditional(j.major), dist))
                cond[k] = emit(Implies(phi, psi), ModusPonens(conditional(j.minor), step))
            else:
                raise DerivationError(f"line {k} applies {j} to a line depending on the discharged hypothesis")
            continue
        if isinstance(j, Hypothesis):
            j = Hypothesis(remap[j.index])
        elif isinstance(j, ModusPonens):
            j = ModusPonens(plain[j.minor], plain[j.major])
        elif isinstance(j, Necessitation):
            j = Necessitation(plain[j.premise])
        plain[k] = emit(psi, j)
    last = len(d.lines)
    if last in plain:
        conditional(last)
    if out[-1].formula != Implies(phi, d.conclusion):
        out.append(out[cond[last] - 1])

    transformed = Derivation(tuple(kept), tuple(out), Implies(phi, d.conclusion))
    check = check_derivation(transformed)
    if not check.ok:
        raise AssertionError(f"deduction transform produced an invalid derivation: {check}")
    return transformed


def discharge_all(d: Derivation) -> Derivation:
    """Discharge hypotheses last-to-first, yielding a hypothesis-free derivation."""
    while d.hypotheses:
        d = deduction_transform(d, d.hypotheses[-1])
    return d


# -- file format --------------------------------------------------------------

_RULE_RE = re.compile(r"^(taut|axiom:(?P<schema>[A-Za-z-]+)|hyp:(?P<hyp>\d+)|mp:(?P<i>\d+),(?P<j>\d+)|nec:(?P<n>\d+))$")


def parse_rule(rule: str, args: Mapping | None = None) -> Justification:
    m = _RULE_RE.match(rule.replace(" ", ""))
    if not m:
        raise DerivationError(f"unknown rule {rule!r}")
    if m.group("schema"):
        return Axiom(m.group("schema"), _parse_bindings(args) if args else None)
    if m.group("hyp"):
        return Hypothesis(int(m.group("hyp")))
    if m.group("i"):
        return ModusPonens(int(m.group("i")), int(m.group("j")))
    if m.group("n"):
        return Necessitation(int(m.group("n")))
    return Tautology()


def _parse_bindings(args: Mapping) -> dict:
    out = {}
    for k, v in args.items():
        if k in FORMULA_SLOTS:
            out[k] = parse_formula(v)
        elif k in COALITION_SLOTS:
            out[k] = parse_coalition(v)
        elif k in DEGREE_SLOTS:
            out[k] = parse_degree(str(v))
        else:
            raise DerivationError(f"unknown binding slot {k!r}")
    return out


def _format_bindings(b: Mapping) -> dict:
    out = {}
    for k, v in b.items():
        if k in FORMULA_SLOTS:
            out[k] = print_formula(v)
        elif k in COALITION_SLOTS:
            out[k] = format_coalition(v)
        else:
            out[k] = format_degree(v)
    return out


def derivation_from_document(doc: Mapping) -> Derivation:
    try:
        hyps = [parse_formula(h) for h in doc.get("hypotheses", [])]
        lines = []
        for k, entry in enumerate(doc["lines"], 1):
            try:
                f = parse_formula(entry["formula"])
                j = parse_rule(entry["rule"], entry.get("args"))
            except (FormulaSyntaxError, DerivationError) as e:
                raise DerivationError(f"line {k}: {e}") from None
            lines.append(Line(f, j))
        conclusion = parse_formula(doc["conclusion"]) if "conclusion" in doc else lines[-1].formula
    except KeyError as e:
        raise DerivationError(f"missing field {e.args[0]!r}") from None
    except FormulaSyntaxError as e:
        raise DerivationError(str(e)) from None
    return Derivation(tuple(hyps), tuple(lines), conclusion)


def derivation_to_document(d: Derivation) -> dict:
    lines = []
    for line in d.lines:
        entry = {"formula": print_formula(line.formula), "rule": str(line.justification)}
        if isinstance(line.justification, Axiom) and line.justification.bindings is not None:
            entry["args"] = _format_bindings(line.justification.bindings)
        lines.append(entry)
    return {
        "hypotheses": [print_formula(h) for h in d.hypotheses],
        "lines": lines,
        "conclusion": print_formula(d.conclusion),
    }


def load_derivation(path) -> Derivation:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DerivationError(f"not valid JSON: {e}") from None
    return derivation_from_document(doc)


def save_derivation(d: Derivation, path) -> None:
    Path(path).write_text(json.dumps(derivation_to_document(d), indent=2, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def fixture_path(name: str):
    return resources.files("blamelogic") / "fixtures" / f"{name}.json"


def load_fixture(name: str) -> Derivation:
    if name not in FIXTURES:
        raise KeyError(name)
    return derivation_from_document(json.loads(fixture_path(name).read_text(encoding="utf-8")))


def replay_lemma_fixtures(names: Sequence[str] = FIXTURES) -> dict:
    return {name: check_derivation(load_fixture(name)) for name in names}
