"""Formula AST, concrete syntax, canonical printer and propositional tautology check.

Concrete syntax (ASCII)::

    formula := imp
    imp     := or ("->" imp)?            right associative
    or      := and ("|" and)*            left associative
    and     := unary ("&" unary)*        left associative
    unary   := "!" unary | "N" unary | "~N" unary | blame | atom
    blame   := "B" "[" "{" agents? "}" ";" degree "]" unary
    atom    := ident | "(" formula ")"
    degree  := decimal | integer "/" integer

Only ``!``, ``->``, ``N`` and ``B`` survive into the AST. The sugar is expanded
while parsing: ``a & b`` becomes ``!(a -> !b)``, ``a | b`` becomes ``!a -> b``
and ``~N a`` becomes ``!N!a``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import BlameLogicError, ResourceLimitError

DEFAULT_ATOM_CAP = 20

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_OPERATOR_WORD_RE = re.compile(r"N+B?")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Nec:
    """Universal modality: the child holds at every play of the game."""

    child: "Formula"

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Blame:
    """Coalition ``coalition`` is blameable for ``child`` with degree ``degree``."""

    coalition: frozenset
    degree: Fraction
    child: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))
        degree = Fraction(self.degree)
        if degree < 0:
            raise ValueError(f"blame degree must be nonnegative, got {degree}")
        object.__setattr__(self, "degree", degree)

    def __str__(self) -> str:
        return print_formula(self)


Formula = Union[Var, Not, Implies, Nec, Blame]


def conj(a: Formula, b: Formula) -> Formula:
    return Not(Implies(a, Not(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Implies(Not(a), b)


def possibly(a: Formula) -> Formula:
    """The dual of N: ``!N!a``."""
    return Not(Nec(Not(a)))


class FormulaSyntaxError(BlameLogicError, ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)

    def here() -> tuple[int, int]:
        return line, pos - line_start + 1

    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            line_start = pos
            continue
        if ch.isspace():
            pos += 1
            continue
        ln, col = here()
        if text.startswith("->", pos):
            tokens.append(_Token("->", "->", ln, col))
            pos += 2
            continue
        if ch == "-":
            tokens.append(_Token("-", "-", ln, col))
            pos += 1
            continue
        if ch in "!~&|[]{};,()/":
            tokens.append(_Token(ch, ch, ln, col))
            pos += 1
            continue
        m = _NUMBER_RE.match(text, pos)
        if m:
            tokens.append(_Token("number", m.group(), ln, col))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            word = m.group()
            rest = text[m.end():].lstrip()
            if _OPERATOR_WORD_RE.fullmatch(word) and (not word.endswith("B") or rest.startswith("[")):
                # runs like "NNB[" are stacked operators, not identifiers
                for k, op in enumerate(word):
                    tokens.append(_Token(op, op, ln, col + k))
            elif word == "B":
                tokens.append(_Token("B", "B", ln, col))
            else:
                tokens.append(_Token("ident", word, ln, col))
            pos = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", ln, col)
    ln, col = here()
    tokens.append(_Token("eof", "", ln, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected: Iterable[str], message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise FormulaSyntaxError(message or f"unexpected {found}", t.line, t.column, expected)

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def parse_formula(self) -> Formula:
        f = self.imp()
        if self.tok.kind != "eof":
            self.fail({"->", "|", "&", "end of input"})
        return f

    def imp(self) -> Formula:
        left = self.disjunction()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.imp())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.tok.kind == "|":
            self.advance()
            f = disj(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "&":
            self.advance()
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "!":
            self.advance()
            return Not(self.unary())
        if kind == "N":
            self.advance()
            return Nec(self.unary())
        if kind == "~":
            self.advance()
            self.expect("N")
            return possibly(self.unary())
        if kind == "B":
            return self.blame()
        if kind == "ident":
            return Var(self.advance().text)
        if kind == "(":
            self.advance()
            f = self.imp()
            self.expect(")")
            return f
        self.fail({"!", "N", "~N", "B", "identifier", "("})

    def blame(self) -> Blame:
        self.expect("B")
        self.expect("[")
        coalition = self.coalition()
        self.expect(";")
        degree = self.degree()
        self.expect("]")
        return Blame(coalition, degree, self.unary())

    def coalition(self) -> frozenset:
        self.expect("{")
        members: list[str] = []
        if self.tok.kind != "}":
            members.append(self.agent())
            while self.tok.kind == ",":
                self.advance()
                members.append(self.agent())
        if self.tok.kind != "}":
            self.fail({",", "}"}, "malformed coalition")
        self.advance()
        return frozenset(members)

    def agent(self) -> str:
        if self.tok.kind != "ident":
            self.fail({"agent name"}, "malformed coalition")
        return self.advance().text

    def degree(self) -> Fraction:
        if self.tok.kind == "-":
            self.fail({"nonnegative degree"}, "negative degree literal")
        num = self.expect("number")
        value = Fraction(num.text)
        if self.tok.kind == "/":
            if "." in num.text:
                self.fail({"]"}, "fraction numerator must be an integer")
            self.advance()
            den = self.expect("number")
            if "." in den.text or int(den.text) == 0:
                raise FormulaSyntaxError("fraction denominator must be a positive integer",
                                         den.line, den.column, {"positive integer"})
            value = Fraction(int(num.text), int(den.text))
        return value


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse_formula()


def parse_coalition(text: str) -> frozenset:
    """Parse a coalition written as in formulas, e.g. ``{a1,a2}`` or ``{}``."""
    p = _Parser(text)
    c = p.coalition()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return c


def parse_degree(text: str) -> Fraction:
    p = _Parser(text)
    d = p.degree()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return d


def format_degree(d: Fraction) -> str:
    d = Fraction(d)
    return str(d.numerator) if d.denominator == 1 else f"{d.numerator}/{d.denominator}"


def format_coalition(c: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(c)) + "}"


def print_formula(f: Formula) -> str:
    return _print(f, top=True)


def _print(f: Formula, top: bool) -> str:
    # top=False means the formula sits in a unary or left-of-arrow slot
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Implies):
        text = f"{_print(f.left, top=False)} -> {_print(f.right, top=True)}"
        return text if top else f"({text})"
    if isinstance(f, Not):
        return "!" + _print(f.child, top=False)
    if isinstance(f, Nec):
        sep = " " if isinstance(f.child, Var) else ""
        return "N" + sep + _print(f.child, top=False)
    if isinstance(f, Blame):
        return (f"B[{format_coalition(f.coalition)}; {format_degree(f.degree)}] "
                + _print(f.child, top=False))
    raise TypeError(f"not a formula: {f!r}")


def children(f: Formula) -> tuple:
    if isinstance(f, Var):
        return ()
    if isinstance(f, Implies):
        return (f.left, f.right)
    return (f.child,)


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subformulas, children before parents."""
    seen: set = set()
    out: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if expanded:
            if g not in seen:
                seen.add(g)
                out.append(g)
            continue
        if g in seen:
            continue
        stack.append((g, True))
        for c in reversed(children(g)):
            stack.append((c, False))
    return out


def iter_nodes(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def variables(f: Formula) -> set[str]:
    return {g.name for g in iter_nodes(f) if isinstance(g, Var)}


def agents(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in iter_nodes(f):
        if isinstance(g, Blame):
            out |= g.coalition
    return out


def degrees(f: Formula) -> set[Fraction]:
    return {g.degree for g in iter_nodes(f) if isinstance(g, Blame)}


def modal_depth(f: Formula) -> int:
    if isinstance(f, Var):
        return 0
    if isinstance(f, Implies):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Not):
        return modal_depth(f.child)
    return 1 + modal_depth(f.child)


def propositional_atoms(f: Formula) -> list[Formula]:
    """Variables and maximal modal subformulas, in first-occurrence order."""
    atoms: list[Formula] = []
    seen: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Not):
            stack.append(g.child)
        elif isinstance(g, Implies):
            stack.append(g.right)
            stack.append(g.left)
        elif g not in seen:
            seen.add(g)
            atoms.append(g)
    return atoms


def _truth(f: Formula, assignment: dict) -> bool:
    if isinstance(f, Not):
        return not _truth(f.child, assignment)
    if isinstance(f, Implies):
        return (not _truth(f.left, assignment)) or _truth(f.right, assignment)
    return assignment[f]


def is_tautology(f: Formula, max_atoms: int = DEFAULT_ATOM_CAP) -> bool:
    atoms = propositional_atoms(f)
    if len(atoms) > max_atoms:
        raise ResourceLimitError(f"tautology check over {len(atoms)} atoms exceeds cap of {max_atoms}")
    for values in itertools.product((False, True), repeat=len(atoms)):
        if not _truth(f, dict(zip(atoms, values))):
            return False
    return True


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace variables by formulas (uniform substitution)."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, Blame):
        return Blame(f.coalition, f.degree, substitute(f.child, mapping))
    return type(f)(substitute(f.child, mapping))
