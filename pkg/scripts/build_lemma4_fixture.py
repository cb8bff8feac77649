"""Assemble the lemma4_n2 derivation from the lemma4_inner_n2 fixture and freeze it as JSON.

Steps: discharge r (deduction transform), lift under N by discharging the remaining
hypotheses and applying Necessitation + Distributivity, turn each ~N hypothesis into its
N-version with Negative Introspection, and get NN(r -> p | q) from positive introspection.
"""

import sys
from pathlib import Path

from blamelogic.formula import Implies, Nec, substitute
from blamelogic.proofs import (
    Axiom, Derivation, Hypothesis, Line, ModusPonens, Necessitation, check_derivation,
    deduction_transform, discharge_all, fixture_path, load_fixture, save_derivation,
)


def build() -> Derivation:
    inner = load_fixture("lemma4_inner_n2")
    h1, h2, r, m = inner.hypotheses
    step = deduction_transform(inner, r)                      # h1, h2, m |- r -> B r
    closed = discharge_all(step)                              # |- h1 -> h2 -> m -> (r -> B r)
    lines = list(closed.lines)

    def emit(f, j):
        lines.append(Line(f, j))
        return len(lines)

    cur = emit(Nec(closed.conclusion), Necessitation(len(lines)))
    body = closed.conclusion
    for k, hyp in enumerate((h1, h2)):
        rest = body.right
        dist = emit(Implies(Nec(body), Implies(Nec(hyp), Nec(rest))), Axiom("Distributivity"))
        lifted = emit(Implies(Nec(hyp), Nec(rest)), ModusPonens(cur, dist))
        given = emit(hyp, Hypothesis(k))
        ni = emit(Implies(hyp, Nec(hyp)), Axiom("NegativeIntrospection"))
        boxed = emit(Nec(hyp), ModusPonens(given, ni))
        cur = emit(Nec(rest), ModusPonens(boxed, lifted))
        body = rest
    target = body.right                                        # r -> B r
    dist = emit(Implies(Nec(body), Implies(Nec(m), Nec(target))), Axiom("Distributivity"))
    lifted = emit(Implies(Nec(m), Nec(target)), ModusPonens(cur, dist))

    offset = len(lines)
    for line in load_fixture("lemma3").lines:              # N m -> NN m with p := r -> p | q
        j = line.justification
        if isinstance(j, ModusPonens):
            j = ModusPonens(j.minor + offset, j.major + offset)
        elif isinstance(j, Necessitation):
            j = Necessitation(j.premise + offset)
        emit(substitute(line.formula, {"p": m.child}), j)
    pi = len(lines)
    given = emit(m, Hypothesis(2))
    boxed = emit(Nec(m), ModusPonens(given, pi))
    emit(Nec(target), ModusPonens(boxed, lifted))
    return Derivation((h1, h2, m), tuple(lines), Nec(target))


if __name__ == "__main__":
    d = build()
    result = check_derivation(d)
    if not result.ok:
        sys.exit(f"assembled derivation does not check: {result}")
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(str(fixture_path("lemma4_n2")))
    save_derivation(d, out)
    print(f"{len(d.lines)} lines -> {out}")
