"""Independent reference implementations used only by the tests.

Everything here follows the satisfaction clauses literally, with full enumeration
and no memoization, so it shares no search code with the library.
"""

import itertools
from fractions import Fraction

from blamelogic.formula import Blame, Implies, Nec, Not, Var


def all_profiles(game, coalition):
    members = [a for a in game.agents if a in coalition]
    for choice in itertools.product(list(game.costs), repeat=len(members)):
        yield dict(zip(members, choice))


def cost(game, gamma):
    return sum((game.costs[d] for d in gamma.values()), Fraction(0))


def agrees(game, play_index, gamma):
    actions = game.plays[play_index].actions
    return all(actions[game.agents.index(a)] == d for a, d in gamma.items())


def holds(game, i, f):
    if isinstance(f, Var):
        return i in game.valuation.get(f.name, frozenset())
    if isinstance(f, Not):
        return not holds(game, i, f.child)
    if isinstance(f, Implies):
        return (not holds(game, i, f.left)) or holds(game, i, f.right)
    if isinstance(f, Nec):
        return all(holds(game, j, f.child) for j in range(len(game.plays)))
    if isinstance(f, Blame):
        if not holds(game, i, f.child):
            return False
        for gamma in all_profiles(game, f.coalition):
            if cost(game, gamma) > f.degree:
                continue
            if all(not holds(game, j, f.child) for j in range(len(game.plays)) if agrees(game, j, gamma)):
                return True
        return False
    raise TypeError(f)


def prevention(game, coalition, f):
    """(cost, witness) of the cheapest preventing profile, ties broken by declaration order."""
    order = {d: k for k, d in enumerate(game.costs)}
    truth = [holds(game, j, f) for j in range(len(game.plays))]
    best = None
    for gamma in all_profiles(game, coalition):
        if any(agrees(game, j, gamma) and truth[j] for j in range(len(game.plays))):
            continue
        key = (cost(game, gamma), tuple(order[gamma[a]] for a in game.agents if a in gamma))
        if best is None or key < best[0]:
            best = (key, gamma)
    if best is None:
        return None
    return best[0][0], best[1]


def truth_table_tautology(f):
    """Tautology check by plain recursion over every assignment to the modal/variable atoms."""
    atoms = []

    def collect(g):
        if isinstance(g, Not):
            collect(g.child)
        elif isinstance(g, Implies):
            collect(g.left)
            collect(g.right)
        elif g not in atoms:
            atoms.append(g)

    def value(g, row):
        if isinstance(g, Not):
            return not value(g.child, row)
        if isinstance(g, Implies):
            return (not value(g.left, row)) or value(g.right, row)
        return row[atoms.index(g)]

    collect(f)
    return all(value(f, row) for row in itertools.product([False, True], repeat=len(atoms)))
