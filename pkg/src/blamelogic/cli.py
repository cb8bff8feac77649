"""Command-line front end.

Machine-readable results go to stdout as ``key=value`` lines (the soundness report
is JSON); diagnostics go to stderr. Exit codes: 0 true/ok, 1 false/failed,
2 usage or input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import BlameLogicError, ResourceLimitError
from .formula import Blame, format_coalition, format_degree, parse_coalition, parse_degree, parse_formula, print_formula
from .game import load_game, save_game
from .proofs import FIXTURES, check_derivation, load_derivation, load_fixture
from .semantics import Evaluator
from .validity import (
    DEFAULT_NODE_BUDGET,
    SUITE_MUTATIONS,
    SearchBounds,
    SearchBudgetExceeded,
    SuiteParams,
    find_countermodel,
    soundness_suite,
)

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(**fields) -> None:
    for k, v in fields.items():
        print(f"{k}={v}")


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _witness(game, witness: dict | None) -> str:
    if witness is None:
        return "none"
    return ",".join(f"{a}:{witness[a]}" for a in game.agents if a in witness) or "{}"


def _evaluator(args):
    game = load_game(args.game)
    ev = Evaluator(game, lenient=args.lenient)
    if not (0 <= args.play < len(game.plays)):
        raise UsageError(f"play index out of range: {args.play} (game has {len(game.plays)} plays)")
    return game, ev


def cmd_check(args) -> int:
    game, ev = _evaluator(args)
    f = parse_formula(args.formula)
    holds = ev.evaluate(args.play, f)
    out = {"formula": print_formula(f), "play": args.play, "holds": _bool(holds)}
    if isinstance(f, Blame):
        v = ev.verdict(args.play, f.coalition, f.degree, f.child)
        out["minimal_degree"] = format_degree(v.minimal_degree) if v.minimal_degree is not None else "none"
        out["witness"] = _witness(game, v.witness)
    _emit(**out)
    return EXIT_TRUE if holds else EXIT_FALSE


def cmd_degree(args) -> int:
    game, ev = _evaluator(args)
    coalition = parse_coalition(args.coalition)
    f = parse_formula(args.formula)
    out = {"formula": print_formula(f), "play": args.play, "coalition": format_coalition(coalition)}
    if not ev.evaluate(args.play, f):
        _emit(**out, result="not blameable: φ false here")
        return EXIT_FALSE
    v = ev.verdict(args.play, coalition, 0, f)
    if v.minimal_degree is None:
        _emit(**out, result="not blameable: no preventing profile")
        return EXIT_FALSE
    _emit(**out, minimal_degree=format_degree(v.minimal_degree), witness=_witness(game, v.witness))
    return EXIT_TRUE


def cmd_soundness(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    params = SuiteParams(depth=args.depth)
    report = soundness_suite(params, seed=args.seed, n_trials=args.trials, mutation=args.mutate, out_dir=args.out)
    print(json.dumps(report.to_document(), indent=2))
    print(f"{report.trials} trials, {report.violations} violations", file=sys.stderr)
    return EXIT_TRUE if report.violations == 0 else EXIT_FALSE


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("BW_NODE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"BW_NODE_BUDGET is not an integer: {env!r}") from None
    return DEFAULT_NODE_BUDGET


def cmd_countermodel(args) -> int:
    f = parse_formula(args.formula)
    pool = None
    if args.degrees:
        pool = tuple(parse_degree(x) for x in args.degrees.split(","))
    bounds = SearchBounds(args.max_agents, args.max_actions, args.max_outcomes, args.max_plays, pool)
    found = find_countermodel(f, bounds, node_budget=_budget(args))
    if found is None:
        _emit(formula=print_formula(f), result="exhausted")
        print("no countermodel within bounds (this does not establish validity)", file=sys.stderr)
        return EXIT_FALSE
    save_game(found.game, args.out, meta={"formula": print_formula(f), "play": found.play})
    _emit(formula=print_formula(f), result="countermodel", play=found.play, game=args.out)
    return EXIT_TRUE


def cmd_prove(args) -> int:
    if args.fixture:
        d = load_fixture(args.fixture)
    else:
        if args.path is None:
            raise UsageError("give a derivation file or --fixture")
        d = load_derivation(args.path)
    result = check_derivation(d)
    if result.ok:
        _emit(status="ok", lines=len(d.lines), conclusion=print_formula(d.conclusion))
        return EXIT_TRUE
    _emit(status="error", line=result.line, code=result.code, reason=result.reason)
    print(str(result), file=sys.stderr)
    return EXIT_FALSE


def cmd_fmt(args) -> int:
    print(print_formula(parse_formula(args.formula)))
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blamelogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def game_args(p):
        p.add_argument("game", help="game file (JSON)")
        p.add_argument("play", type=int, help="0-based play index")
        p.add_argument("--lenient", action="store_true",
                       help="treat propositions missing from the valuation as false everywhere")

    p = sub.add_parser("check", help="evaluate a formula at a play")
    game_args(p)
    p.add_argument("formula")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("degree", help="least degree at which a coalition is blameable")
    game_args(p)
    p.add_argument("coalition", help="e.g. {a1,a2}")
    p.add_argument("formula")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("soundness", help="property-test the axioms over random games")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=2, help="modal depth cap for sampled slot formulas")
    p.add_argument("--mutate", choices=SUITE_MUTATIONS, help="run against a deliberately broken variant")
    p.add_argument("--out", help="directory for counterexample bundles")
    p.set_defaults(func=cmd_soundness)

    p = sub.add_parser(
        "countermodel",
        help="search small games for one falsifying a formula",
        description="Exhaustive search within the bounds. Finding nothing does not prove validity: "
                    "no finite model property is known for this logic.",
    )
    p.add_argument("formula")
    p.add_argument("--max-agents", type=int, default=2)
    p.add_argument("--max-actions", type=int, default=2)
    p.add_argument("--max-outcomes", type=int, default=2)
    p.add_argument("--max-plays", type=int, default=3)
    p.add_argument("--degrees", help="comma-separated cost pool (default: derived from the formula)")
    p.add_argument("--budget", type=int, help="max games to examine (default: $BW_NODE_BUDGET or "
                                              f"{DEFAULT_NODE_BUDGET})")
    p.add_argument("--out", default="countermodel.json", help="where to write the countermodel game")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("prove", help="check a derivation file")
    p.add_argument("path", nargs="?")
    p.add_argument("--fixture", choices=FIXTURES, help="check a bundled lemma fixture instead of a file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("fmt", help="reprint a formula in canonical form")
    p.add_argument("formula")
    p.set_defaults(func=cmd_fmt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_TRUE
    try:
        return args.func(args)
    except SearchBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ResourceLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, BlameLogicError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
