"""Command-line interface: ``qqmark classify|solve|simulate|verify-paper|orbit``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import TextIO

from . import instances
from .ensemble import TargetSet, canonical_form, case_signature, orbit, parse_signature
from .errors import InapplicableStrategyError, MalformedStrategyError
from .protocol import dead_pair_exists, simulate
from .solver import Budget, Markable, classify, decide_markable
from .strategies import n4_strategy, n5_strategy, n6_strategy, n7_attempt, verify_strategy
from .tree import StrategyTree, depth, dumps, loads

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _budget(args) -> Budget:
    return Budget(args.max_nodes, args.max_seconds)


def _parse_set(text: str) -> TargetSet:
    try:
        return TargetSet.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad target set: {exc}") from None


def _parse_hidden(text: str, n: int) -> tuple[int, ...]:
    try:
        hidden = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--hidden must be comma-separated integers, got {text!r}") from None
    if sorted(hidden) != list(range(n)):
        raise UsageError(f"--hidden must be a permutation of 0..{n - 1}, got {text!r}")
    return hidden


def scripted_tree(ts: TargetSet) -> StrategyTree:
    if ts.n == 4:
        return n4_strategy(ts)
    if ts.n in (5, 6):
        out = n5_strategy(ts) if ts.n == 5 else n6_strategy(ts)
        if out.tree is None:
            raise InapplicableStrategyError(f"no scripted strategy: {out.reason}")
        return out.tree
    raise InapplicableStrategyError(f"no scripted strategy for {ts.n} targets")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args, out: TextIO) -> int:
    flt = None
    if args.signature:
        try:
            flt = parse_signature(args.signature)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = classify(args.n, flt, _budget(args), raw=args.raw, jobs=args.jobs)
    lines = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(lines)
    else:
        out.write(lines)
    return EXIT_BUDGET if any(r["verdict"] == "Undecided" for r in rows) else EXIT_OK


def cmd_solve(args, out: TextIO) -> int:
    ts = _parse_set(args.set)
    verdict, stats = decide_markable(ts, _budget(args))
    out.write(f"{verdict.kind}\n")
    out.write(json.dumps({"stats": stats.to_dict()}) + "\n")
    if isinstance(verdict, Markable):
        out.write(dumps(verdict.witness) + "\n")
        return EXIT_OK
    if verdict.kind == "Undecided":
        return EXIT_BUDGET
    return EXIT_MISMATCH if args.assert_markable else EXIT_OK


def cmd_simulate(args, out: TextIO) -> int:
    ts = _parse_set(args.set)
    hidden = _parse_hidden(args.hidden, ts.n)
    if args.strategy == "paper":
        try:
            tree = scripted_tree(ts)
        except InapplicableStrategyError as exc:
            out.write(f"{exc}\n")
            return EXIT_MISMATCH
    else:
        try:
            with open(args.strategy, encoding="utf-8") as fh:
                tree = loads(fh.read())
        except (OSError, json.JSONDecodeError, MalformedStrategyError) as exc:
            raise UsageError(f"cannot load strategy: {exc}") from None
    seed = args.seed if args.seed is not None else int(os.environ.get("QQMARK_SEED", "0"))
    trace = simulate(ts, hidden, tree, seed)
    out.write((trace.to_json() if args.trace == "json" else trace.render()) + "\n")
    return EXIT_OK if trace.success else EXIT_MISMATCH


def cmd_orbit(args, out: TextIO) -> int:
    ts = _parse_set(args.set)
    members = sorted(orbit(ts), key=str)
    out.write(f"canonical {canonical_form(ts)}\n")
    out.write(f"signature {case_signature(ts)}\n")
    out.write(f"orbit size {len(members)}\n")
    for m in members:
        out.write(f"{m}\n")
    return EXIT_OK


class _Report:
    def __init__(self, out: TextIO):
        self.out = out
        self.failed = 0

    def claim(self, ok: bool, text: str) -> None:
        self.out.write(f"{'PASS' if ok else 'FAIL'} {text}\n")
        self.failed += not ok

    def note(self, text: str) -> None:
        self.out.write(f"NOTE {text}\n")


def _verify_four(rep: _Report, budget: Budget) -> None:
    from .ensemble import enumerate_sets

    total = solved = scripted = 0
    for ts in enumerate_sets(4):
        total += 1
        solved += decide_markable(ts, budget)[0].kind == "Markable"
        scripted += verify_strategy(ts, n4_strategy(ts)).success
    rep.claim(solved == total, f"solver: {solved}/{total} four-target sets markable")
    rep.claim(scripted == total, f"scripted: {scripted}/{total} four-target trees verified")


def _verify_five(rep: _Report, budget: Budget) -> None:
    for inst in instances.FIVE_MARKABLE:
        out = n5_strategy(inst.ts)
        ok = out.tree is not None and verify_strategy(inst.ts, out.tree).success
        rep.claim(ok, f"{inst.name} {inst.text}: scripted tree verified")
    for inst in instances.FIVE_UNMARKABLE:
        out = n5_strategy(inst.ts)
        ok = out.tree is None and out.obstruction is not None and out.obstruction.verified(inst.ts)
        reason = out.reason or "tree returned"
        rep.claim(ok, f"{inst.name} {inst.text}: scripted strategy fails ({reason})")
        verdict = decide_markable(inst.ts, budget)[0]
        if verdict.kind == "Markable":
            rep.note(f"beyond-paper finding: solver marks {inst.text} (depth {depth(verdict.witness)})")
        else:
            rep.note(f"solver verdict for {inst.text}: {verdict.kind}")


def _verify_six(rep: _Report, budget: Budget) -> None:
    for inst in instances.SIX:
        out = n6_strategy(inst.ts)
        ok = out.tree is not None and verify_strategy(inst.ts, out.tree).success
        rep.claim(ok, f"{inst.name} {inst.text}: scripted tree verified over 720 hypotheses")


def _verify_seven(rep: _Report, budget: Budget) -> None:
    ts = instances.SEVEN.ts
    report = n7_attempt(ts, budget=None)
    for b in report.branches:
        ok = b.dead_end is not None and dead_pair_exists(ts, b.dead_end)
        rep.claim(ok, f"untouched={b.untouched}: {b.obstruction}; dead pair reached")
    verdict = decide_markable(ts, budget)[0]
    if verdict.kind == "Markable":
        rep.note(f"beyond-paper finding: solver marks {ts} (depth {depth(verdict.witness)})")
    else:
        rep.note(f"solver verdict for {ts}: {verdict.kind}")


def cmd_verify_catalog(args, out: TextIO) -> int:
    rep = _Report(out)
    {4: _verify_four, 5: _verify_five, 6: _verify_six, 7: _verify_seven}[args.n](rep, _budget(args))
    out.write(f"{'all claims hold' if not rep.failed else f'{rep.failed} claim(s) failed'}\n")
    return EXIT_MISMATCH if rep.failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qqmark", description="Local marking of 4x4 Bell-product states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_budget(p):
        p.add_argument("--max-nodes", type=int, default=10**7)
        p.add_argument("--max-seconds", type=float, default=60.0)
        return p

    p = with_budget(sub.add_parser("classify", help="classify all target sets of one size"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--signature", help='e.g. "4,2" or "4_1+1+1+1,2_1+4"')
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--raw", action="store_true", help="every set, not one per symmetry orbit")
    p.set_defaults(func=cmd_classify)

    p = with_budget(sub.add_parser("solve", help="decide markability of one set"))
    p.add_argument("--set", required=True)
    p.add_argument("--assert-markable", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="play a strategy against a hidden assignment")
    p.add_argument("--set", required=True)
    p.add_argument("--hidden", required=True, help="system -> target indices, e.g. 2,0,1,3")
    p.add_argument("--strategy", default="paper", help='"paper" or a strategy JSON file')
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = with_budget(sub.add_parser("verify-paper", help="check the catalogued claims for one size"))
    p.add_argument("--n", type=int, required=True, choices=(4, 5, 6, 7))
    p.set_defaults(func=cmd_verify_catalog)

    p = sub.add_parser("orbit", help="symmetry orbit and canonical form of a set")
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_orbit)
    return parser


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"qqmark: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        err.write(f"qqmark: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
