"""Checking a strategy tree against every hypothesis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..ensemble import TargetSet
from ..errors import MalformedStrategyError
from ..protocol import HalfId, Hypothesis, observe
from ..tree import Act, Mark, StrategyTree


@dataclass(frozen=True)
class VerifyReport:
    success: bool
    failing_hypothesis: Hypothesis | None = None
    marked_as: Hypothesis | None = None
    hypotheses_checked: int = 0

    def __bool__(self) -> bool:
        return self.success


def _walk(ts: TargetSet, tree: StrategyTree, h: Hypothesis, visited: set[int]) -> Hypothesis:
    used: set[HalfId] = set()
    node = tree
    path: tuple = ()
    while isinstance(node, Act):
        visited.add(id(node))
        op = node.op
        if op.kind not in ("LPX", "LPZ", "SWAP"):
            raise MalformedStrategyError(f"unknown operation {op.kind!r}", path)
        if len(op.halves) != (2 if op.kind == "SWAP" else 1) or len(set(op.halves)) != len(op.halves):
            raise MalformedStrategyError(f"wrong half count for {op}", path)
        for half in op.halves:
            if not (0 <= half.system < ts.n and half.slot in (1, 2)):
                raise MalformedStrategyError(f"{op} names a nonexistent half {half}", path)
            if half in used:
                raise MalformedStrategyError(f"{op} reuses consumed half {half}", path)
        used.update(op.halves)
        obs = observe(ts, h, op)
        path += (f"{op}={obs}",)
        if obs not in node.children:
            raise MalformedStrategyError(f"no child for realizable observation {obs}", path)
        node = node.children[obs]
    if not isinstance(node, Mark):
        raise MalformedStrategyError(f"unexpected node {node!r}", path)
    visited.add(id(node))
    if sorted(node.hypothesis) != list(range(ts.n)):
        raise MalformedStrategyError(f"mark {node.hypothesis} is not a permutation", path)
    return tuple(node.hypothesis)


def _all_nodes(tree: StrategyTree, path: tuple = ()):
    yield tree, path
    if isinstance(tree, Act):
        for obs, child in tree.children.items():
            yield from _all_nodes(child, path + (f"{tree.op}={obs}",))


def verify_strategy(ts: TargetSet, tree: StrategyTree) -> VerifyReport:
    """Walk the tree once per hypothesis with the deterministic observations.

    Success means every hypothesis ends at the leaf that names it.  Reusing a
    consumed half, a missing child, or a child no hypothesis can reach raises
    :class:`MalformedStrategyError`.
    """
    visited: set[int] = set()
    failure = None
    count = 0
    for h in itertools.permutations(range(ts.n)):
        count += 1
        marked = _walk(ts, tree, h, visited)
        if marked != h and failure is None:
            failure = (h, marked)
    for node, path in _all_nodes(tree):
        if id(node) not in visited:
            raise MalformedStrategyError("unreachable child", path)
    if failure:
        return VerifyReport(False, failure[0], failure[1], count)
    return VerifyReport(True, hypotheses_checked=count)
