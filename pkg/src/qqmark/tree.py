"""Adaptive strategy trees and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from .errors import MalformedStrategyError
from .protocol import HalfId, Observation, Operation, OneBit, TwoBit


@dataclass(frozen=True)
class Mark:
    """Leaf: declare the full system -> target assignment."""

    hypothesis: tuple[int, ...]


@dataclass(frozen=True)
class Act:
    op: Operation
    children: dict[Observation, "StrategyTree"] = field(hash=False)


StrategyTree = Union[Mark, Act]


def depth(tree: StrategyTree) -> int:
    if isinstance(tree, Mark):
        return 0
    return 1 + max(depth(c) for c in tree.children.values())


def count_ops(tree: StrategyTree) -> dict[str, int]:
    """Operation kinds used anywhere in the tree (each node counted once)."""
    out: dict[str, int] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Act):
            out[node.op.kind] = out.get(node.op.kind, 0) + 1
            stack.extend(node.children.values())
    return out


def path_ops(tree: StrategyTree, observations: list[Observation]) -> list[Operation]:
    ops = []
    node = tree
    for obs in observations:
        assert isinstance(node, Act)
        ops.append(node.op)
        node = node.children[obs]
    return ops


def to_dict(tree: StrategyTree) -> dict:
    if isinstance(tree, Mark):
        return {"node": "mark", "hypothesis": list(tree.hypothesis)}
    return {
        "node": "act",
        "op": tree.op.kind,
        "halves": [[h.system, h.slot] for h in tree.op.halves],
        "children": {str(obs): to_dict(child) for obs, child in sorted(tree.children.items())},
    }


def _parse_obs(key: str, kind: str, path: tuple) -> Observation:
    if kind == "SWAP":
        if len(key) != 2 or any(c not in "01" for c in key):
            raise MalformedStrategyError(f"bad swap observation {key!r}", path)
        return TwoBit(int(key[0]), int(key[1]))
    if key not in ("0", "1"):
        raise MalformedStrategyError(f"bad LPM observation {key!r}", path)
    return OneBit(int(key))


def from_dict(data: dict, _path: tuple = ()) -> StrategyTree:
    node = data.get("node")
    if node == "mark":
        return Mark(tuple(int(i) for i in data["hypothesis"]))
    if node != "act":
        raise MalformedStrategyError(f"unknown node kind {node!r}", _path)
    kind = data.get("op")
    try:
        halves = tuple(HalfId(int(s), int(t)) for s, t in data["halves"])
        op = Operation(kind, halves)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedStrategyError(f"bad operation: {exc}", _path) from None
    children = {}
    for key, child in data.get("children", {}).items():
        obs = _parse_obs(key, kind, _path)
        children[obs] = from_dict(child, _path + (f"{op}={key}",))
    return Act(op, children)


def dumps(tree: StrategyTree, **kwargs) -> str:
    return json.dumps(to_dict(tree), **kwargs)


def loads(text: str) -> StrategyTree:
    return from_dict(json.loads(text))
