"""The marking game: knowledge states, operations and their observations.

A knowledge state is the set of system -> target bijections still consistent
with everything observed, plus the set of Bell-pair halves not yet consumed.
Each operation partitions the hypotheses by the classical datum it reveals.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

from .bell import (
    Basis,
    BellLabel,
    lpm_bit,
    sample_lpm,
    sample_swap,
    swap_observation,
)
from .ensemble import TargetSet
from .errors import IllegalOperationError, MalformedStrategyError


class HalfId(NamedTuple):
    system: int
    slot: int

    def __str__(self) -> str:
        return f"{self.system}.{self.slot}"


class Operation(NamedTuple):
    """``LPX``/``LPZ`` on one half, or ``SWAP`` on two distinct halves."""

    kind: str
    halves: tuple[HalfId, ...]

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(h) for h in self.halves)})"

    @property
    def basis(self) -> Basis | None:
        return {"LPX": Basis.X, "LPZ": Basis.Z}.get(self.kind)


def lpx(half: HalfId) -> Operation:
    return Operation("LPX", (HalfId(*half),))


def lpz(half: HalfId) -> Operation:
    return Operation("LPZ", (HalfId(*half),))


def lpm(half: HalfId, basis: Basis) -> Operation:
    return lpx(half) if basis is Basis.X else lpz(half)


def swap(a: HalfId, b: HalfId) -> Operation:
    a, b = HalfId(*a), HalfId(*b)
    if a == b:
        raise IllegalOperationError(f"SWAP needs two distinct halves, got {a} twice")
    return Operation("SWAP", tuple(sorted((a, b))))


class OneBit(NamedTuple):
    b: int

    def __str__(self) -> str:
        return str(self.b)


class TwoBit(NamedTuple):
    sx: int
    sz: int

    def __str__(self) -> str:
        return f"{self.sx}{self.sz}"


Observation = OneBit | TwoBit
Hypothesis = tuple[int, ...]


@dataclass(frozen=True)
class KnowledgeState:
    n: int
    intact: frozenset[HalfId]
    hypotheses: frozenset[Hypothesis]

    def __post_init__(self):
        if not self.hypotheses:
            raise ValueError("a knowledge state needs at least one hypothesis")

    def sorted_hypotheses(self) -> list[Hypothesis]:
        return sorted(self.hypotheses)

    def system_target(self, system: int) -> int | None:
        """The target index of ``system`` if every hypothesis agrees on it."""
        values = {h[system] for h in self.hypotheses}
        return values.pop() if len(values) == 1 else None

    def unidentified(self) -> list[int]:
        return [i for i in range(self.n) if self.system_target(i) is None]

    def candidates(self, system: int) -> list[int]:
        return sorted({h[system] for h in self.hypotheses})


def all_halves(n: int) -> list[HalfId]:
    return [HalfId(i, s) for i in range(n) for s in (1, 2)]


def initial_knowledge(n: int) -> KnowledgeState:
    if n < 1:
        raise ValueError(f"need at least one system, got {n}")
    return KnowledgeState(
        n, frozenset(all_halves(n)), frozenset(itertools.permutations(range(n)))
    )


def legal_operations(k: KnowledgeState) -> list[Operation]:
    halves = sorted(k.intact)
    ops = [lpx(h) for h in halves]
    ops += [lpz(h) for h in halves]
    ops += [Operation("SWAP", pair) for pair in itertools.combinations(halves, 2)]
    return ops


def half_label(ts: TargetSet, h: Hypothesis, half: HalfId) -> BellLabel:
    return ts[h[half.system]].half(half.slot)


def observe(ts: TargetSet, h: Hypothesis, op: Operation) -> Observation:
    if op.kind == "SWAP":
        a, b = op.halves
        return TwoBit(*swap_observation(half_label(ts, h, a), half_label(ts, h, b)))
    return OneBit(lpm_bit(half_label(ts, h, op.halves[0]), op.basis))


def _check_op(k: KnowledgeState, op: Operation) -> None:
    if op.kind not in ("LPX", "LPZ", "SWAP"):
        raise IllegalOperationError(f"unknown operation kind {op.kind!r}")
    expected = 2 if op.kind == "SWAP" else 1
    if len(op.halves) != expected or len(set(op.halves)) != expected:
        raise IllegalOperationError(f"{op} needs {expected} distinct halves")
    for half in op.halves:
        if half not in k.intact:
            raise IllegalOperationError(f"{op} touches half {half}, which is not intact")


def observation_partition(
    ts: TargetSet, k: KnowledgeState, op: Operation
) -> dict[Observation, KnowledgeState]:
    """Split ``k`` by the outcome of ``op``; cells come out in observation order."""
    _check_op(k, op)
    cells: dict[Observation, list[Hypothesis]] = defaultdict(list)
    for h in k.hypotheses:
        cells[observe(ts, h, op)].append(h)
    intact = k.intact.difference(op.halves)
    return {obs: KnowledgeState(k.n, intact, frozenset(cells[obs])) for obs in sorted(cells)}


def apply(ts: TargetSet, k: KnowledgeState, op: Operation, obs: Observation) -> KnowledgeState:
    """The cell of ``observation_partition`` for a realized observation."""
    cells = observation_partition(ts, k, op)
    if obs not in cells:
        raise IllegalOperationError(f"observation {obs} of {op} is impossible here")
    return cells[obs]


def known_label(ts: TargetSet, k: KnowledgeState, half: HalfId) -> BellLabel | None:
    if half not in k.intact:
        raise IllegalOperationError(f"half {half} is not intact")
    labels = {half_label(ts, h, half) for h in k.hypotheses}
    return labels.pop() if len(labels) == 1 else None


def possible_labels(ts: TargetSet, k: KnowledgeState, half: HalfId) -> set[BellLabel]:
    return {half_label(ts, h, half) for h in k.hypotheses}


def is_marked(k: KnowledgeState) -> bool:
    return len(k.hypotheses) == 1


def intact_signature(ts: TargetSet, k: KnowledgeState, h: Hypothesis) -> tuple[BellLabel, ...]:
    return tuple(half_label(ts, h, half) for half in sorted(k.intact))


def dead_pair(ts: TargetSet, k: KnowledgeState) -> tuple[Hypothesis, Hypothesis] | None:
    """Two hypotheses that agree on every intact half, if any exist."""
    seen: dict[tuple, Hypothesis] = {}
    for h in k.sorted_hypotheses():
        sig = intact_signature(ts, k, h)
        if sig in seen:
            return seen[sig], h
        seen[sig] = h
    return None


def dead_pair_exists(ts: TargetSet, k: KnowledgeState) -> bool:
    return dead_pair(ts, k) is not None


# ---------------------------------------------------------------------------
# sampled runs


@dataclass(frozen=True)
class TraceEvent:
    op: Operation
    raw: tuple
    observation: Observation
    hypotheses_remaining: int

    def render(self, step: int) -> str:
        if self.op.kind == "SWAP":
            raw = f"alice={self.raw[0]},bob={self.raw[1]}"
        else:
            raw = f"oA={self.raw[0]:+d},oB={self.raw[1]:+d}"
        return f"step {step}: {self.op} raw=<{raw}> obs=<{self.observation}> |H|=<{self.hypotheses_remaining}>"

    def to_dict(self) -> dict:
        out: dict = {"op": self.op.kind}
        if self.op.kind == "SWAP":
            out["halves"] = [[h.system, h.slot] for h in self.op.halves]
            out["raw"] = {"alice": str(self.raw[0]), "bob": str(self.raw[1])}
        else:
            h = self.op.halves[0]
            out["half"] = [h.system, h.slot]
            out["raw"] = {"oA": self.raw[0], "oB": self.raw[1]}
        out["observation"] = str(self.observation)
        out["hypotheses_remaining"] = self.hypotheses_remaining
        return out


@dataclass(frozen=True)
class Trace:
    hidden: Hypothesis
    events: tuple[TraceEvent, ...]
    marked: Hypothesis

    @property
    def success(self) -> bool:
        return self.marked == self.hidden

    def observations(self) -> tuple[Observation, ...]:
        return tuple(e.observation for e in self.events)

    def render(self) -> str:
        lines = [e.render(i + 1) for i, e in enumerate(self.events)]
        verdict = "correct" if self.success else "WRONG"
        lines.append(f"mark {','.join(map(str, self.marked))} ({verdict})")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "hidden": list(self.hidden),
                "events": [e.to_dict() for e in self.events],
                "marked": list(self.marked),
                "success": self.success,
            }
        )


def simulate(ts: TargetSet, hidden: Hypothesis, tree, seed: int) -> Trace:
    """Play ``tree`` against the hidden assignment with sampled local outcomes.

    Only the informative datum derived from the raw outcomes (the sign
    product, or the XOR of the two swap labels) steers the walk.
    """
    from .tree import Act, Mark

    hidden = tuple(hidden)
    if sorted(hidden) != list(range(ts.n)):
        raise ValueError(f"hidden assignment {hidden} is not a permutation of 0..{ts.n - 1}")
    rng = random.Random(seed)
    remaining = list(itertools.permutations(range(ts.n)))
    used: set[HalfId] = set()
    events = []
    node = tree
    path: tuple = ()
    while isinstance(node, Act):
        op = node.op
        for half in op.halves:
            if half in used or not 0 <= half.system < ts.n or half.slot not in (1, 2):
                raise MalformedStrategyError(f"{op} uses unavailable half {half}", path)
        used.update(op.halves)
        if op.kind == "SWAP":
            a, b = (half_label(ts, hidden, h) for h in op.halves)
            alice, bob = sample_swap(a, b, rng)
            raw: tuple = (alice, bob)
            obs: Observation = TwoBit(alice.x ^ bob.x, alice.z ^ bob.z)
        else:
            o_a, o_b = sample_lpm(half_label(ts, hidden, op.halves[0]), op.basis, rng)
            raw = (o_a, o_b)
            obs = OneBit((1 - o_a * o_b) // 2)
        remaining = [h for h in remaining if observe(ts, h, op) == obs]
        events.append(TraceEvent(op, raw, obs, len(remaining)))
        path += (f"{op}={obs}",)
        if obs not in node.children:
            raise MalformedStrategyError(f"no child for observation {obs} of {op}", path)
        node = node.children[obs]
    if not isinstance(node, Mark):
        raise MalformedStrategyError(f"unexpected node {type(node).__name__}", path)
    return Trace(hidden, tuple(events), tuple(node.hypothesis))
