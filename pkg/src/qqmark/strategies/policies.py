"""Scripted strategies as policies over knowledge states.

A policy looks at what is currently known and names the next operation (or
``None`` once it is done).  :func:`build_tree` expands a policy into the full
adaptive tree by following every possible observation, so a strategy written
once covers every order in which the systems turn out to be arranged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ..bell import Basis, BellLabel, pick_basis
from ..ensemble import TargetSet
from ..errors import InapplicableStrategyError
from ..protocol import (
    HalfId,
    KnowledgeState,
    Operation,
    half_label,
    initial_knowledge,
    is_marked,
    lpm,
    observation_partition,
    swap,
)
from ..tree import Act, Mark, StrategyTree

Policy = Callable[[TargetSet, KnowledgeState], "Operation | None"]


def build_tree(ts: TargetSet, policy: Policy, k: KnowledgeState | None = None) -> StrategyTree:
    if k is None:
        k = initial_knowledge(ts.n)
    op = policy(ts, k)
    if op is None:
        if is_marked(k):
            return Mark(next(iter(k.hypotheses)))
        raise InapplicableStrategyError(
            f"strategy stopped with {len(k.hypotheses)} hypotheses left", state=k
        )
    cells = observation_partition(ts, k, op)
    return Act(op, {obs: build_tree(ts, policy, cell) for obs, cell in cells.items()})


def stalled_states(ts: TargetSet, policy: Policy, k: KnowledgeState | None = None):
    """Run ``policy`` like :func:`build_tree` and yield the states it gives up on."""
    if k is None:
        k = initial_knowledge(ts.n)
    op = policy(ts, k)
    if op is None:
        if not is_marked(k):
            yield k
        return
    for cell in observation_partition(ts, k, op).values():
        yield from stalled_states(ts, policy, cell)


# ---------------------------------------------------------------------------
# knowledge helpers


def other(slot: int) -> int:
    return 3 - slot


def labels_of(ts: TargetSet, k: KnowledgeState, half: HalfId) -> set[BellLabel]:
    return {half_label(ts, h, half) for h in k.hypotheses}


def bit_known(ts: TargetSet, k: KnowledgeState, half: HalfId, basis: Basis) -> bool:
    return len({lab.bit(basis) for lab in labels_of(ts, k, half)}) == 1


def system_of(k: KnowledgeState, target: int) -> int | None:
    """The system known to hold ``target``, if any."""
    systems = {h.index(target) for h in k.hypotheses}
    return systems.pop() if len(systems) == 1 else None


def systems_in(k: KnowledgeState, targets: Iterable[int]) -> list[int]:
    """Systems known to hold one of ``targets``."""
    wanted = set(targets)
    return [i for i in range(k.n) if all(h[i] in wanted for h in k.hypotheses)]


def separating_basis(
    group_a: Iterable[BellLabel], group_b: Iterable[BellLabel]
) -> Basis | None:
    """A basis giving every label of ``group_a`` one bit and ``group_b`` the other.

    X is preferred when both work.
    """
    group_a, group_b = list(group_a), list(group_b)
    for basis in (Basis.X, Basis.Z):
        bits_a = {lab.bit(basis) for lab in group_a}
        bits_b = {lab.bit(basis) for lab in group_b}
        if len(bits_a) <= 1 and len(bits_b) <= 1 and not bits_a & bits_b:
            return basis
    return None


def distinguish(
    ts: TargetSet, k: KnowledgeState, system: int, slot: int
) -> Operation | None:
    """The LPM on ``(system, slot)`` that separates its two possible labels."""
    half = HalfId(system, slot)
    if half not in k.intact:
        return None
    labels = sorted(labels_of(ts, k, half))
    if len(labels) != 2:
        return None
    return lpm(half, pick_basis(*labels))


def finish_pair(
    ts: TargetSet, k: KnowledgeState, slot: int, highest: bool = False
) -> Operation | None:
    """Final LPM when two systems remain unidentified."""
    unid = k.unidentified()
    if len(unid) != 2:
        return None
    order = sorted(unid, reverse=highest)
    for s in (slot, other(slot)):
        for i in order:
            op = distinguish(ts, k, i, s)
            if op is not None:
                return op
    return None


# ---------------------------------------------------------------------------
# generic four-state building blocks


def non_adaptive_lpm(bases: dict[int, Basis]) -> Policy:
    """LPM on both halves of every system in order, regardless of outcomes."""

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        for i in range(ts.n):
            for slot in (1, 2):
                half = HalfId(i, slot)
                if half in k.intact:
                    return lpm(half, bases[slot])
        return None

    return policy


def self_swap_all(ts: TargetSet, k: KnowledgeState) -> Operation | None:
    """Entanglement swapping of the two halves of each system in turn."""
    for i in range(ts.n):
        a, b = HalfId(i, 1), HalfId(i, 2)
        if a in k.intact and b in k.intact:
            return swap(a, b)
    return None


def two_lpm(slot: int, basis: Basis) -> Policy:
    """Coarse LPM on ``slot``, then one fine LPM on the other half, system by system."""
    o = other(slot)

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        if is_marked(k):
            return None
        for i in k.unidentified():
            coarse = HalfId(i, slot)
            if coarse in k.intact and not bit_known(ts, k, coarse, basis):
                return lpm(coarse, basis)
            fine = distinguish(ts, k, i, o)
            if fine is not None:
                return fine
            raise InapplicableStrategyError(f"system {i} not resolved by two LPMs", state=k)
        return None

    return policy


def two_lpm_split(ts: TargetSet) -> tuple[int, Basis] | None:
    """A (slot, basis) whose coarse groups each hold <= 2 targets with distinct other halves."""
    for slot in (1, 2):
        for basis in (Basis.X, Basis.Z):
            ok = True
            for bit in (0, 1):
                group = [q for q in ts if q.half(slot).bit(basis) == bit]
                others = [q.half(other(slot)) for q in group]
                if len(group) > 2 or len(set(others)) != len(others):
                    ok = False
            if ok:
                return slot, basis
    return None


def resource_policy(slot: int, basis: Basis, special: int) -> Policy:
    """Find the lone target by LPMs on ``slot``; its other half then resolves the rest.

    Before the lone target shows up, systems are measured one at a time.  If it
    shows up first, every other system's ``slot`` half is known and each is
    finished by swapping its own two halves.  Otherwise the lone target's other
    half is swapped into the previously measured system and one more LPM splits
    the last two.
    """
    o = other(slot)

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        found = system_of(k, special)
        if found is None:
            for i in range(ts.n):
                half = HalfId(i, slot)
                if half in k.intact and not bit_known(ts, k, half, basis):
                    return lpm(half, basis)
            raise InapplicableStrategyError("lone target not located", state=k)
        unid = k.unidentified()
        if not unid:
            return None
        measured = [i for i in unid if HalfId(i, slot) not in k.intact]
        if not measured:
            i = unid[0]
            return swap(HalfId(i, 1), HalfId(i, 2))
        resource = HalfId(found, o)
        if resource in k.intact:
            return swap(resource, HalfId(max(measured), o))
        return finish_pair(ts, k, o)

    return policy


def single_out_policy(slot: int, basis: Basis, special: int) -> Policy:
    """LPM on ``slot`` until the singled-out target appears, then swap its other half.

    Used when the special target's ``slot`` label is the only one on its side of
    ``basis`` and the remaining targets have pairwise different other halves.
    """
    o = other(slot)

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        found = system_of(k, special)
        if found is None:
            for i in range(ts.n):
                half = HalfId(i, slot)
                if half in k.intact and not bit_known(ts, k, half, basis):
                    return lpm(half, basis)
            raise InapplicableStrategyError("special target not located", state=k)
        unid = k.unidentified()
        if not unid:
            return None
        resource = HalfId(found, o)
        if len(unid) >= 3 and resource in k.intact:
            later = [i for i in unid if i > found]
            j = min(later) if later else max(unid)
            return swap(resource, HalfId(j, o))
        return finish_pair(ts, k, o)

    return policy


# ---------------------------------------------------------------------------
# the four-step coarse-graining strategy


@dataclass(frozen=True)
class CoarseClasses:
    """Outcome classes of a first LPM sweep, as target indices.

    ``c_big`` (three targets) and ``c_small`` (two) are the two sides of
    ``split_basis`` on ``split_slot``.
    """

    c_big: tuple[int, ...]
    c_small: tuple[int, ...]
    split_slot: int
    split_basis: Basis


def split_groups(ts: TargetSet, slot: int, basis: Basis) -> tuple[list[int], list[int]]:
    zero = [i for i, q in enumerate(ts) if q.half(slot).bit(basis) == 0]
    one = [i for i, q in enumerate(ts) if q.half(slot).bit(basis) == 1]
    return zero, one


def coarse_classes(ts: TargetSet, slot: int, basis: Basis) -> CoarseClasses:
    """Classes produced by LPM(``basis``) on every ``slot`` half; need sizes 3 and 2."""
    zero, one = split_groups(ts, slot, basis)
    big, small = (zero, one) if len(zero) >= len(one) else (one, zero)
    if (len(big), len(small)) != (3, 2):
        raise InapplicableStrategyError(
            f"LPM {basis} on slot {slot} splits the targets {len(big)}/{len(small)}, not 3/2"
        )
    return CoarseClasses(tuple(big), tuple(small), slot, basis)


def class_duplicates(ts: TargetSet, classes: CoarseClasses) -> str | None:
    """Name the class whose untouched halves are not pairwise different."""
    o = other(classes.split_slot)
    for name, members in (("c2", classes.c_small), ("c3", classes.c_big)):
        labels = [ts[t].half(o) for t in members]
        if len(set(labels)) != len(labels):
            return f"duplicate intact halves in {name}"
    return None


def _sweep(slot: int, basis: Basis, systems: Iterable[int]):
    systems = list(systems)

    def step(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        for i in systems:
            half = HalfId(i, slot)
            if half in k.intact:
                return lpm(half, basis)
        return None

    return step


def _finish_classes(
    ts: TargetSet, k: KnowledgeState, o: int, c_big: Iterable[int], c_small: Iterable[int]
) -> Operation | None:
    """Steps two to four: resolve the pair, swap its leftover half into the triple, split the rest."""
    small = systems_in(k, c_small)
    big = systems_in(k, c_big)
    unid_small = [i for i in small if k.system_target(i) is None]
    if unid_small:
        op = distinguish(ts, k, min(unid_small), o)
        if op is None:
            raise InapplicableStrategyError("class c2 cannot be split by one LPM", state=k)
        return op
    unid_big = [i for i in big if k.system_target(i) is None]
    if len(unid_big) == 3:
        resource = [HalfId(i, o) for i in small if HalfId(i, o) in k.intact]
        if not resource:
            raise InapplicableStrategyError("no spare half left in c2", state=k)
        return swap(resource[0], HalfId(max(unid_big), o))
    if len(unid_big) == 2:
        op = distinguish(ts, k, max(unid_big), o)
        if op is None:
            raise InapplicableStrategyError("class c3 cannot be split by one LPM", state=k)
        return op
    return None


def s_policy(classes: CoarseClasses) -> Policy:
    slot, o = classes.split_slot, other(classes.split_slot)

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        op = _sweep(slot, classes.split_basis, range(ts.n))(ts, k)
        if op is not None:
            return op
        return _finish_classes(ts, k, o, classes.c_big, classes.c_small)

    return policy


def strategy_S(ts: TargetSet, classes: CoarseClasses) -> StrategyTree:
    """The four-step coarse-graining strategy on five targets.

    1. LPM ``split_basis`` on the ``split_slot`` half of all five systems.
    2. One LPM on the other half of a ``c_small`` system splits that pair; the
       partner's untouched half is now known.
    3. Swap that known half with the untouched half of one ``c_big`` system.
    4. One LPM separates the last two ``c_big`` systems.
    """
    if ts.n != 5:
        raise InapplicableStrategyError(f"the strategy needs five targets, got {ts.n}")
    expected = coarse_classes(ts, classes.split_slot, classes.split_basis)
    if (set(expected.c_big), set(expected.c_small)) != (set(classes.c_big), set(classes.c_small)):
        raise InapplicableStrategyError(
            f"classes {classes.c_big}/{classes.c_small} are not the outcome of the first sweep"
        )
    problem = class_duplicates(ts, classes)
    if problem is not None:
        raise InapplicableStrategyError(problem)
    return build_tree(ts, s_policy(classes))


def sweep_then_finish(slot: int, basis: Basis, measured: int, lone: int) -> Policy:
    """Six-target variant: LPM on ``measured`` systems, swap the halves of ``lone``.

    The last system's ``slot`` half is deduced from the sweep, so swapping its
    own halves identifies it.  The five left form a 3/2 split by ``slot`` label
    and are finished by steps two to four.
    """
    o = other(slot)

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        op = _sweep(slot, basis, range(measured))(ts, k)
        if op is not None:
            return op
        if k.system_target(lone) is None:
            a, b = HalfId(lone, 1), HalfId(lone, 2)
            if a in k.intact and b in k.intact:
                return swap(a, b)
            raise InapplicableStrategyError("unmeasured system already consumed", state=k)
        t = k.system_target(lone)
        rest = [i for i in range(ts.n) if i != t]
        zero = [i for i in rest if ts[i].half(slot).bit(basis) == 0]
        one = [i for i in rest if ts[i].half(slot).bit(basis) == 1]
        big, small = (zero, one) if len(zero) >= len(one) else (one, zero)
        if (len(big), len(small)) != (3, 2):
            return None
        return _finish_classes(ts, k, o, big, small)

    return policy
