"""Case-by-case scripted strategies for four to seven targets."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..bell import Basis, BellLabel, in_D, pick_basis
from ..ensemble import TargetSet
from ..errors import InapplicableStrategyError
from ..protocol import (
    HalfId,
    KnowledgeState,
    dead_pair_exists,
    initial_knowledge,
    is_marked,
    legal_operations,
    observation_partition,
    swap,
)
from ..solver import Budget, Verdict, decide_state
from ..tree import StrategyTree
from . import catalog
from .catalog import Match
from .policies import (
    CoarseClasses,
    Policy,
    _finish_classes,
    _sweep,
    build_tree,
    class_duplicates,
    coarse_classes,
    non_adaptive_lpm,
    other,
    resource_policy,
    self_swap_all,
    single_out_policy,
    split_groups,
    stalled_states,
    strategy_S,
    sweep_then_finish,
    system_of,
    systems_in,
    two_lpm,
    two_lpm_split,
    distinguish,
    finish_pair,
    bit_known,
)
from ..protocol import Operation, lpm


def _basis_pairing(x: BellLabel, y: BellLabel) -> Basis | None:
    """Basis in which ``x`` and ``y`` share their bit (X preferred)."""
    for basis in (Basis.X, Basis.Z):
        if x.bit(basis) == y.bit(basis):
            return basis
    return None


def _basis_singling(lone: BellLabel, *rest: BellLabel) -> Basis | None:
    """Basis in which ``lone`` differs from every label in ``rest``, and those agree."""
    for basis in (Basis.X, Basis.Z):
        bits = {r.bit(basis) for r in rest}
        if len(bits) == 1 and lone.bit(basis) not in bits:
            return basis
    return None


# ---------------------------------------------------------------------------
# four targets


def _require(n: int, ts: TargetSet) -> None:
    if ts.n != n:
        raise ValueError(f"expected {n} targets, got {ts.n}")


def _n4_policy(ts: TargetSet, m: Match, swap_route: bool) -> Policy:
    s, o = m.slot, m.other
    name = m.pattern.name
    if name == "(2,2)":
        bases = {s: pick_basis(m["a"], m["b"]), o: pick_basis(m["A"], m["B"])}
        return non_adaptive_lpm(bases)
    if name == "(4,1)":
        return self_swap_all
    if name == "(4,4)":
        classes = {q.first ^ q.second for q in ts}
        if swap_route and len(classes) == 4:
            return self_swap_all
        return two_lpm(1, Basis.X)
    if name in ("(4,2_2+2)", "(3,2_2+2)"):
        return two_lpm(o, pick_basis(m["A"], m["B"]))
    if name == "(4,2_1+3)":
        return resource_policy(o, pick_basis(m["A"], m["B"]), m.target("dB"))
    if name == "(3,2_1+3)":
        return resource_policy(o, pick_basis(m["A"], m["B"]), m.target("aB"))
    if name == "(3,3) single-out":
        # the two targets sharing the uppercase A; whichever has a lone first label
        for lone, pair in (("c", "ab"), ("b", "ac")):
            basis = _basis_singling(m[lone], m[pair[0]], m[pair[1]])
            if basis is not None:
                return single_out_policy(s, basis, m.target(lone + "A"))
        raise InapplicableStrategyError("no basis singles out a first label")
    if name == "(3,3) conditional":
        if in_D(m["b"], m["c"]) and in_D(m["B"], m["C"]):
            basis = _basis_singling(m["b"], m["a"], m["c"])
            return single_out_policy(s, basis, m.target("bA"))
        if not in_D(m["b"], m["c"]):
            return two_lpm(s, _basis_singling(m["a"], m["b"], m["c"]))
        return two_lpm(o, _basis_singling(m["A"], m["B"], m["C"]))
    if name == "(4,3)":
        split = two_lpm_split(ts)
        assert split is not None
        return two_lpm(*split)
    raise InapplicableStrategyError(f"no four-target handler for {name}")


def n4_strategy(ts: TargetSet, swap_route: bool = False) -> StrategyTree:
    """A perfect marking strategy for any four targets.

    ``swap_route`` picks the all-SWAP alternative for four targets with four
    distinct first labels, four distinct second labels, and four distinct
    parity classes.
    """
    _require(4, ts)
    m = catalog.identify(ts, catalog.FOUR)
    if m is None:
        raise InapplicableStrategyError(f"{ts} matches no four-target pattern")
    return build_tree(ts, _n4_policy(ts, m, swap_route))


# ---------------------------------------------------------------------------
# five targets


@dataclass(frozen=True)
class Obstruction:
    """Why the coarse-graining strategy fails: a split and its dead post-sweep states."""

    reason: str
    split_slot: int
    split_basis: Basis
    states: tuple[KnowledgeState, ...] = field(repr=False)

    def verified(self, ts: TargetSet) -> bool:
        return bool(self.states) and all(dead_pair_exists(ts, k) for k in self.states)


@dataclass(frozen=True)
class Outcome:
    """Result of a scripted dispatch: a tree, or a reason (and maybe an obstruction)."""

    case: str
    tree: StrategyTree | None = None
    reason: str | None = None
    obstruction: Obstruction | None = None

    @property
    def success(self) -> bool:
        return self.tree is not None


def _sweep_states(ts: TargetSet, slot: int, basis: Basis) -> tuple[KnowledgeState, ...]:
    step = _sweep(slot, basis, range(ts.n))
    return tuple(stalled_states(ts, step))


def find_obstruction(ts: TargetSet, slots: tuple[int, ...]) -> Obstruction | None:
    """First split (3/2 preferred) leaving duplicate untouched halves in a class."""
    fallback = None
    for slot in slots:
        for basis in (Basis.X, Basis.Z):
            zero, one = split_groups(ts, slot, basis)
            if sorted((len(zero), len(one))) == [2, 3]:
                problem = class_duplicates(ts, coarse_classes(ts, slot, basis))
                if problem is not None:
                    return Obstruction(problem, slot, basis, _sweep_states(ts, slot, basis))
                continue
            if fallback is None:
                for group in (zero, one):
                    halves = [ts[t].half(other(slot)) for t in group]
                    if len(set(halves)) != len(halves):
                        reason = f"duplicate intact halves in c{len(group)}"
                        fallback = (reason, slot, basis)
                        break
    if fallback is not None:
        reason, slot, basis = fallback
        return Obstruction(reason, slot, basis, _sweep_states(ts, slot, basis))
    return None


def _s_tree(ts: TargetSet, slot: int, basis: Basis) -> StrategyTree:
    return strategy_S(ts, coarse_classes(ts, slot, basis))


def lone_target_policy(m: Match) -> Policy:
    """Lone-target strategy for the five-target (4, 2_1+4) shape.

    LPM on the shared-label slot until the lone target turns up.  Systems not
    yet measured then swap their own halves; the lone target's halves are
    swapped into the remaining measured systems, highest first; one LPM
    finishes.
    """
    s = m.other  # slot holding A/B
    o = m.slot
    basis = pick_basis(m["A"], m["B"])
    special = m.target("aA")

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        found = system_of(k, special)
        if found is None:
            for i in range(ts.n):
                half = HalfId(i, s)
                if half in k.intact and not bit_known(ts, k, half, basis):
                    return lpm(half, basis)
            raise InapplicableStrategyError("lone target not located", state=k)
        unid = k.unidentified()
        if not unid:
            return None
        for i in unid:
            a, b = HalfId(i, 1), HalfId(i, 2)
            if a in k.intact and b in k.intact:
                return swap(a, b)
        if len(unid) >= 3:
            targets = [i for i in unid if HalfId(i, o) in k.intact]
            for slot in (o, s):
                resource = HalfId(found, slot)
                if resource in k.intact and targets:
                    return swap(resource, HalfId(max(targets), o))
        return finish_pair(ts, k, o)

    return policy


def _n5_dispatch(ts: TargetSet, m: Match) -> Outcome:
    name = m.pattern.name
    s, o = m.slot, m.other
    a, b, c = m["a"], m["b"], m["c"]

    def s_outcome(slot: int, basis: Basis | None) -> Outcome:
        if basis is None:
            return none_outcome((s,))
        return Outcome(name, tree=_s_tree(ts, slot, basis))

    def none_outcome(slots: tuple[int, ...], reason: str | None = None) -> Outcome:
        ob = find_obstruction(ts, slots)
        return Outcome(name, reason=reason or (ob.reason if ob else "no coarse-graining"), obstruction=ob)

    if name == "(4,2_1+4)":
        return Outcome(name, tree=build_tree(ts, lone_target_policy(m)))
    if name == "(4,2_2+3)":
        return s_outcome(o, pick_basis(m["A"], m["B"]))
    if name == "(4,4)":
        # pair a with a first label other than b, its partner on B
        for basis in (Basis.X, Basis.Z):
            partner = [q for q in (m["c"], m["d"]) if q.bit(basis) == a.bit(basis)]
            if partner:
                return s_outcome(s, basis)
        return none_outcome((s,))
    if name.startswith("(4,3_1+1+3)"):
        return none_outcome((s, o))
    if name == "(4,3_1+2+2) i":
        for basis in (Basis.X, Basis.Z):
            if a.bit(basis) in (b.bit(basis), m["d"].bit(basis)):
                return s_outcome(s, basis)
        return none_outcome((s,))
    if name == "(4,3_1+2+2) ii":
        if in_D(a, b):
            return none_outcome((s,))
        return s_outcome(s, _basis_pairing(a, b))
    if name == "(3_1+1+3,3_1+1+3)":
        return none_outcome((s, o))
    if name == "(3_1+1+3,3_1+2+2)":
        if in_D(b, c):
            return none_outcome((s, o))
        return s_outcome(s, _basis_singling(a, b, c))
    if name == "(3_1+2+2,3_1+2+2) i":
        if not in_D(b, c):
            return s_outcome(s, _basis_singling(a, b, c))
        return s_outcome(s, _basis_singling(b, a, c))
    if name == "(3_1+2+2,3_1+2+2) ii":
        if in_D(b, c):
            return none_outcome((s,))
        return s_outcome(s, _basis_singling(a, b, c))
    raise AssertionError(name)


def n5_strategy(ts: TargetSet) -> Outcome:
    """Scripted five-target strategy, or the reason the shape defeats it."""
    _require(5, ts)
    m = catalog.identify(ts, catalog.FIVE)
    if m is None:
        return Outcome("uncatalogued", reason="outside paper catalog")
    first = _n5_dispatch(ts, m)
    if first.success:
        return first
    # self-dual shapes can match with letters for which the condition fails
    for alt in catalog.match_all(ts, m.pattern):
        out = _n5_dispatch(ts, alt)
        if out.success:
            return out
    return first


def n5_outcome_for(ts: TargetSet, m: Match) -> Outcome:
    """Dispatch with a given letter assignment (used to check assignment independence)."""
    return _n5_dispatch(ts, m)


# ---------------------------------------------------------------------------
# six and seven targets


def n6_strategy(ts: TargetSet) -> Outcome:
    _require(6, ts)
    m = catalog.identify(ts, catalog.SIX)
    if m is None:
        return Outcome("uncatalogued", reason="outside paper catalog")
    slot = m.other
    basis = pick_basis(m["A"], m["B"])
    tree = build_tree(ts, sweep_then_finish(slot, basis, measured=5, lone=5))
    return Outcome(m.pattern.name, tree=tree)


@dataclass(frozen=True)
class Branch:
    """One identity of the untouched seventh system and where the attempt ends."""

    untouched: str
    obstruction: str
    residual: KnowledgeState = field(repr=False)
    dead_end: KnowledgeState | None = field(repr=False)
    verdict: Verdict | None = None

    @property
    def dead(self) -> bool:
        return self.dead_end is not None


@dataclass(frozen=True)
class AttemptReport:
    ts: TargetSet
    branches: tuple[Branch, ...]

    @property
    def all_dead(self) -> bool:
        return all(b.dead for b in self.branches)


def _seven_policy(slot: int, basis: Basis) -> Policy:
    """Sweep six systems, swap the seventh's halves, then steps two and three."""
    o = other(slot)
    lone = 6

    def policy(ts: TargetSet, k: KnowledgeState) -> Operation | None:
        op = _sweep(slot, basis, range(6))(ts, k)
        if op is not None:
            return op
        t = k.system_target(lone)
        if t is None:
            return swap(HalfId(lone, 1), HalfId(lone, 2))
        zero, one = split_groups(ts, slot, basis)
        zero = [i for i in zero if i != t]
        one = [i for i in one if i != t]
        big, small = (zero, one) if len(zero) >= len(one) else (one, zero)
        if len(small) != 2:
            return None
        unid_small = [i for i in systems_in(k, small) if k.system_target(i) is None]
        if unid_small:
            return distinguish(ts, k, min(unid_small), o)
        unid_big = [i for i in systems_in(k, big) if k.system_target(i) is None]
        if len(unid_big) == len(big):
            spare = [HalfId(i, o) for i in systems_in(k, small) if HalfId(i, o) in k.intact]
            return swap(spare[0], HalfId(max(unid_big), o))
        return None

    return policy


def dead_end(ts: TargetSet, k: KnowledgeState) -> KnowledgeState | None:
    """Follow informative LPMs (first in operation order) to a state with a dead pair."""
    if dead_pair_exists(ts, k):
        return k
    if is_marked(k):
        return None
    for op in legal_operations(k):
        if op.kind == "SWAP":
            break
        cells = observation_partition(ts, k, op)
        if len(cells) > 1:
            for cell in cells.values():
                found = dead_end(ts, cell)
                if found is not None:
                    return found
            return None
    return None


def n7_attempt(
    ts: TargetSet, budget: Budget | None = Budget(max_nodes=10**6, max_seconds=30.0)
) -> AttemptReport:
    """Run the six-target strategy on seven targets and report where it breaks.

    For every identity of the system left out of the first sweep, the
    residual is the first state where the strategy cannot continue.  The
    report follows LPMs from there to a state with a dead pair and, when
    ``budget`` is given, asks the solver about the residual itself.
    """
    _require(7, ts)
    m = catalog.identify(ts, catalog.SEVEN)
    if m is None:
        raise ValueError(f"{ts} does not have the (4, 2_3+4) shape")
    slot = m.other
    basis = pick_basis(m["A"], m["B"])
    policy = _seven_policy(slot, basis)
    by_target: dict[int, KnowledgeState] = {}
    for k in stalled_states(ts, policy):
        t = k.system_target(6)
        by_target.setdefault(t, k)
    order = ("aA", "bA", "cA", "aB", "bB", "cB", "dB")
    names = {m.target(p): p[0] + "αβ"["AB".index(p[1])] for p in order}
    branches = []
    for t in sorted(by_target, key=lambda t: order.index(names[t][0] + "AB"["αβ".index(names[t][1])])):
        k = by_target[t]
        remaining = len([i for i in range(ts.n) if ts[i].half(slot).bit(basis) == ts[t].half(slot).bit(basis)]) - 1
        if remaining == 2:
            reason = "three unresolved halves remain in c4 after step 3"
        else:
            reason = "two three-member classes c3, c3'"
        verdict = decide_state(ts, k, budget)[0] if budget is not None else None
        branches.append(Branch(names[t], reason, k, dead_end(ts, k), verdict))
    return AttemptReport(ts, tuple(branches))


def scripted_outcome(ts: TargetSet) -> tuple[str, str | None]:
    """(scripted result, catalogued expectation) for one target set.

    The result is ``success``, ``none`` or ``n/a``; the expectation is
    ``markable``, ``unmarkable`` or ``None`` when the shape is not catalogued.
    """
    from .verify import verify_strategy

    if ts.n == 4:
        ok = verify_strategy(ts, n4_strategy(ts)).success
        return ("success" if ok else "failure"), "markable"
    if ts.n in (5, 6):
        out = n5_strategy(ts) if ts.n == 5 else n6_strategy(ts)
        if out.case == "uncatalogued":
            return "n/a", None
        if out.tree is None:
            return "none", "unmarkable"
        ok = verify_strategy(ts, out.tree).success
        return ("success" if ok else "failure"), "markable"
    if ts.n == 7 and catalog.identify(ts, catalog.SEVEN) is not None:
        return "none", "unmarkable"
    return "n/a", None
