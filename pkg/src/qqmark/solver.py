"""Exhaustive AND-OR search for perfect marking strategies.

Hypothesis sets are bitmasks over the n! permutations (lexicographic order)
and intact sets are bitmasks over the 2n halves, so a knowledge state is a
pair of ints.  An operation's partition is a handful of ANDs against
precomputed masks.

Pruning, all verdict-preserving:

* a state with two hypotheses that agree on every intact half is dead;
* a state with more hypotheses than ``2 ** intact`` is dead, since every
  half contributes at most one bit along any path;
* operations whose outcome is already determined are skipped;
* operations that a system relabeling fixing the state maps to a smaller
  operation are skipped (they succeed or fail together with that one).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .ensemble import GROUP, TargetSet, apply_symmetry, case_signature, enumerate_sets, orbit, parse_signature, signature_matches
from .protocol import (
    HalfId,
    KnowledgeState,
    OneBit,
    Operation,
    TwoBit,
)
from .tree import Act, Mark, StrategyTree


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    memo_hits: int = 0
    max_depth: int = 0
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        # wall time stays out so that repeated runs print identical bytes
        return {
            "nodes_expanded": self.nodes_expanded,
            "memo_hits": self.memo_hits,
            "max_depth": self.max_depth,
        }


@dataclass(frozen=True)
class Budget:
    max_nodes: int | None = 10**7
    max_seconds: float | None = 60.0


UNLIMITED = Budget(None, None)


@dataclass(frozen=True)
class Markable:
    witness: StrategyTree
    kind: str = field(default="Markable", init=False)


@dataclass(frozen=True)
class Unmarkable:
    kind: str = field(default="Unmarkable", init=False)


@dataclass(frozen=True)
class Undecided:
    budget: SearchStats
    kind: str = field(default="Undecided", init=False)


Verdict = Markable | Unmarkable | Undecided


class _OutOfBudget(Exception):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Engine:
    """Bitmask model of the game for one target set."""

    def __init__(self, ts: TargetSet):
        self.ts = ts
        n = self.n = ts.n
        self.perms: list[tuple[int, ...]] = list(itertools.permutations(range(n)))
        self.perm_index = {p: i for i, p in enumerate(self.perms)}
        self.nh = 2 * n
        self.full_intact = (1 << self.nh) - 1
        self.full_hyps = (1 << len(self.perms)) - 1
        codes = [[t.first.code, t.second.code] for t in ts]
        # label_mask[half][code]: hypotheses under which ``half`` carries ``code``
        self.label_mask = [[0] * 4 for _ in range(self.nh)]
        for pi, p in enumerate(self.perms):
            bit = 1 << pi
            for i in range(n):
                for s in (0, 1):
                    self.label_mask[2 * i + s][codes[p[i]][s]] |= bit
        # x bit is the high bit of the code, z the low bit
        self.lpm_mask = []
        for hm in self.label_mask:
            self.lpm_mask.append(
                (
                    (hm[0] | hm[1], hm[2] | hm[3]),  # X: x = 0, x = 1
                    (hm[0] | hm[2], hm[1] | hm[3]),  # Z: z = 0, z = 1
                )
            )
        self.swap_mask = {}
        for a, b in itertools.combinations(range(self.nh), 2):
            ma, mb = self.label_mask[a], self.label_mask[b]
            self.swap_mask[a, b] = tuple(
                ma[0] & mb[v] | ma[1] & mb[1 ^ v] | ma[2] & mb[2 ^ v] | ma[3] & mb[3 ^ v]
                for v in range(4)
            )
        # system transpositions as permutations of hypothesis indices
        self._transpositions = {}
        for i, j in itertools.combinations(range(n), 2):
            table = []
            for p in self.perms:
                q = list(p)
                q[i], q[j] = q[j], q[i]
                table.append(self.perm_index[tuple(q)])
            self._transpositions[i, j] = table

    # -- conversions -------------------------------------------------------

    @staticmethod
    def half_index(h: HalfId) -> int:
        return 2 * h.system + h.slot - 1

    @staticmethod
    def half_id(idx: int) -> HalfId:
        return HalfId(idx // 2, idx % 2 + 1)

    def encode(self, k: KnowledgeState) -> tuple[int, int]:
        intact = 0
        for h in k.intact:
            intact |= 1 << self.half_index(h)
        hyps = 0
        for h in k.hypotheses:
            hyps |= 1 << self.perm_index[tuple(h)]
        return intact, hyps

    def decode(self, intact: int, hyps: int) -> KnowledgeState:
        return KnowledgeState(
            self.n,
            frozenset(self.half_id(i) for i in _bits(intact)),
            frozenset(self.perms[i] for i in _bits(hyps)),
        )

    def operation(self, op: tuple) -> Operation:
        kind = op[0]
        if kind == "SWAP":
            return Operation("SWAP", (self.half_id(op[1]), self.half_id(op[2])))
        return Operation(kind, (self.half_id(op[1]),))

    # -- game --------------------------------------------------------------

    def ops(self, intact: int) -> list[tuple]:
        halves = list(_bits(intact))
        out: list[tuple] = [("LPX", h) for h in halves]
        out += [("LPZ", h) for h in halves]
        out += [("SWAP", a, b) for a, b in itertools.combinations(halves, 2)]
        return out

    def partition(self, intact: int, hyps: int, op: tuple) -> tuple[int, list[tuple]]:
        """Consumed-intact mask and the nonempty cells ``(observation, hyps)``."""
        kind = op[0]
        if kind == "SWAP":
            a, b = op[1], op[2]
            rest = intact & ~(1 << a) & ~(1 << b)
            cells = []
            for v, m in enumerate(self.swap_mask[a, b]):
                c = hyps & m
                if c:
                    cells.append((TwoBit(v >> 1, v & 1), c))
            return rest, cells
        h = op[1]
        rest = intact & ~(1 << h)
        masks = self.lpm_mask[h][0 if kind == "LPX" else 1]
        cells = []
        for bit, m in enumerate(masks):
            c = hyps & m
            if c:
                cells.append((OneBit(bit), c))
        return rest, cells

    def dead(self, intact: int, hyps: int) -> bool:
        """Two hypotheses indistinguishable on every intact half."""
        if hyps & (hyps - 1) == 0:
            return False
        groups = [hyps]
        for h in _bits(intact):
            lm = self.label_mask[h]
            nxt = []
            for g in groups:
                if g & (g - 1) == 0:
                    continue
                for m in lm:
                    c = g & m
                    if c & (c - 1):
                        nxt.append(c)
            if not nxt:
                return False
            groups = nxt
        return bool(groups)

    def _fixing_transpositions(self, intact: int, hyps: int) -> list[tuple[int, int]]:
        """System swaps (i j) that map the state onto itself."""
        out = []
        for (i, j), table in self._transpositions.items():
            if (intact >> 2 * i) & 3 != (intact >> 2 * j) & 3:
                continue
            image = 0
            for pi in _bits(hyps):
                image |= 1 << table[pi]
            if image == hyps:
                out.append((i, j))
        return out

    @staticmethod
    def _map_op(op: tuple, i: int, j: int) -> tuple:
        def m(h: int) -> int:
            s, slot = divmod(h, 2)
            if s == i:
                return 2 * j + slot
            if s == j:
                return 2 * i + slot
            return h

        if op[0] == "SWAP":
            a, b = sorted((m(op[1]), m(op[2])))
            return ("SWAP", a, b)
        return (op[0], m(op[1]))


_KIND_RANK = {"LPX": 0, "LPZ": 1, "SWAP": 2}


def _op_key(op: tuple) -> tuple:
    return (_KIND_RANK[op[0]],) + op[1:]


class Solver:
    """Memoized search over one target set.

    ``prune_uninformative`` and ``use_system_symmetry`` exist so tests can
    check that switching them off never changes a verdict.
    """

    def __init__(
        self,
        ts: TargetSet,
        budget: Budget = Budget(),
        prune_uninformative: bool = True,
        use_system_symmetry: bool = True,
        use_counting_bound: bool = True,
    ):
        self.engine = Engine(ts)
        self.budget = budget
        self.prune_uninformative = prune_uninformative
        self.use_system_symmetry = use_system_symmetry
        self.use_counting_bound = use_counting_bound
        # (intact, hyps) -> winning op, or None when no strategy exists
        self.memo: dict[tuple[int, int], tuple | None] = {}
        self.stats = SearchStats()
        self._deadline: float | None = None

    def _candidate_ops(self, intact: int, hyps: int) -> list[tuple]:
        eng = self.engine
        ops = eng.ops(intact)
        if not self.use_system_symmetry:
            return ops
        fixing = eng._fixing_transpositions(intact, hyps)
        if not fixing:
            return ops
        keep = []
        for op in ops:
            key = _op_key(op)
            if any(_op_key(eng._map_op(op, i, j)) < key for i, j in fixing):
                continue
            keep.append(op)
        return keep

    def _win(self, intact: int, hyps: int, depth: int) -> bool:
        if hyps & (hyps - 1) == 0:
            return True
        key = (intact, hyps)
        if key in self.memo:
            self.stats.memo_hits += 1
            return self.memo[key] is not None
        st = self.stats
        st.nodes_expanded += 1
        if depth > st.max_depth:
            st.max_depth = depth
        b = self.budget
        if b.max_nodes is not None and st.nodes_expanded > b.max_nodes:
            raise _OutOfBudget
        if self._deadline is not None and st.nodes_expanded & 255 == 0:
            if time.monotonic() > self._deadline:
                raise _OutOfBudget
        eng = self.engine
        if self.use_counting_bound and hyps.bit_count() > 1 << intact.bit_count():
            self.memo[key] = None
            return False
        if eng.dead(intact, hyps):
            self.memo[key] = None
            return False
        for op in self._candidate_ops(intact, hyps):
            rest, cells = eng.partition(intact, hyps, op)
            if len(cells) == 1 and self.prune_uninformative:
                continue
            # biggest cell first: it is the likeliest to fail
            cells.sort(key=lambda c: -c[1].bit_count())
            if all(self._win(rest, c, depth + 1) for _, c in cells):
                self.memo[key] = op
                return True
        self.memo[key] = None
        return False

    def solve_state(self, intact: int, hyps: int) -> Verdict:
        start = time.monotonic()
        if self.budget.max_seconds is not None:
            self._deadline = start + self.budget.max_seconds
        try:
            won = self._win(intact, hyps, 0)
        except _OutOfBudget:
            self.stats.elapsed += time.monotonic() - start
            return Undecided(self.stats)
        self.stats.elapsed += time.monotonic() - start
        if won:
            return Markable(self.witness(intact, hyps))
        return Unmarkable()

    def solve(self, k: KnowledgeState | None = None) -> Verdict:
        eng = self.engine
        if k is None:
            return self.solve_state(eng.full_intact, eng.full_hyps)
        return self.solve_state(*eng.encode(k))

    def witness(self, intact: int, hyps: int) -> StrategyTree:
        eng = self.engine
        if hyps & (hyps - 1) == 0:
            return Mark(eng.perms[hyps.bit_length() - 1])
        op = self.memo[intact, hyps]
        assert op is not None
        rest, cells = eng.partition(intact, hyps, op)
        return Act(eng.operation(op), {obs: self.witness(rest, c) for obs, c in cells})


def decide_markable(
    ts: TargetSet,
    budget: Budget = Budget(),
    prune_uninformative: bool = True,
    use_system_symmetry: bool = True,
) -> tuple[Verdict, SearchStats]:
    if not 1 <= ts.n <= 7:
        raise ValueError(f"the solver handles 1..7 targets, got {ts.n}")
    solver = Solver(ts, budget, prune_uninformative, use_system_symmetry)
    verdict = solver.solve()
    return verdict, solver.stats


def decide_state(
    ts: TargetSet, k: KnowledgeState, budget: Budget = Budget()
) -> tuple[Verdict, SearchStats]:
    """Markability of an arbitrary knowledge state (e.g. a stalled strategy)."""
    solver = Solver(ts, budget)
    verdict = solver.solve(k)
    return verdict, solver.stats


def memo_key(ts: TargetSet, k: KnowledgeState, symmetry: bool = False) -> tuple:
    """Key identifying a knowledge state; with ``symmetry``, whole label-symmetry orbits share it."""
    if not symmetry:
        return (str(ts), tuple(sorted(k.intact)), tuple(sorted(k.hypotheses)))
    best = None
    intact = tuple(sorted(k.intact))
    for g in GROUP:
        image = apply_symmetry(g, ts)
        remap = [image.index(g(q)) for q in ts]
        hyps = tuple(sorted(tuple(remap[t] for t in h) for h in k.hypotheses))
        key = (str(image), intact, hyps)
        if best is None or key < best:
            best = key
    return best


def _classify_row(args: tuple) -> dict:
    from .strategies.scripted import scripted_outcome
    from .tree import depth

    ts, budget, raw = args
    verdict, stats = decide_markable(ts, budget)
    scripted, expectation = scripted_outcome(ts)
    if expectation is None or verdict.kind == "Undecided":
        agree = None
    else:
        agree = (verdict.kind == "Markable") == (expectation == "markable")
    row = {
        "set": str(ts),
        "signature": str(case_signature(ts)),
        "verdict": verdict.kind,
        "witness_depth": depth(verdict.witness) if isinstance(verdict, Markable) else None,
        "scripted": scripted,
        "paper_expectation": expectation,
        "agree": agree,
        "stats": stats.to_dict(),
    }
    if not raw:
        row["orbit_size"] = len(orbit(ts))
    return row


def classify(
    n: int,
    signature_filter=None,
    budget: Budget = Budget(),
    raw: bool = False,
    jobs: int = 1,
) -> list[dict]:
    """One row per target set of size ``n`` (canonical representatives unless ``raw``).

    ``signature_filter`` is a ``CaseSignature``, an ``(h1, h2)`` pair, or a
    string accepted by ``parse_signature``.
    """
    if not 1 <= n <= 7:
        raise ValueError(f"classification handles 1..7 targets, got {n}")
    if isinstance(signature_filter, str):
        signature_filter = parse_signature(signature_filter)
    sets = [
        ts
        for ts in enumerate_sets(n, canonical=not raw)
        if signature_matches(case_signature(ts), signature_filter)
    ]
    work = [(ts, budget, raw) for ts in sets]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_classify_row, work, chunksize=8))
    return [_classify_row(w) for w in work]
