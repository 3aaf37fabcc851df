import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from qqmark.bell import BELL_LABELS, QUQUAD_LABELS, parity_class, sample_swap, swap_observation
from qqmark.ensemble import GENERATORS, TargetSet, apply_symmetry, enumerate_sets
from qqmark.protocol import (
    HalfId,
    dead_pair,
    half_label,
    initial_knowledge,
    legal_operations,
    observation_partition,
    observe,
    swap,
)
from qqmark.solver import Solver, decide_markable

target_sets = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.sampled_from(QUQUAD_LABELS), min_size=n, max_size=n, unique=True)
).map(TargetSet)


def random_walk(ts, rng, k=None):
    """Yield (state, op, cells) along one random play until no halves remain."""
    k = k or initial_knowledge(ts.n)
    while True:
        ops = legal_operations(k)
        if not ops:
            return
        op = rng.choice(ops)
        cells = observation_partition(ts, k, op)
        yield k, op, cells
        k = rng.choice(sorted(cells.values(), key=lambda c: sorted(c.hypotheses)))


# ---------------------------------------------------------------------------
# counted checks, shared with the acceptance run


def partition_violations(walks=2_000, seed=3):
    rng = random.Random(seed)
    bad = 0
    for _ in range(walks):
        ts = TargetSet(rng.sample(QUQUAD_LABELS, rng.randint(1, 5)))
        for k, op, cells in random_walk(ts, rng):
            union, total = set(), 0
            for obs, cell in cells.items():
                union |= cell.hypotheses
                total += len(cell.hypotheses)
                bad += not cell.hypotheses or cell.intact != k.intact - set(op.halves)
                bad += any(observe(ts, h, op) != obs for h in cell.hypotheses)
            bad += union != k.hypotheses or total != len(k.hypotheses)
    return bad


def conservation_violations(samples=10_000, seed=4):
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        l1, l2 = rng.choice(BELL_LABELS), rng.choice(BELL_LABELS)
        alice, bob = sample_swap(l1, l2, rng)
        bad += (alice.x ^ bob.x, alice.z ^ bob.z) != (l1.x ^ l2.x, l1.z ^ l2.z)
    return bad


def dead_pair_violations(sequences=10_000, seed=0):
    """Play random operation sequences; once a dead pair appears it must never split.

    Returns (violations, sequences that reached a dead pair).
    """
    rng = random.Random(seed)
    violations = reached = 0
    for _ in range(sequences):
        n = rng.randint(2, 5)
        ts = TargetSet(rng.sample(QUQUAD_LABELS, n))
        pair = None
        for k, _op, cells in random_walk(ts, rng):
            if pair is None:
                pair = dead_pair(ts, k)
                reached += pair is not None
            if pair is not None and pair[0] in k.hypotheses:
                home = {obs for obs, c in cells.items() for h in pair if h in c.hypotheses}
                if len(home) != 1:
                    violations += 1
                    break
    return violations, reached


def symmetry_violations(count=200, seed=1):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        ts = TargetSet(rng.sample(QUQUAD_LABELS, rng.randint(3, 5)))
        base = decide_markable(ts)[0].kind
        for g in GENERATORS:
            bad += decide_markable(apply_symmetry(g, ts))[0].kind != base
    return bad


def pruning_violations(random_fours=50, seed=2):
    sets = [ts for n in (1, 2, 3) for ts in enumerate_sets(n)]
    sets += random.Random(seed).sample(list(enumerate_sets(4)), random_fours)
    bad = 0
    for ts in sets:
        pruned = decide_markable(ts)[0].kind
        plain = Solver(ts, prune_uninformative=False, use_system_symmetry=False, use_counting_bound=False).solve().kind
        bad += pruned != plain
    return bad, len(sets)


# ---------------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(target_sets, st.randoms(use_true_random=False))
def test_partition_is_well_formed(ts, rng):
    for k, op, cells in random_walk(ts, rng):
        union = set()
        for obs, cell in cells.items():
            assert cell.hypotheses and not (union & cell.hypotheses)
            union |= cell.hypotheses
            assert all(observe(ts, h, op) == obs for h in cell.hypotheses)
            assert cell.intact == k.intact - set(op.halves)
        assert union == k.hypotheses


@given(st.sampled_from(BELL_LABELS), st.sampled_from(BELL_LABELS), st.randoms(use_true_random=False))
def test_swap_conserves_parity(l1, l2, rng):
    alice, bob = sample_swap(l1, l2, rng)
    assert (alice.x ^ bob.x, alice.z ^ bob.z) == swap_observation(l1, l2) == (l1.x ^ l2.x, l1.z ^ l2.z)


@given(target_sets, st.data())
def test_self_swap_reveals_parity_class(ts, data):
    h = data.draw(st.permutations(range(ts.n)))
    for i in range(ts.n):
        obs = observe(ts, tuple(h), swap(HalfId(i, 1), HalfId(i, 2)))
        pc = parity_class(ts[h[i]])
        assert (obs.sx, obs.sz) == (pc.X, pc.Z)
        assert half_label(ts, tuple(h), HalfId(i, 1)) == ts[h[i]].first


def test_dead_pairs_never_separate():
    violations, reached = dead_pair_violations(2_000)
    assert violations == 0
    assert reached > 100


def test_verdict_invariant_under_symmetry():
    assert symmetry_violations(40) == 0


def test_pruning_preserves_verdicts():
    bad, checked = pruning_violations(10)
    assert bad == 0 and checked == 16 + 120 + 560 + 10


def test_every_small_set_is_markable():
    # sets of up to three targets are always markable
    for n in (1, 2, 3):
        assert all(decide_markable(ts)[0].kind == "Markable" for ts in itertools.islice(enumerate_sets(n), 200))
