import pytest

from qqmark import instances
from qqmark.ensemble import GROUP, TargetSet, apply_symmetry
from qqmark.protocol import HalfId, initial_knowledge, lpx, observation_partition
from qqmark.solver import (
    Budget,
    Markable,
    Undecided,
    Unmarkable,
    classify,
    decide_markable,
    decide_state,
    memo_key,
)
from qqmark.strategies import verify_strategy
from qqmark.tree import Mark, depth

UNMARKABLE_FIVE = TargetSet.parse("00.00,01.00,10.00,00.01,00.10")


def test_singleton_is_a_bare_mark():
    verdict, stats = decide_markable(TargetSet.parse("00.00"))
    assert verdict == Markable(Mark((0,)))
    assert stats.nodes_expanded == 0


def test_size_bounds():
    with pytest.raises(ValueError):
        decide_markable(TargetSet.parse("00.00,00.01,00.10,00.11,01.00,01.01,01.10,01.11"))


def test_witness_verifies():
    ts = TargetSet.parse("00.00,01.00,10.00,11.00")
    verdict, _ = decide_markable(ts)
    assert isinstance(verdict, Markable)
    assert verify_strategy(ts, verdict.witness).success


def test_unmarkable_five_set():
    # the only five-target orbit with no perfect strategy
    verdict, _ = decide_markable(UNMARKABLE_FIVE)
    assert isinstance(verdict, Unmarkable)


def test_catalogued_unmarkable_instances_are_solver_markable():
    for inst in instances.FIVE_UNMARKABLE:
        verdict, _ = decide_markable(inst.ts)
        assert isinstance(verdict, Markable), inst.name
        assert verify_strategy(inst.ts, verdict.witness).success


def test_budget_exhaustion_is_undecided():
    verdict, stats = decide_markable(instances.SEVEN.ts, Budget(max_nodes=500, max_seconds=None))
    assert isinstance(verdict, Undecided)
    assert stats.nodes_expanded > 500


def test_determinism():
    ts = instances.FIVE_MARKABLE[1].ts
    a, _ = decide_markable(ts)
    b, _ = decide_markable(ts)
    assert a == b


def test_decide_state_on_interior_state():
    ts = TargetSet.parse("00.00,10.00")
    cells = observation_partition(ts, initial_knowledge(2), lpx(HalfId(0, 2)))
    (cell,) = cells.values()
    verdict, _ = decide_state(ts, cell)
    assert isinstance(verdict, Markable)


def test_memo_key():
    ts = TargetSet.parse("00.00,00.01,01.00")
    k = initial_knowledge(3)
    assert memo_key(ts, k) == memo_key(ts, k)
    smaller = k.__class__(3, k.intact, frozenset(list(k.hypotheses)[1:]))
    assert memo_key(ts, k) != memo_key(ts, smaller)
    for g in GROUP[::7]:
        image = apply_symmetry(g, ts)
        assert memo_key(image, k, symmetry=True) == memo_key(ts, k, symmetry=True)
    assert memo_key(apply_symmetry(GROUP[5], ts), k) != memo_key(ts, k) or apply_symmetry(GROUP[5], ts) == ts


def test_classify_small_sizes():
    rows = classify(2)
    assert rows and all(r["verdict"] == "Markable" for r in rows)
    assert sum(r["orbit_size"] for r in rows) == 120
    raw = classify(2, raw=True)
    assert len(raw) == 120 and "orbit_size" not in raw[0]


def test_classify_five_two_rows():
    rows = classify(5, signature_filter="4,2")
    profiles = {r["signature"]: r for r in rows}
    assert rows
    for r in rows:
        assert r["verdict"] == "Markable"
        assert r["scripted"] == "success"
        assert r["agree"] is True
    assert any("1+4" in s for s in profiles) and any("2+3" in s for s in profiles)


def test_witness_depth_field():
    rows = classify(3)
    for r in rows:
        if r["verdict"] == "Markable":
            assert r["witness_depth"] >= 0
    assert depth(Mark((0,))) == 0
