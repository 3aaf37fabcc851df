"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import itertools
import random

from test_properties import (
    conservation_violations,
    dead_pair_violations,
    partition_violations,
    pruning_violations,
    symmetry_violations,
)

from qqmark import instances
from qqmark.bell import (
    BELL_LABELS,
    Basis,
    ORACLE_ORDER,
    oracle_lpm_distribution,
    oracle_swap_distribution,
    sample_lpm,
    sample_swap,
    stabilizer_sign,
    swap_observation,
)
from qqmark.ensemble import enumerate_sets
from qqmark.protocol import dead_pair_exists, simulate
from qqmark.solver import Budget, decide_markable
from qqmark.strategies import n4_strategy, n5_strategy, n6_strategy, n7_attempt, verify_strategy
from qqmark.tree import depth

SEEDS_PER_HYPOTHESIS = 100
PROB_TOL = 1e-12
LPM_SAMPLES = 10_000
# the budget a seven-target search is allowed
SEVEN_BUDGET = Budget(max_nodes=10**8, max_seconds=12 * 3600)


def test_criterion_1_all_four_target_sets(record):
    total = solved = scripted = 0
    for ts in enumerate_sets(4):
        total += 1
        solved += decide_markable(ts)[0].kind == "Markable"
        scripted += verify_strategy(ts, n4_strategy(ts)).success
    ok = total == 1820 and solved == scripted == total
    record(1, ok, f"solver {solved}/{total} Markable, scripted {scripted}/{total} verified")
    assert ok


def test_criterion_2_five_target_markable_catalog(record):
    failures = []
    for inst in instances.FIVE_MARKABLE:
        out = n5_strategy(inst.ts)
        if out.tree is None:
            failures.append(f"{inst.name}: {out.reason}")
            continue
        report = verify_strategy(inst.ts, out.tree)
        if not report.success or report.hypotheses_checked != 120:
            failures.append(f"{inst.name}: verification failed at {report.failing_hypothesis}")
            continue
        for hidden in itertools.permutations(range(5)):
            bad = sum(
                not simulate(inst.ts, hidden, out.tree, seed).success for seed in range(SEEDS_PER_HYPOTHESIS)
            )
            if bad:
                failures.append(f"{inst.name}: {bad} failed runs for {hidden}")
    ok = not failures
    record(2, ok, f"{len(instances.FIVE_MARKABLE)} instances x 120 hypotheses x {SEEDS_PER_HYPOTHESIS} seeds, "
           f"{len(failures)} failures")
    assert ok, failures


def test_criterion_3_five_target_unmarkable_catalog(record):
    failures, verdicts = [], []
    for inst in instances.FIVE_UNMARKABLE:
        out = n5_strategy(inst.ts)
        if out.tree is not None or out.obstruction is None:
            failures.append(inst.name)
        elif not all(dead_pair_exists(inst.ts, k) for k in out.obstruction.states):
            failures.append(inst.name)
        verdict = decide_markable(inst.ts)[0]
        note = f"depth {depth(verdict.witness)}" if verdict.kind == "Markable" else ""
        verdicts.append(f"{inst.name}={verdict.kind}{' ' + note if note else ''}")
    ok = not failures
    record(3, ok, f"{len(instances.FIVE_UNMARKABLE)} dead-pair obstructions; solver: " + ", ".join(verdicts))
    assert ok, failures


def test_criterion_4_six_target_cases(record):
    results = []
    for inst in instances.SIX:
        out = n6_strategy(inst.ts)
        report = verify_strategy(inst.ts, out.tree) if out.tree is not None else None
        results.append(report is not None and report.success and report.hypotheses_checked == 720)
    ok = all(results) and len(results) == 2
    record(4, ok, f"{sum(results)}/{len(results)} trees verified over 720 hypotheses")
    assert ok


def test_criterion_5_seven_target_case(record):
    ts = instances.SEVEN.ts
    report = n7_attempt(ts, budget=None)
    branches_dead = report.all_dead and all(dead_pair_exists(ts, b.dead_end) for b in report.branches)
    verdict, stats = decide_markable(ts, SEVEN_BUDGET)
    expected_verdict = verdict.kind in ("Unmarkable", "Undecided")
    ok = branches_dead and expected_verdict
    detail = (
        f"{len(report.branches)} branches end in dead pairs: {branches_dead}; "
        f"solver verdict {verdict.kind} after {stats.nodes_expanded} nodes"
    )
    if verdict.kind == "Markable":
        detail += f" (witness depth {depth(verdict.witness)}, re-verified: {verify_strategy(ts, verdict.witness).success})"
    record(5, ok, detail)
    assert branches_dead
    assert expected_verdict, detail


def test_criterion_6_micro_oracle(record):
    checked = mismatches = 0
    rng = random.Random(0)
    for l1, l2 in itertools.product(BELL_LABELS, repeat=2):
        dist = oracle_swap_distribution(l1, l2)
        sampled = {sample_swap(l1, l2, rng) for _ in range(400)}
        sx, sz = swap_observation(l1, l2)
        for m_a, m_b in itertools.product(ORACLE_ORDER, repeat=2):
            checked += 1
            allowed = (m_a.x ^ m_b.x, m_a.z ^ m_b.z) == (sx, sz)
            p = dist.get((m_a, m_b), 0.0)
            if allowed:
                mismatches += abs(p - 0.25) > PROB_TOL or (m_a, m_b) not in sampled
            else:
                mismatches += p != 0.0 or (m_a, m_b) in sampled
    lpm_bad = 0
    for label, basis in itertools.product(BELL_LABELS, (Basis.X, Basis.Z)):
        sign = stabilizer_sign(label, basis)
        support = {pair for pair, p in oracle_lpm_distribution(label, basis).items() if p > PROB_TOL}
        seen = set()
        for _ in range(LPM_SAMPLES):
            o_a, o_b = sample_lpm(label, basis, rng)
            lpm_bad += o_a * o_b != sign
            seen.add((o_a, o_b))
        lpm_bad += seen != support
    ok = checked == 256 and mismatches == 0 and lpm_bad == 0
    record(6, ok, f"swap: {checked} combinations, {mismatches} mismatches; LPM: 8 combinations, {lpm_bad} violations")
    assert ok


def test_criterion_7_property_suites(record):
    part_bad = partition_violations(2_000)
    cons_bad = conservation_violations(10_000)
    dead_bad, reached = dead_pair_violations(10_000)
    sym_bad = symmetry_violations(200)
    prune_bad, pruned_sets = pruning_violations(50)
    ok = part_bad == cons_bad == dead_bad == sym_bad == prune_bad == 0
    record(
        7,
        ok,
        f"partitions: {part_bad} violations over 2000 walks; parity conservation: {cons_bad} over 10000 swaps; "
        f"dead pairs: {dead_bad} violations over 10000 sequences ({reached} reached a dead pair); "
        f"symmetry: {sym_bad} over 200 sets; pruning: {prune_bad} over {pruned_sets} sets",
    )
    assert ok
