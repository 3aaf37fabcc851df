import itertools
import random

import pytest

from qqmark.bell import (
    BELL_LABELS,
    Basis,
    BellLabel,
    ParityClass,
    QuquadLabel,
    distinguishing_basis,
    in_D,
    lpm_bit,
    oracle_lpm_distribution,
    oracle_swap_distribution,
    parity_class,
    pick_basis,
    sample_lpm,
    sample_swap,
    stabilizer_sign,
    swap_observation,
)

L = BellLabel.parse


def test_label_codes_and_parsing():
    assert [str(b) for b in BELL_LABELS] == ["00", "01", "10", "11"]
    assert L("10") == BellLabel(1, 0)
    assert BellLabel.from_code(3) == L("11")
    assert L("10") ^ L("01") == L("11")
    with pytest.raises(ValueError):
        L("2")
    q = QuquadLabel.parse("01.10")
    assert (q.half(1), q.half(2)) == (L("01"), L("10"))
    assert str(q) == "01.10"


@pytest.mark.parametrize(
    "label,basis,sign",
    [("00", Basis.X, 1), ("10", Basis.X, -1), ("01", Basis.X, 1), ("01", Basis.Z, -1)],
)
def test_stabilizer_sign(label, basis, sign):
    assert stabilizer_sign(L(label), basis) == sign


def test_lpm_bit_examples():
    assert lpm_bit(L("00"), Basis.X) == 0
    assert lpm_bit(L("10"), Basis.X) == 1
    assert lpm_bit(L("01"), Basis.Z) == 1


def test_sample_lpm_product_and_uniformity():
    rng = random.Random(3)
    assert all(a * b == 1 for a, b in (sample_lpm(L("00"), Basis.X, rng) for _ in range(200)))
    assert all(a * b == -1 for a, b in (sample_lpm(L("11"), Basis.Z, rng) for _ in range(200)))
    samples = [sample_lpm(L("00"), Basis.X, rng)[0] for _ in range(10_000)]
    mean = sum(samples) / len(samples)
    assert abs(mean) < 4 / len(samples) ** 0.5


def test_swap_observation_examples():
    assert swap_observation(L("00"), L("00")) == (0, 0)
    assert swap_observation(L("10"), L("01")) == (1, 1)


def test_sample_swap_constraint_and_frequencies():
    rng = random.Random(5)
    for _ in range(200):
        alice, bob = sample_swap(L("00"), L("00"), rng)
        assert alice == bob
        alice, bob = sample_swap(L("10"), L("01"), rng)
        assert bob == alice ^ L("11")
    counts = {b: 0 for b in BELL_LABELS}
    for _ in range(10_000):
        counts[sample_swap(L("00"), L("00"), rng)[0]] += 1
    for c in counts.values():
        assert abs(c / 10_000 - 0.25) < 0.02


def test_oracle_swap_identical_labels_is_uniform_diagonal():
    dist = oracle_swap_distribution(L("00"), L("00"))
    assert set(dist) == {(b, b) for b in BELL_LABELS}
    assert all(p == pytest.approx(0.25, abs=1e-12) for p in dist.values())


def test_oracle_swap_support_matches_xor():
    for l1, l2 in itertools.product(BELL_LABELS, repeat=2):
        dist = oracle_swap_distribution(l1, l2)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
        sx, sz = swap_observation(l1, l2)
        expected = {(a, BellLabel(a.x ^ sx, a.z ^ sz)) for a in BELL_LABELS}
        assert set(dist) == expected


def test_oracle_lpm_matches_sign_rule():
    for label in BELL_LABELS:
        for basis in Basis:
            dist = oracle_lpm_distribution(label, basis)
            sign = stabilizer_sign(label, basis)
            assert set(dist) == {(1, sign), (-1, -sign)}
            assert all(p == pytest.approx(0.5, abs=1e-12) for p in dist.values())


def test_parity_class():
    assert parity_class(QuquadLabel.parse("00.01")) == ParityClass(0, 1)
    assert parity_class(QuquadLabel.parse("00.00")) == ParityClass(0, 0)
    assert parity_class(QuquadLabel.parse("10.11")) == ParityClass(0, 1)
    assert str(ParityClass(0, 1)) == "S01"


def test_in_D():
    assert in_D(L("00"), L("11"))
    assert in_D(L("01"), L("10"))
    assert not in_D(L("00"), L("00"))
    assert not in_D(L("00"), L("01"))


def test_distinguishing_basis_and_tie_break():
    assert distinguishing_basis(L("00"), L("10")) == "X"
    assert distinguishing_basis(L("00"), L("01")) == "Z"
    assert distinguishing_basis(L("00"), L("00")) == "none"
    assert distinguishing_basis(L("00"), L("11")) == "either"
    assert pick_basis(L("00"), L("11")) is Basis.X
    assert pick_basis(L("00"), L("01")) is Basis.Z
    with pytest.raises(ValueError):
        pick_basis(L("01"), L("01"))
