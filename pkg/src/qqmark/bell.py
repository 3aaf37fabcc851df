"""Bit-level algebra of two-qubit Bell states.

A Bell state is named by two GF(2) bits ``(x, z)``: it is the +/- eigenstate of
``XX`` with sign ``(-1)**x`` and of ``ZZ`` with sign ``(-1)**z``.  Everything
the marking game can learn about a Bell pair is a function of these bits, so
the game engine works on labels only.  The state-vector routines at the bottom
of this module are an independent check on that claim.
"""

from __future__ import annotations

import enum
import itertools
import random
from typing import NamedTuple

import numpy as np


class Basis(enum.Enum):
    X = "X"
    Z = "Z"

    def __str__(self) -> str:
        return self.value


class BellLabel(NamedTuple):
    x: int
    z: int

    @property
    def code(self) -> int:
        """Two-bit integer ``2x + z``; XOR of codes is the code of the XOR."""
        return (self.x << 1) | self.z

    @classmethod
    def from_code(cls, code: int) -> "BellLabel":
        return BELL_LABELS[code]

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        if len(text) != 2 or any(c not in "01" for c in text):
            raise ValueError(f"bad Bell label {text!r}: expected two bits like '10'")
        return cls(int(text[0]), int(text[1]))

    def bit(self, basis: Basis) -> int:
        return self.x if basis is Basis.X else self.z

    def __xor__(self, other: "BellLabel") -> "BellLabel":  # type: ignore[override]
        return BellLabel(self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return f"{self.x}{self.z}"


# indexed by code (2x + z), i.e. sorted by the "xz" text form
BELL_LABELS: tuple[BellLabel, ...] = tuple(BellLabel(x, z) for x in (0, 1) for z in (0, 1))

# the order |0̄0>, |1̄0>, |0̄1>, |1̄1> used for the state-vector oracle
ORACLE_ORDER: tuple[BellLabel, ...] = (
    BellLabel(0, 0),
    BellLabel(1, 0),
    BellLabel(0, 1),
    BellLabel(1, 1),
)


class ParityClass(NamedTuple):
    X: int
    Z: int

    def __str__(self) -> str:
        return f"S{self.X}{self.Z}"


class QuquadLabel(NamedTuple):
    first: BellLabel
    second: BellLabel

    @classmethod
    def parse(cls, text: str) -> "QuquadLabel":
        parts = text.split(".")
        if len(parts) != 2:
            raise ValueError(f"bad ququad label {text!r}: expected 'xz.xz'")
        return cls(BellLabel.parse(parts[0]), BellLabel.parse(parts[1]))

    def half(self, slot: int) -> BellLabel:
        if slot == 1:
            return self.first
        if slot == 2:
            return self.second
        raise ValueError(f"slot must be 1 or 2, got {slot}")

    def bits(self) -> tuple[int, int, int, int]:
        return (self.first.x, self.first.z, self.second.x, self.second.z)

    def __str__(self) -> str:
        return f"{self.first}.{self.second}"


QUQUAD_LABELS: tuple[QuquadLabel, ...] = tuple(
    QuquadLabel(a, b) for a in BELL_LABELS for b in BELL_LABELS
)


def stabilizer_sign(label: BellLabel, basis: Basis) -> int:
    return -1 if label.bit(basis) else 1


def lpm_bit(label: BellLabel, basis: Basis) -> int:
    """The bit revealed by measuring both qubits of a Bell pair in ``basis``."""
    return label.bit(basis)


def sample_lpm(label: BellLabel, basis: Basis, rng: random.Random) -> tuple[int, int]:
    """Local outcomes (Alice, Bob) of a joint sigma_x or sigma_z measurement.

    Alice's sign is uniform; Bob's is fixed by the stabilizer sign.
    """
    o_a = rng.choice((1, -1))
    return o_a, o_a * stabilizer_sign(label, basis)


def swap_observation(l1: BellLabel, l2: BellLabel) -> tuple[int, int]:
    """Parity bits conserved by entanglement swapping on two Bell pairs."""
    return l1.x ^ l2.x, l1.z ^ l2.z


def sample_swap(l1: BellLabel, l2: BellLabel, rng: random.Random) -> tuple[BellLabel, BellLabel]:
    """Post-measurement Bell labels held by Alice (A1A2) and Bob (B1B2)."""
    alice = BELL_LABELS[rng.randrange(4)]
    sx, sz = swap_observation(l1, l2)
    return alice, BellLabel(alice.x ^ sx, alice.z ^ sz)


def parity_class(q: QuquadLabel) -> ParityClass:
    sx, sz = swap_observation(q.first, q.second)
    return ParityClass(sx, sz)


def in_D(a: BellLabel, b: BellLabel) -> bool:
    """True for the pairs {00, 11} and {01, 10}: labels differing in both bits."""
    return a.x != b.x and a.z != b.z


def distinguishing_basis(a: BellLabel, b: BellLabel) -> str:
    """Which local Pauli measurement tells ``a`` from ``b``.

    Returns ``"none"``, ``"X"``, ``"Z"`` or ``"either"``.
    """
    dx, dz = a.x != b.x, a.z != b.z
    if dx and dz:
        return "either"
    if dx:
        return "X"
    if dz:
        return "Z"
    return "none"


def pick_basis(a: BellLabel, b: BellLabel) -> Basis:
    """A basis separating two distinct labels, preferring X on ties."""
    which = distinguishing_basis(a, b)
    if which == "none":
        raise ValueError(f"labels {a} and {b} are identical")
    return Basis.Z if which == "Z" else Basis.X


# ---------------------------------------------------------------------------
# state-vector oracle

_SQRT_HALF = 1.0 / np.sqrt(2.0)


def bell_vector(label: BellLabel) -> np.ndarray:
    """Amplitudes of |x̄z> as a 2x2 array indexed [qubit_a, qubit_b].

    |x̄z> = (|0 z> + (-1)^x |1 (1-z)>) / sqrt(2).
    """
    psi = np.zeros((2, 2))
    psi[0, label.z] = _SQRT_HALF
    psi[1, 1 - label.z] = _SQRT_HALF * (-1) ** label.x
    return psi


def oracle_swap_distribution(
    l1: BellLabel, l2: BellLabel
) -> dict[tuple[BellLabel, BellLabel], float]:
    """Outcome probabilities of Bell measurements on (A1 A2) and (B1 B2).

    The input is |l1>_{A1 B1} (x) |l2>_{A2 B2}; only outcomes with nonzero
    probability are returned, keyed by (Alice's label, Bob's label).
    """
    psi = np.einsum("ab,cd->abcd", bell_vector(l1), bell_vector(l2))  # A1 B1 A2 B2
    out = {}
    for m_a in ORACLE_ORDER:
        for m_b in ORACLE_ORDER:
            amp = np.einsum("ac,bd,abcd->", bell_vector(m_a), bell_vector(m_b), psi)
            p = float(amp * amp)
            if p > 1e-12:
                out[(m_a, m_b)] = p
    return out


_PAULI = {
    Basis.X: np.array([[0.0, 1.0], [1.0, 0.0]]),
    Basis.Z: np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def oracle_lpm_distribution(label: BellLabel, basis: Basis) -> dict[tuple[int, int], float]:
    """Joint distribution of the two local sign outcomes of an LPM."""
    vals, vecs = np.linalg.eigh(_PAULI[basis])
    psi = bell_vector(label)
    out = {}
    for (i, va), (j, vb) in itertools.product(enumerate(vals), repeat=2):
        amp = vecs[:, i] @ psi @ vecs[:, j]
        p = float(amp * amp)
        if p > 1e-12:
            out[(int(round(va)), int(round(vb)))] = p
    return out
