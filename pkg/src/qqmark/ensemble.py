"""Target sets, case signatures and the symmetry group used to canonicalize them."""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .bell import BELL_LABELS, QUQUAD_LABELS, BellLabel, QuquadLabel


class ParseError(ValueError):
    """Malformed target-set text; ``position`` is the 0-based offending column."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class TargetSet:
    """A set of distinct ququad labels, stored sorted so indices are stable."""

    targets: tuple[QuquadLabel, ...]

    def __init__(self, targets: Iterable[QuquadLabel | str]):
        items = [QuquadLabel.parse(t) if isinstance(t, str) else QuquadLabel(*t) for t in targets]
        if not items:
            raise ValueError("a target set needs at least one state")
        if len(set(items)) != len(items):
            dup = [str(q) for q, c in Counter(items).items() if c > 1]
            raise ValueError(f"duplicate targets: {', '.join(dup)}")
        object.__setattr__(self, "targets", tuple(sorted(items)))

    @classmethod
    def parse(cls, text: str) -> "TargetSet":
        return parse_target_set(text)

    @property
    def n(self) -> int:
        return len(self.targets)

    def __len__(self) -> int:
        return len(self.targets)

    def __iter__(self) -> Iterator[QuquadLabel]:
        return iter(self.targets)

    def __getitem__(self, i: int) -> QuquadLabel:
        return self.targets[i]

    def index(self, q: QuquadLabel) -> int:
        return self.targets.index(q)

    def __str__(self) -> str:
        return ",".join(str(q) for q in self.targets)

    def __repr__(self) -> str:
        return f"TargetSet({str(self)!r})"


_TOKEN = re.compile(r"\s*([01]{2})\.([01]{2})\s*")


def parse_target_set(text: str) -> TargetSet:
    """Parse ``"00.00, 01.10, ..."``.

    Raises :class:`ParseError` with the column of the first bad token.
    """
    labels: list[QuquadLabel] = []
    seen: dict[QuquadLabel, int] = {}
    pos = 0
    if not text.strip():
        raise ParseError("empty target set", 0)
    for chunk in text.split(","):
        m = _TOKEN.fullmatch(chunk)
        if m is None:
            offset = len(chunk) - len(chunk.lstrip())
            raise ParseError(f"expected a label like '01.10', got {chunk.strip()!r}", pos + offset)
        q = QuquadLabel(BellLabel.parse(m.group(1)), BellLabel.parse(m.group(2)))
        if q in seen:
            raise ParseError(f"duplicate label {q}", pos + m.start(1))
        seen[q] = pos
        labels.append(q)
        pos += len(chunk) + 1
    return TargetSet(labels)


class CaseSignature(NamedTuple):
    """Distinct half-label counts and their multiplicity profiles."""

    h1: int
    h2: int
    profile1: tuple[int, ...]
    profile2: tuple[int, ...]

    def swapped(self) -> "CaseSignature":
        return CaseSignature(self.h2, self.h1, self.profile2, self.profile1)

    def __str__(self) -> str:
        p1 = "+".join(map(str, self.profile1))
        p2 = "+".join(map(str, self.profile2))
        return f"({self.h1}_{p1},{self.h2}_{p2})"


def case_signature(ts: TargetSet) -> CaseSignature:
    c1 = Counter(q.first for q in ts)
    c2 = Counter(q.second for q in ts)
    return CaseSignature(len(c1), len(c2), tuple(sorted(c1.values())), tuple(sorted(c2.values())))


def parse_signature(text: str) -> CaseSignature | tuple[int, int]:
    """Parse ``"4,2"`` or ``"4_1+1+1+2,2_1+4"``.

    A bare pair filters on (h1, h2) only and is returned as a plain tuple.
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"bad signature {text!r}")
    if all("_" not in p for p in parts):
        return int(parts[0]), int(parts[1])
    hs, profiles = [], []
    for p in parts:
        h, _, prof = p.partition("_")
        hs.append(int(h))
        profiles.append(tuple(sorted(int(v) for v in prof.split("+"))))
    sig = CaseSignature(hs[0], hs[1], profiles[0], profiles[1])
    if sig.h1 != len(sig.profile1) or sig.h2 != len(sig.profile2):
        raise ValueError(f"profile lengths disagree with counts in {text!r}")
    return sig


def signature_matches(sig: CaseSignature, flt: CaseSignature | tuple[int, int] | None) -> bool:
    if flt is None:
        return True
    if isinstance(flt, CaseSignature):
        return sig == flt
    return (sig.h1, sig.h2) == tuple(flt)


# ---------------------------------------------------------------------------
# symmetry


def _xz(label: BellLabel) -> BellLabel:
    return BellLabel(label.z, label.x)


_ZERO = BellLabel(0, 0)


@dataclass(frozen=True)
class SymmetryElement:
    """``q -> W^xz_swap (T(t1, t2) (S^slot_swap q))``.

    S exchanges the halves, T XORs a fixed label into each half, W exchanges
    the x and z bits of every label.  These 64 maps form a group; each one
    shifts every observation of the game by a constant, so verdicts are
    invariant under it.
    """

    t1: BellLabel = _ZERO
    t2: BellLabel = _ZERO
    xz_swap: bool = False
    slot_swap: bool = False

    def __call__(self, q: QuquadLabel) -> QuquadLabel:
        a, b = (q.second, q.first) if self.slot_swap else (q.first, q.second)
        a, b = a ^ self.t1, b ^ self.t2
        if self.xz_swap:
            a, b = _xz(a), _xz(b)
        return QuquadLabel(a, b)

    def compose(self, inner: "SymmetryElement") -> "SymmetryElement":
        """The element acting as ``self(inner(q))``."""
        u1, u2 = (inner.t2, inner.t1) if self.slot_swap else (inner.t1, inner.t2)
        t1, t2 = self.t1, self.t2
        if inner.xz_swap:
            t1, t2 = _xz(t1), _xz(t2)
        return SymmetryElement(
            t1 ^ u1,
            t2 ^ u2,
            self.xz_swap != inner.xz_swap,
            self.slot_swap != inner.slot_swap,
        )

    def inverse(self) -> "SymmetryElement":
        t1, t2 = self.t1, self.t2
        if self.xz_swap:
            t1, t2 = _xz(t1), _xz(t2)
        if self.slot_swap:
            t1, t2 = t2, t1
        return SymmetryElement(t1, t2, self.xz_swap, self.slot_swap)

    def is_identity(self) -> bool:
        return self == IDENTITY


IDENTITY = SymmetryElement()

GROUP: tuple[SymmetryElement, ...] = tuple(
    SymmetryElement(t1, t2, w, s)
    for s in (False, True)
    for w in (False, True)
    for t1 in BELL_LABELS
    for t2 in BELL_LABELS
)

GENERATORS: tuple[SymmetryElement, ...] = (
    SymmetryElement(t1=BellLabel(1, 0)),
    SymmetryElement(t1=BellLabel(0, 1)),
    SymmetryElement(t2=BellLabel(1, 0)),
    SymmetryElement(t2=BellLabel(0, 1)),
    SymmetryElement(xz_swap=True),
    SymmetryElement(slot_swap=True),
)


def apply_symmetry(g: SymmetryElement, ts: TargetSet) -> TargetSet:
    return TargetSet(g(q) for q in ts)


def _sort_key(ts: TargetSet) -> tuple:
    sig = case_signature(ts)
    # slot order first (|H2| <= |H1|), then targets as bit strings
    return (sig.h2 > sig.h1, tuple(q.bits() for q in ts))


def canonical_form(ts: TargetSet) -> TargetSet:
    """Least image of ``ts`` over the group.

    Images with more distinct second halves than first halves are never
    chosen, so the result always has ``h2 <= h1``.
    """
    return min((apply_symmetry(g, ts) for g in GROUP), key=_sort_key)


def orbit(ts: TargetSet) -> set[TargetSet]:
    return {apply_symmetry(g, ts) for g in GROUP}


def is_canonical(ts: TargetSet) -> bool:
    return canonical_form(ts) == ts


def enumerate_sets(n: int, canonical: bool = False) -> Iterator[TargetSet]:
    """Every n-subset of the 16 ququad labels in lexicographic order.

    With ``canonical=True`` only orbit representatives are yielded.
    """
    if not 1 <= n <= 16:
        raise ValueError(f"set size must be in 1..16, got {n}")
    for combo in itertools.combinations(QUQUAD_LABELS, n):
        ts = TargetSet(combo)
        if canonical and not is_canonical(ts):
            continue
        yield ts
