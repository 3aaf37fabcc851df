"""Letter patterns for the catalogued target-set shapes, and matching onto them.

A pattern such as ``"aA aB bA bB"`` lists targets as two letters: lowercase
for one slot, uppercase for the other.  Distinct letters of the same case are
distinct Bell labels.  A match fixes which slot the lowercase letters live on
and which label each letter stands for.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ..bell import BellLabel, QuquadLabel
from ..ensemble import TargetSet


@dataclass(frozen=True)
class Pattern:
    name: str
    pairs: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, name: str, text: str) -> "Pattern":
        return cls(name, tuple((tok[0], tok[1]) for tok in text.split()))

    @property
    def lower(self) -> list[str]:
        return sorted({p[0] for p in self.pairs})

    @property
    def upper(self) -> list[str]:
        return sorted({p[1] for p in self.pairs})


@dataclass(frozen=True)
class Match:
    pattern: Pattern
    slot: int  # slot carrying the lowercase letters
    letters: dict[str, BellLabel]
    ts: TargetSet

    @property
    def other(self) -> int:
        return 3 - self.slot

    def __getitem__(self, letter: str) -> BellLabel:
        return self.letters[letter]

    def target(self, pair: str) -> int:
        """Index in the target set of the target written ``pair`` (e.g. ``"aB"``)."""
        return self.ts.index(_ququad(self.slot, self.letters[pair[0]], self.letters[pair[1]]))


def _ququad(slot: int, low: BellLabel, up: BellLabel) -> QuquadLabel:
    return QuquadLabel(low, up) if slot == 1 else QuquadLabel(up, low)


def match_all(ts: TargetSet, pattern: Pattern) -> Iterator[Match]:
    """Every letter assignment realizing ``pattern``, slot 1 as lowercase first."""
    if len(pattern.pairs) != ts.n:
        return
    wanted = set(ts)
    lower, upper = pattern.lower, pattern.upper
    for slot in (1, 2):
        have_low = {q.half(slot) for q in ts}
        have_up = {q.half(3 - slot) for q in ts}
        if len(have_low) != len(lower) or len(have_up) != len(upper):
            continue
        for lows in itertools.permutations(sorted(have_low), len(lower)):
            for ups in itertools.permutations(sorted(have_up), len(upper)):
                letters = dict(zip(lower, lows)) | dict(zip(upper, ups))
                got = {_ququad(slot, letters[a], letters[b]) for a, b in pattern.pairs}
                if got == wanted:
                    yield Match(pattern, slot, letters, ts)


def match(ts: TargetSet, pattern: Pattern) -> Match | None:
    return next(match_all(ts, pattern), None)


def identify(ts: TargetSet, patterns: list[Pattern]) -> Match | None:
    for p in patterns:
        m = match(ts, p)
        if m is not None:
            return m
    return None


FOUR = [
    Pattern.of("(2,2)", "aA aB bA bB"),
    Pattern.of("(4,1)", "aA bA cA dA"),
    Pattern.of("(4,4)", "aA bB cC dD"),
    Pattern.of("(4,2_2+2)", "aA bA cB dB"),
    Pattern.of("(4,2_1+3)", "aA bA cA dB"),
    Pattern.of("(3,3) single-out", "aB aC bA cA"),
    Pattern.of("(3,3) conditional", "aA aB bA cC"),
    Pattern.of("(3,2_2+2)", "aA aB bA cB"),
    Pattern.of("(3,2_1+3)", "aA bA cA aB"),
    Pattern.of("(4,3)", "aA bA cB dC"),
]

FIVE = [
    Pattern.of("(4,2_1+4)", "aA aB bB cB dB"),
    Pattern.of("(4,2_2+3)", "aA aB bA cB dB"),
    Pattern.of("(4,4)", "aA aB bB cC dD"),
    Pattern.of("(4,3_1+1+3) i", "aA aB bC cC dC"),
    Pattern.of("(4,3_1+1+3) ii", "aA aC bB cC dC"),
    Pattern.of("(4,3_1+2+2) i", "aA aC bB cA dB"),
    Pattern.of("(4,3_1+2+2) ii", "aA aB bC cA dB"),
    Pattern.of("(3_1+1+3,3_1+1+3)", "aA bA cA cB cC"),
    Pattern.of("(3_1+1+3,3_1+2+2)", "aA aB aC bA cB"),
    Pattern.of("(3_1+2+2,3_1+2+2) i", "aA aB bA bB cC"),
    Pattern.of("(3_1+2+2,3_1+2+2) ii", "aA aB bA bC cB"),
]

SIX = [
    Pattern.of("(4,2_3+3)", "aA bA cA aB bB dB"),
    Pattern.of("(3,2_3+3)", "aA bA cA aB bB cB"),
]

SEVEN = [Pattern.of("(4,2_3+4)", "aA bA cA aB bB cB dB")]

PATTERNS = {4: FOUR, 5: FIVE, 6: SIX, 7: SEVEN}
