"""Concrete target sets for each catalogued shape.

Letters are instantiated as a=00, b=01, c=10, d=11 unless a condition on
the set D forces another choice (noted per entry).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ensemble import TargetSet


@dataclass(frozen=True)
class Instance:
    name: str
    shape: str  # catalog pattern name
    text: str
    expect: str  # "markable" or "unmarkable"

    @property
    def ts(self) -> TargetSet:
        return TargetSet.parse(self.text)


FIVE_MARKABLE = [
    Instance("lone-alpha", "(4,2_1+4)", "00.00,00.01,01.01,10.01,11.01", "markable"),
    Instance("two-three", "(4,2_2+3)", "00.00,00.01,01.00,10.01,11.01", "markable"),
    Instance("four-four X=beta", "(4,4)", "00.00,01.01,10.10,11.11,00.01", "markable"),
    Instance("four-four X=gamma", "(4,4)", "00.00,01.01,10.10,11.11,00.10", "markable"),
    Instance("four-four X=delta", "(4,4)", "00.00,01.01,10.10,11.11,00.11", "markable"),
    Instance("four-three 1+2+2 i", "(4,3_1+2+2) i", "00.00,00.10,01.01,10.00,11.01", "markable"),
    Instance("three-three i {b,c} not in D", "(3_1+2+2,3_1+2+2) i", "00.00,00.01,01.00,01.01,11.10", "markable"),
    Instance("three-three i {b,c} in D", "(3_1+2+2,3_1+2+2) i", "00.00,00.01,01.00,01.01,10.10", "markable"),
    # b=01, c=11
    Instance("three-three 1+1+3/1+2+2 {b,c} not in D", "(3_1+1+3,3_1+2+2)", "00.00,00.01,00.10,01.00,11.01", "markable"),
    Instance("four-three 1+2+2 ii {a,b} not in D", "(4,3_1+2+2) ii", "00.00,00.01,01.10,10.00,11.01", "markable"),
    # b=01, c=11
    Instance("three-three ii {b,c} not in D", "(3_1+2+2,3_1+2+2) ii", "00.00,00.01,01.00,01.10,11.01", "markable"),
]

FIVE_UNMARKABLE = [
    Instance("four-three 1+1+3 i", "(4,3_1+1+3) i", "00.00,00.01,01.10,10.10,11.10", "unmarkable"),
    Instance("four-three 1+1+3 ii", "(4,3_1+1+3) ii", "00.00,00.10,01.01,10.10,11.10", "unmarkable"),
    Instance("three-three 1+1+3", "(3_1+1+3,3_1+1+3)", "00.00,01.00,10.00,10.01,10.10", "unmarkable"),
    # b=11, c=01, d=10
    Instance("four-three 1+2+2 ii {a,b} in D", "(4,3_1+2+2) ii", "00.00,00.01,11.10,01.00,10.01", "unmarkable"),
    # b=01, c=10
    Instance("three-three 1+1+3/1+2+2 {b,c} in D", "(3_1+1+3,3_1+2+2)", "00.00,00.01,00.10,01.00,10.01", "unmarkable"),
    Instance("three-three ii {b,c} in D", "(3_1+2+2,3_1+2+2) ii", "00.00,00.01,01.00,01.10,10.01", "unmarkable"),
]

SIX = [
    Instance("six k=4", "(4,2_3+3)", "00.00,01.00,10.00,00.01,01.01,11.01", "markable"),
    Instance("six k=3", "(3,2_3+3)", "00.00,01.00,10.00,00.01,01.01,10.01", "markable"),
]

SEVEN = Instance("seven", "(4,2_3+4)", "00.00,01.00,10.00,00.01,01.01,10.01,11.01", "unmarkable")
