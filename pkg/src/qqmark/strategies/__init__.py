"""Scripted marking strategies and the tree verifier."""

from .policies import CoarseClasses, build_tree, coarse_classes, strategy_S
from .scripted import (
    AttemptReport,
    Branch,
    Obstruction,
    Outcome,
    n4_strategy,
    n5_strategy,
    n6_strategy,
    n7_attempt,
)
from .verify import VerifyReport, verify_strategy

__all__ = [
    "AttemptReport",
    "Branch",
    "CoarseClasses",
    "Obstruction",
    "Outcome",
    "VerifyReport",
    "build_tree",
    "coarse_classes",
    "n4_strategy",
    "n5_strategy",
    "n6_strategy",
    "n7_attempt",
    "strategy_S",
    "verify_strategy",
]
