"""Predicted periods of three-move subtraction games.

When s3 = s1 + s2 the period has a closed form in s1, s2, s3 and the
residue j = (s2 - s1) mod 2*s1.  Otherwise the period is pinned down only
by a divisibility condition on the pair sums s1+s2, s1+s3, s2+s3: it must
divide at least one of them and equal the gcd of all of those it divides.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Optional

from .errors import InvalidCaseError
from .game import SubtractionSet

PAIRS = ((1, 2), (1, 3), (2, 3))


class Case(str, enum.Enum):
    I = "I"
    II = "II"


class Branch(str, enum.Enum):
    LOW = "Low"
    HIGH = "High"


@dataclass(frozen=True)
class CaseIParams:
    j: int
    branch: Branch


@dataclass(frozen=True)
class PairSums:
    sum12: int
    sum13: int
    sum23: int

    @classmethod
    def of(cls, game: SubtractionSet) -> "PairSums":
        s1, s2, s3 = game.moves
        return cls(s1 + s2, s1 + s3, s2 + s3)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.sum12, self.sum13, self.sum23)

    def divisible_pairs(self, p: int) -> frozenset[tuple[int, int]]:
        """Index pairs (i, j) whose sum s_i + s_j is a multiple of p."""
        return frozenset(
            pair for pair, s in zip(PAIRS, self.as_tuple()) if s % p == 0
        )

    def divisible_by(self, p: int) -> list[int]:
        return [s for s in self.as_tuple() if s % p == 0]


@dataclass(frozen=True)
class Prediction:
    case: Case
    exact_period: Optional[int] = None
    candidates: Optional[tuple[int, ...]] = None

    def admits(self, game: SubtractionSet, period: int) -> bool:
        if self.case is Case.I:
            return period == self.exact_period
        return case2_check(game, period)


def classify(game: SubtractionSet) -> Case:
    return Case.I if game.s3 == game.s1 + game.s2 else Case.II


def _require(game: SubtractionSet, case: Case) -> None:
    if classify(game) is not case:
        raise InvalidCaseError(f"{game} is not a Case {case.value} game")


def case1_params(game: SubtractionSet) -> CaseIParams:
    _require(game, Case.I)
    s1 = game.s1
    j = (game.s2 - s1) % (2 * s1)
    return CaseIParams(j, Branch.LOW if j < s1 else Branch.HIGH)


def case1_fraction(game: SubtractionSet) -> tuple[int, int]:
    """Numerator and denominator of the Case I period (denominator 1 on the low branch)."""
    s1, s2, s3 = game.moves
    params = case1_params(game)
    j = params.j
    if params.branch is Branch.LOW:
        return s2 + s3 - j, 1
    return s1 * (s2 + s3 + j - 2 * s1), gcd(s1, 2 * s1 - j)


def case1_period(game: SubtractionSet) -> int:
    num, den = case1_fraction(game)
    p, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"Case I period of {game} is not integral: {num}/{den}")
    return p


def _self_consistent(sums: PairSums, g: int) -> bool:
    divisible = sums.divisible_by(g)
    return bool(divisible) and reduce(gcd, divisible) == g


def case2_candidates(game: SubtractionSet) -> tuple[int, ...]:
    """Self-consistent gcds of the 7 non-empty subsets of pair sums, ascending."""
    _require(game, Case.II)
    sums = PairSums.of(game)
    values = sums.as_tuple()
    gcds = {
        reduce(gcd, subset)
        for r in (1, 2, 3)
        for subset in combinations(values, r)
    }
    return tuple(sorted(g for g in gcds if _self_consistent(sums, g)))


def case2_check(game: SubtractionSet, p: int) -> bool:
    _require(game, Case.II)
    if p < 1:
        raise ValueError(f"period must be positive, got {p}")
    return _self_consistent(PairSums.of(game), p)


def predict(game: SubtractionSet) -> Prediction:
    if classify(game) is Case.I:
        return Prediction(Case.I, exact_period=case1_period(game))
    return Prediction(Case.II, candidates=case2_candidates(game))
