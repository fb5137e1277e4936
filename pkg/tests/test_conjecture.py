import itertools
from functools import reduce
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from nimperiod import (
    Branch,
    Case,
    CaseIParams,
    InvalidCaseError,
    PairSums,
    SubtractionSet,
    case1_params,
    case1_period,
    case2_candidates,
    case2_check,
    classify,
    predict,
)
from nimperiod.conjecture import case1_fraction

S = SubtractionSet


@pytest.mark.parametrize("triple, case", [((1, 2, 3), Case.I), ((1, 2, 4), Case.II), ((2, 4, 6), Case.I)])
def test_classify(triple, case):
    assert classify(S(*triple)) is case


@pytest.mark.parametrize(
    "triple, j, branch, period",
    [
        ((2, 3, 5), 1, Branch.LOW, 7),
        ((1, 2, 3), 1, Branch.HIGH, 4),
        ((2, 4, 6), 2, Branch.HIGH, 8),
    ],
)
def test_case1_examples(triple, j, branch, period):
    g = S(*triple)
    assert case1_params(g) == CaseIParams(j, branch)
    assert case1_period(g) == period


def test_case_guards():
    with pytest.raises(InvalidCaseError):
        case1_period(S(1, 2, 4))
    with pytest.raises(InvalidCaseError):
        case2_candidates(S(1, 2, 3))
    with pytest.raises(InvalidCaseError):
        case2_check(S(1, 2, 3), 4)


def test_case2_candidates_example():
    assert case2_candidates(S(1, 2, 4)) == (1, 3, 5, 6)


@pytest.mark.parametrize("p, expected", [(3, True), (2, False), (6, True), (1, True), (5, True), (4, False)])
def test_case2_check_examples(p, expected):
    assert case2_check(S(1, 2, 4), p) is expected


def test_pair_sums():
    sums = PairSums.of(S(1, 2, 4))
    assert sums.as_tuple() == (3, 5, 6)
    assert sums.divisible_pairs(3) == {(1, 2), (2, 3)}
    assert sums.divisible_pairs(2) == frozenset({(2, 3)})


@pytest.mark.parametrize(
    "triple, expected",
    [((1, 2, 3), (Case.I, 4, None)), ((1, 2, 4), (Case.II, None, (1, 3, 5, 6))), ((2, 3, 5), (Case.I, 7, None))],
)
def test_predict(triple, expected):
    pred = predict(S(*triple))
    assert (pred.case, pred.exact_period, pred.candidates) == expected


def test_high_branch_division_exact():
    for s1 in range(1, 256):
        for s2 in range(s1 + 1, 513 - s1):
            num, den = case1_fraction(S(s1, s2, s1 + s2))
            assert num % den == 0


@st.composite
def case2_games(draw):
    s3 = draw(st.integers(3, 4096))
    s2 = draw(st.integers(2, s3 - 1))
    s1 = draw(st.integers(1, s2 - 1))
    if s3 == s1 + s2:
        s3 += 1
    return S(s1, s2, s3)


def _brute_candidates(game):
    # every p in 1..max(sums) satisfying the predicate directly
    sums = PairSums.of(game).as_tuple()
    out = []
    for p in range(1, max(sums) + 1):
        divisible = [s for s in sums if s % p == 0]
        if divisible and reduce(gcd, divisible) == p:
            out.append(p)
    return tuple(out)


@settings(max_examples=200, deadline=None)
@given(case2_games())
def test_candidates_bound_closure_and_completeness(game):
    cands = case2_candidates(game)
    assert 1 <= len(cands) <= 7
    assert list(cands) == sorted(set(cands))
    assert reduce(gcd, PairSums.of(game).as_tuple()) in cands
    assert all(case2_check(game, g) for g in cands)
    assert cands == _brute_candidates(game)


def test_classify_over_range():
    for triple in itertools.combinations(range(1, 30), 3):
        g = S(*triple)
        assert (classify(g) is Case.I) == (g.s3 == g.s1 + g.s2)
