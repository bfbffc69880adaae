"""Minimal allowed-tuple sets and the smallest-advance query."""

import random
from fractions import Fraction as F

import pytest

from pfinhier import (
    InputError,
    apply_rule,
    component_pool,
    contribution,
    find_smallest,
    prune_dominated,
)
from pfinhier.minimal_sets import xd_minimal

from oracles import base_members, dominated_by_some, sample_allowed_tuples

CHAIN = [F(12, 25), F(8, 17), F(20, 43), F(6, 13)]


def P(hier, x, d):
    return xd_minimal(hier, x, d, hier.governing_floor(x))


def test_full_budget_sets(hier):
    ms = P(hier, F(12, 25), F(12, 25))
    assert ms.delta == F(1, 5) and ms.p0_prime == F(2, 3)
    # the governing floor for the chain segment is 1/2, so the identity
    # singleton (12/25,) sits below the component range and is excluded
    assert ms.floor == F(1, 2)
    assert ms.tuples == (
        (F(1, 2),),
        (F(3, 5), F(2, 3)),
        (F(2, 3), F(2, 3)),
    )
    ms = P(hier, F(2, 3), F(2, 3))
    assert ms.tuples == ((F(2, 3),), (F(1), F(1)))
    assert ms.delta == F(1, 3) and ms.p0_prime == F(1)
    ms = P(hier, F(1, 2), F(1, 2))
    assert ms.tuples == ((F(1, 2),), (F(2, 3), F(2, 3)))


def test_small_budgets(hier):
    assert P(hier, F(12, 25), F(0)).tuples == ()
    # nothing fits under 1/25: the cheapest contribution is delta = 1/5
    assert P(hier, F(12, 25), F(1, 25)).tuples == ()
    assert P(hier, F(12, 25), F(1, 5)).tuples == ((F(2, 3),),)
    assert P(hier, F(12, 25), F(7, 25)).tuples == ((F(3, 5),), (F(2, 3),))


def test_budget_guard(hier):
    with pytest.raises(InputError):
        P(hier, F(12, 25), F(13, 25))
    with pytest.raises(InputError):
        P(hier, F(12, 25), F(-1, 25))


def test_find_smallest_advances(hier):
    x = F(12, 25)
    assert find_smallest(hier, P(hier, x, F(1, 25)), x, F(1, 25)) == F(1, 5)
    assert find_smallest(hier, P(hier, x, F(1, 5)), x, F(1, 5)) == F(7, 25)
    assert find_smallest(hier, P(hier, x, F(7, 25)), x, F(7, 25)) == F(8, 25)


def test_exact_totals_witness_membership(hier):
    # a member's full-budget set contains a tuple hitting the budget exactly,
    # and the rule applied to it reproduces the member
    for x in [F(12, 25), F(2, 3), F(1, 2), F(8, 17)]:
        ms = P(hier, x, x)
        exact = [
            T for T in ms.tuples
            if sum(contribution(x, p) for p in T) == x
        ]
        assert exact, x
        assert all(apply_rule(T) == x for T in exact)


def test_membership_and_container_protocol(hier):
    ms = P(hier, F(12, 25), F(12, 25))
    assert len(ms) == 3
    assert (F(3, 5), F(2, 3)) in ms
    assert [F(3, 5), F(2, 3)] in ms
    assert (F(3, 5),) not in ms


def test_domination_oracle(hier):
    rng = random.Random(20260821)
    for x in [F(12, 25), F(1, 2), F(8, 17)]:
        ms = P(hier, x, x)
        # domination is claimed over components at or above the set's floor
        pool = [p for p in base_members(10) + CHAIN if p >= ms.floor]
        for T in sample_allowed_tuples(rng, x, x, pool, 120):
            assert dominated_by_some(T, ms.tuples), (x, T)


def test_domination_at_partial_budget(hier):
    rng = random.Random(7)
    x = F(12, 25)
    for d in [F(1, 5), F(7, 25), F(2, 5)]:
        ms = P(hier, x, d)
        pool = [p for p in base_members(10) + CHAIN if p >= ms.floor]
        for T in sample_allowed_tuples(rng, x, d, pool, 60):
            assert dominated_by_some(T, ms.tuples), (d, T)


def test_prune_dominated():
    tuples = [
        (F(2, 3),),
        (F(3, 5),),
        (F(2, 3), F(2, 3)),
        (F(3, 5), F(2, 3)),
        (F(3, 5), F(2, 3)),
    ]
    assert prune_dominated(tuples) == ((F(3, 5),), (F(3, 5), F(2, 3)))
    # incomparable same-length tuples all survive
    keep = [(F(1, 2), F(2, 3)), (F(3, 5), F(3, 5))]
    assert set(prune_dominated(keep)) == set(keep)
    assert prune_dominated([]) == ()


def test_component_pool(hier):
    ms = P(hier, F(12, 25), F(12, 25))
    assert component_pool(ms) == (F(1, 2), F(3, 5), F(2, 3))
