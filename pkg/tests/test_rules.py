"""Generation rule, weights, and the h-conjugation."""

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfinhier import (
    InputError,
    apply_rule,
    contribution,
    h_inverse,
    h_map,
    is_valid_application,
    solve_weights,
)

members = st.sampled_from(
    [F(1, 2)] + [F(n, 2 * n - 1) for n in range(2, 13)] + [F(1)]
)
tuples = st.lists(members, min_size=1, max_size=5).map(tuple)


def test_apply_rule_examples():
    assert apply_rule((F(3, 5), F(2, 3))) == F(12, 25)
    assert apply_rule((F(1), F(1), F(1))) == F(3, 5)
    assert apply_rule((F(1, 2),)) == F(1, 2)
    # stars: s unit children generate s/(2s-1)
    for s in range(1, 11):
        assert apply_rule((F(1),) * s) == F(s, 2 * s - 1)


def test_apply_rule_rejects_empty_and_out_of_range():
    with pytest.raises(InputError):
        apply_rule(())
    with pytest.raises(InputError):
        apply_rule((F(0),))
    with pytest.raises(InputError):
        apply_rule((F(3, 2),))


def test_weights_worked_example():
    v = apply_rule((F(3, 5), F(2, 3)))
    assert solve_weights((F(3, 5), F(2, 3))) == [F(7, 25), F(5, 25)]
    assert contribution(v, F(3, 5)) == F(7, 25)
    assert contribution(v, F(1)) == F(-1, 25)
    assert is_valid_application((F(3, 5), F(2, 3)))
    # a unit component under a sub-1/2 value takes negative weight
    assert not is_valid_application((F(1), F(2, 3), F(3, 5)))


@given(tuples)
def test_weights_sum_to_value(T):
    v = apply_rule(T)
    ws = solve_weights(T)
    assert sum(ws) == v
    assert all(w == contribution(v, p) for w, p in zip(ws, T))


@given(tuples)
def test_h_conjugation_commutes(T):
    lhs = apply_rule(tuple(h_map(p) for p in T))
    rhs = h_map(apply_rule(T))
    assert lhs == rhs


@given(members)
def test_h_round_trip(p):
    assert h_inverse(h_map(p)) == p
    assert h_map(p) == p / (1 + p)


def test_contribution_fixed_point():
    for x in (F(12, 25), F(1, 2), F(2, 3)):
        assert contribution(x, x) == x
