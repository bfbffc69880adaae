"""Closed-form success aggregation and the halving conjugacy.

A team of s components with success probabilities p_1..p_s combines, under
the optimal odds-weighted pooling rule, into a single success probability

    apply_rule(p_1..p_s) = s / ((s - 1) + sum(1/p_i)).

The induced per-component weights q_i = p/p_i + p - 1 always sum to p; the
application is admissible only when every weight lies in [0, 1].
"""

from collections.abc import Sequence

from .errors import ConsistencyError, InputError
from .rationals import ExactRational, HALF, ONE, ZERO


def apply_rule(components: Sequence[ExactRational]) -> ExactRational:
    """Pooled success probability of one application step."""
    s = len(components)
    if s == 0:
        raise InputError("apply_rule needs at least one component")
    for p in components:
        if not (ZERO < p <= ONE):
            raise InputError(f"component out of (0,1]: {p}")
    inv_sum = sum((ONE / p for p in components), start=ExactRational(0))
    return ExactRational(s) / (ExactRational(s - 1) + inv_sum)


def solve_weights(components: Sequence[ExactRational]) -> list[ExactRational]:
    """Per-component weights q_i = p/p_i + p - 1 for the pooled value p."""
    p = apply_rule(components)
    weights = [p / pi + p - ONE for pi in components]
    # identity check: the weights of a pooled application always sum to p
    if sum(weights, start=ZERO) != p:
        raise ConsistencyError("weights do not sum to the pooled value")
    return weights


def is_valid_application(components: Sequence[ExactRational]) -> bool:
    """True when every induced weight lies in [0, 1]."""
    try:
        weights = solve_weights(components)
    except InputError:
        return False
    return all(ZERO <= q <= ONE for q in weights)


def contribution(x: ExactRational, p: ExactRational) -> ExactRational:
    """Weight a component of value p would carry in a pooled application of value x.

    Increasing in x, decreasing in p; nonpositive exactly when p >= x/(1-x).
    """
    return x / p + x - ONE


def h_map(p: ExactRational) -> ExactRational:
    """Level-shift map p -> p/(1+p), carrying level n onto level n+1."""
    if not (ZERO < p <= ONE):
        raise InputError(f"h_map argument out of (0,1]: {p}")
    return p / (ONE + p)


def h_inverse(x: ExactRational) -> ExactRational:
    """Inverse level shift x -> x/(1-x), defined on (0, 1/2]."""
    if not (ZERO < x <= HALF):
        raise InputError(f"h_inverse argument out of (0,1/2]: {x}")
    return x / (ONE - x)
