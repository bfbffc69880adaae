"""Level-by-level construction of the capability hierarchy.

The hierarchy A is the closure of {1} under the pooling rule restricted to
valid applications. On [1/2, 1] it is the explicit family {1/2} together
with n/(2n-1); below 1/2 it is reached level by level: the interval
[1/(n+1), 1/n] is populated by the images p/(1+p) of the previous level's
members (always limit points) and, between consecutive images, by segment
chains r_0 > r_1 > ... obtained from the recurrence r_next = pool(p, r).
Membership inside a segment reduces to the finite minimal-set search.

A is well ordered in decreasing order, so every member except 1 has an
immediate member above it (the predecessor), every strictly ascending
chain of members is finite, and limit members are approached from above
by computable strictly decreasing sequences.

All queries live on a Hierarchy object, which memoizes classifications,
segments, predecessors, and minimal sets. Queries below the configured
floor level raise FloorError instead of recursing without bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import minimal_sets
from .errors import ConsistencyError, DomainError, FloorError, InputError
from .rationals import ExactRational, HALF, ONE, ZERO
from .rules import apply_rule, h_inverse, h_map, is_valid_application


class Classification(Enum):
    MAXIMAL = "MAX"
    SUCCESSOR = "SUCC"
    LIMIT = "LIM"
    NOT_MEMBER = "NONE"


@dataclass(frozen=True)
class Segment:
    """One piece [r_lo, r_hi] of the chain splitting an anchor interval.

    The anchor runs from anchor_low = p/(1+p) to anchor_high = r/(1+r)
    for consecutive previous-level members p < r; index i means r_lo and
    r_hi are r_{i+1} and r_i of the anchor's recurrence. By convention a
    chain point r_{i+1} belongs to the segment it bounds from below.
    """

    level: int
    anchor_low: ExactRational
    anchor_high: ExactRational
    index: int
    r_lo: ExactRational
    r_hi: ExactRational


class LimitSequence:
    """Lazy strictly decreasing member sequence converging to a limit point.

    The raw generator may return None for indices it wants skipped (terms
    clipped by a segment bound or failing validity); skipped indices are
    transparent to callers, who see a dense 0, 1, 2, ... indexing.
    """

    def __init__(self, raw, scan_cap: int = 1000):
        self._raw = raw
        self._scan_cap = scan_cap
        self._accepted: list[ExactRational] = []
        self._cursor = 0

    def term(self, k: int) -> ExactRational:
        if k < 0:
            raise InputError(f"sequence index must be nonnegative: {k}")
        while len(self._accepted) <= k:
            scanned = 0
            while True:
                value = self._raw(self._cursor)
                self._cursor += 1
                if value is not None:
                    break
                scanned += 1
                if scanned > self._scan_cap:
                    raise ConsistencyError("limit sequence stopped producing terms")
            self._accepted.append(value)
        return self._accepted[k]

    def take(self, n: int) -> list[ExactRational]:
        return [self.term(k) for k in range(n)]

    def __call__(self, k: int) -> ExactRational:
        return self.term(k)


class Hierarchy:
    """Memoized query surface over the constructed levels."""

    def __init__(self, floor_level: int = 4):
        if floor_level < 1:
            raise InputError(f"floor level must be at least 1: {floor_level}")
        self.floor_level = floor_level
        self.xd_memo: dict = {}
        self._classify_memo: dict = {}
        self._segment_memo: dict = {}
        self._pred_memo: dict = {}
        self._below_memo: dict = {}
        self._bracket_memo: dict = {}
        self.ctx_memo: dict = {}
        self.team_memo: dict = {}
        self.alloc_memo: dict = {}

    # ---- guards ----

    def _check(self, x: ExactRational):
        if not isinstance(x, ExactRational):
            raise InputError(f"expected an exact rational, got {type(x).__name__}")
        if not (ZERO < x <= ONE):
            raise InputError(f"probability out of (0, 1]: {x}")
        if x < ExactRational(1, self.floor_level + 1):
            raise FloorError(
                f"{x} lies below the constructed floor 1/{self.floor_level + 1};"
                " raise the floor level to query it"
            )

    # ---- classification ----

    def classify(self, x: ExactRational) -> Classification:
        self._check(x)
        cached = self._classify_memo.get(x)
        if cached is not None:
            return cached
        result = self._classify_inner(x)
        self._classify_memo[x] = result
        return result

    def _classify_inner(self, x: ExactRational) -> Classification:
        if x >= HALF:
            if x == ONE:
                return Classification.MAXIMAL
            if x == HALF:
                return Classification.LIMIT
            if x.denominator == 2 * x.numerator - 1:
                return Classification.SUCCESSOR
            return Classification.NOT_MEMBER
        # images of members are always limit points
        if self.classify(h_inverse(x)) is not Classification.NOT_MEMBER:
            return Classification.LIMIT
        seg = self.segment_of(x)
        if x == seg.r_lo:
            return Classification.LIMIT
        P = self.xd_minimal(x, x)
        generators = [T for T in P.tuples if apply_rule(T) == x]
        if not generators:
            return Classification.NOT_MEMBER
        for T in generators:
            if any(self.classify(c) is Classification.LIMIT for c in T):
                return Classification.LIMIT
        return Classification.SUCCESSOR

    def is_member(self, x: ExactRational) -> bool:
        return self.classify(x) is not Classification.NOT_MEMBER

    # ---- segments ----

    def segment_of(self, x: ExactRational) -> Segment:
        self._check(x)
        if x >= HALF:
            raise DomainError(f"segments exist below 1/2 only, got {x}")
        cached = self._segment_memo.get(x)
        if cached is not None:
            return cached
        t = h_inverse(x)
        if self.classify(t) is not Classification.NOT_MEMBER:
            raise DomainError(f"{x} is the image of a member; it bounds segments")
        p, r = self.bracket(t)
        a_low, a_high = h_map(p), h_map(r)
        if not (a_low < x < a_high):
            raise ConsistencyError(f"{x} escaped its anchor interval [{a_low}, {a_high}]")
        level = math.ceil(ONE / x) - 1
        index = 0
        r_hi = a_high
        while True:
            r_lo = apply_rule((p, r_hi))
            if r_lo <= x:
                seg = Segment(level, a_low, a_high, index, r_lo, r_hi)
                self._segment_memo[x] = seg
                return seg
            index += 1
            r_hi = r_lo

    def governing_floor(self, x: ExactRational) -> ExactRational:
        """Lower bound for components of any rule application reaching x."""
        self._check(x)
        if x >= HALF:
            return self.bracket(x)[1]
        if self.classify(h_inverse(x)) is not Classification.NOT_MEMBER:
            return x
        return self.segment_of(x).r_hi

    def xd_minimal(self, x: ExactRational, d: ExactRational) -> minimal_sets.MinimalSet:
        return minimal_sets.xd_minimal(self, x, d, self.governing_floor(x))

    # ---- predecessor ----

    def predecessor(self, x: ExactRational) -> ExactRational:
        self._check(x)
        cached = self._pred_memo.get(x)
        if cached is not None:
            return cached
        cls = self.classify(x)
        if cls is not Classification.SUCCESSOR:
            kind = {
                Classification.MAXIMAL: "the maximal element",
                Classification.LIMIT: "a limit element",
                Classification.NOT_MEMBER: "not a member",
            }[cls]
            raise DomainError(f"no predecessor: {x} is {kind}")
        if x > HALF:
            n = x.numerator
            result = ExactRational(n - 1, 2 * (n - 1) - 1)
            self._pred_memo[x] = result
            return result
        P = self.xd_minimal(x, x)
        candidates = set()
        for T in P.tuples:
            variants = [T]
            for j in range(len(T)):
                if self.classify(T[j]) is Classification.SUCCESSOR:
                    variants.append(T[:j] + (self.predecessor(T[j]),) + T[j + 1:])
                if len(T) >= 2:
                    variants.append(T[:j] + T[j + 1:])
            for V in variants:
                value = apply_rule(V)
                if value > x:
                    candidates.add(value)
        for value in sorted(candidates):
            if self.classify(value) is not Classification.NOT_MEMBER:
                self._pred_memo[x] = value
                return value
        raise ConsistencyError(f"no member candidate above successor {x}")

    # ---- limit sequences ----

    def limit_sequence(self, x: ExactRational) -> LimitSequence:
        self._check(x)
        if self.classify(x) is not Classification.LIMIT:
            raise DomainError(f"limit sequences exist for limit elements only, got {x}")
        if x == HALF:
            return LimitSequence(lambda k: ExactRational(k + 1, 2 * k + 1))
        t = h_inverse(x)
        t_cls = self.classify(t)
        if t_cls is Classification.LIMIT:
            inner = self.limit_sequence(t)
            return LimitSequence(lambda k: h_map(inner.term(k)))
        if t_cls in (Classification.SUCCESSOR, Classification.MAXIMAL):
            if t_cls is Classification.MAXIMAL:
                raise ConsistencyError("image of the maximum is 1/2, handled above")
            r = self.predecessor(t)
            return self._r_sequence(t, h_map(r))
        seg = self.segment_of(x)
        if x == seg.r_lo:
            p = h_inverse(seg.anchor_low)
            upper = self.limit_sequence(seg.r_hi)
            return self._substituted_sequence((p, p), 1, upper, seg.r_hi)
        P = self.xd_minimal(x, x)
        for T in P.tuples:
            if apply_rule(T) != x:
                continue
            for j, c in enumerate(T):
                if self.classify(c) is Classification.LIMIT:
                    return self._substituted_sequence(T, j, self.limit_sequence(c), seg.r_hi)
        raise ConsistencyError(f"limit element {x} has no generator with a limit component")

    def _r_sequence(self, p: ExactRational, r0: ExactRational) -> LimitSequence:
        cache = [r0]

        def raw(k):
            while len(cache) <= k:
                cache.append(apply_rule((p, cache[-1])))
            return cache[k]

        return LimitSequence(raw)

    def _substituted_sequence(self, template, slot, component_seq, upper_bound):
        """Walk component_seq through one slot of a generator tuple.

        Early terms whose pooled value overshoots the segment's upper end,
        or that do not form a valid application, are skipped.
        """
        fixed = tuple(template)

        def raw(k):
            tup = fixed[:slot] + (component_seq.term(k),) + fixed[slot + 1:]
            value = apply_rule(tup)
            if value > upper_bound or not is_valid_application(tup):
                return None
            return value

        return LimitSequence(raw)

    # ---- bracketing and neighbors ----

    def bracket(self, p: ExactRational):
        """Largest member <= p and smallest member >= p."""
        self._check(p)
        cached = self._bracket_memo.get(p)
        if cached is not None:
            return cached
        result = self._bracket_inner(p)
        self._bracket_memo[p] = result
        return result

    def _bracket_inner(self, p: ExactRational):
        if p == ONE or p == HALF:
            return p, p
        if p > HALF:
            n_star = math.floor(p / (2 * p - 1))
            f2 = ExactRational(n_star, 2 * n_star - 1)
            if f2 == p:
                return p, p
            f1 = ExactRational(n_star + 1, 2 * n_star + 1)
            return f1, f2
        n = max(math.ceil(ONE / p) - 1, 1)
        cur = ExactRational(1, n + 1)
        while True:
            if cur == p:
                return p, p
            cls = self.classify(cur)
            if cls is Classification.SUCCESSOR:
                nxt = self.predecessor(cur)
                if nxt > p:
                    return cur, nxt
                cur = nxt
            elif cls is Classification.LIMIT:
                seq = self.limit_sequence(cur)
                k = 0
                while seq.term(k) > p:
                    k += 1
                cur = seq.term(k)
            else:
                raise ConsistencyError(f"climb reached a non-member waypoint {cur}")

    def next_below(self, u: ExactRational) -> ExactRational:
        """The member immediately below u; total on members except the floor edge."""
        self._check(u)
        cached = self._below_memo.get(u)
        if cached is not None:
            return cached
        cls = self.classify(u)
        if cls is Classification.NOT_MEMBER:
            raise DomainError(f"next_below needs a member, got {u}")
        result = self._next_below_inner(u)
        if not result < u:
            raise ConsistencyError(f"next_below({u}) produced {result}")
        self._below_memo[u] = result
        return result

    def _next_below_inner(self, u: ExactRational) -> ExactRational:
        if u == ONE:
            return ExactRational(2, 3)
        if u > HALF:
            n = u.numerator
            return ExactRational(n + 1, 2 * n + 1)
        t = h_inverse(u)
        if self.classify(t) is not Classification.NOT_MEMBER:
            lo = h_map(self.next_below(t))
        else:
            seg = self.segment_of(u)
            if u == seg.r_lo:
                lo = apply_rule((h_inverse(seg.anchor_low), u))
            else:
                lo = seg.r_lo
        # ascend from below until the gap just under u is certified
        while True:
            mid = (lo + u) / 2
            f1, f2 = self.bracket(mid)
            if f2 == u:
                return f1
            if not (lo < f2 < u):
                raise ConsistencyError(f"neighbor search stalled at {f2} under {u}")
            lo = f2

    # ---- interval enumeration and the decision procedure ----

    def enumerate_interval(self, a: ExactRational, b: ExactRational, max_count: int):
        """Members of [a, b], ascending, at most max_count of them.

        Walks upward from the smallest member >= a while elements have
        immediate neighbors above; if the walk stalls on a limit element
        with budget to spare, the remainder is filled from b downward.
        The result is complete whenever fewer than max_count members exist.
        """
        if not (ZERO < a <= b <= ONE):
            raise InputError(f"need 0 < a <= b <= 1, got [{a}, {b}]")
        if max_count < 0:
            raise InputError(f"max_count must be nonnegative: {max_count}")
        if max_count == 0:
            return []
        result: list[ExactRational] = []
        _, cur = self.bracket(a)
        stalled = False
        while len(result) < max_count:
            if cur > b:
                return result
            result.append(cur)
            cls = self.classify(cur)
            if cls is Classification.MAXIMAL:
                return result
            if cls is Classification.LIMIT:
                stalled = True
                break
            cur = self.predecessor(cur)
        if not stalled or len(result) >= max_count:
            return result
        f1b, _ = self.bracket(b)
        top: list[ExactRational] = []
        cur = f1b
        while cur > result[-1] and len(result) + len(top) < max_count:
            top.append(cur)
            cur = self.next_below(cur)
        return result + list(reversed(top))

    def decide_equivalence(self, p1: ExactRational, p2: ExactRational) -> bool:
        """Whether p1 and p2 sit under the same smallest member.

        Capability changes exactly at members, with intervals closed on
        the left, so two probabilities are interchangeable exactly when
        the smallest member at or above each is the same.
        """
        return self.bracket(p1)[1] == self.bracket(p2)[1]
