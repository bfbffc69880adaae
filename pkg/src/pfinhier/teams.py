"""Team simulation of probabilistic learners.

Given a success probability x and a decision-tree trace of a probabilistic
machine achieving it, `simulate_team` produces an integer head-count
allocation for a team of k deterministic members in which at least
p0 * k members succeed on every branch, where p0 is the smallest
hierarchy member at or above x.

The funding analysis lives in `g_function` (single follower mass) and
`g_prime` (best split of a follower mass), both exact over rationals.
"""

from dataclasses import dataclass, field
from math import gcd, lcm

from .errors import ConsistencyError, DomainError, InputError
from .hierarchy import Classification, Hierarchy
from .minimal_sets import MinimalSet, component_pool
from .rationals import ExactRational, HALF, ONE, ZERO
from .rules import contribution
from .trees import (
    Labeling,
    Path,
    Tree,
    format_path,
    iter_nodes,
    parse_labeling,
    parse_tree,
    validate_labeling,
)


@dataclass(frozen=True)
class SimulationContext:
    """Everything the allocator needs about one success level x.

    p0_upper is the smallest member whose h-image exceeds x (the reserve
    row); p0_upper_pred is its predecessor, None above 1/2 where
    p0_upper is the maximal element.  funding lists (cost, value, row)
    triples: spending cost on a child buys value toward its success
    count and lands the child on the given row of P_prime.
    """

    x: ExactRational
    p0: ExactRational
    p0_upper: ExactRational
    p0_upper_pred: ExactRational | None
    P: MinimalSet
    P_prime: tuple[ExactRational, ...]
    funding: tuple[tuple[ExactRational, ExactRational, ExactRational], ...]
    hier: Hierarchy = field(compare=False, repr=False)
    _gp_memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def base(self) -> bool:
        return self.p0 > HALF


def _funding_items(hier, x, p0, P_prime, p0_upper_pred):
    # Row q is reachable while the re-normalized target stays below the
    # next pool element; the cheapest way in is at the member just under
    # that ceiling.  Above the top row the ceiling is p0_upper_pred
    # (the maximal element when there is none).
    items = []
    for i, q in enumerate(P_prime):
        if i + 1 < len(P_prime):
            ceiling = P_prime[i + 1]
        else:
            ceiling = p0_upper_pred
        entry = hier.next_below(ceiling) if ceiling is not None else ONE
        cost = contribution(x, entry)
        value = contribution(p0, q)
        if cost <= 0 or value <= 0:
            raise ConsistencyError(
                f"degenerate funding item for x={x}: row {q} cost {cost} value {value}"
            )
        items.append((cost, value, q))
    return tuple(items)


def make_context(hier: Hierarchy, x: ExactRational) -> SimulationContext:
    """Assemble the simulation context for success level x.

    x need not be a hierarchy member; p0 rounds it up to one."""
    cached = hier.ctx_memo.get(x)
    if cached is not None:
        return cached
    _, p0 = hier.bracket(x)
    floor = hier.governing_floor(x)
    P = hier.xd_minimal(x, x)
    P_prime = component_pool(P)
    p0_upper = P.p0_prime
    if p0_upper == ONE:
        p0_upper_pred = None
    else:
        if hier.classify(p0_upper) is not Classification.SUCCESSOR:
            raise ConsistencyError(
                f"reserve row {p0_upper} for x={x} is not a successor"
            )
        p0_upper_pred = hier.predecessor(p0_upper)
        # Reserve teams must clear the global target on their own.
        if p0_upper_pred * (ONE - p0) < p0:
            raise ConsistencyError(
                f"reserve success bound fails for x={x}: "
                f"{p0_upper_pred} * (1 - {p0}) < {p0}"
            )
    funding = _funding_items(hier, x, p0, P_prime, p0_upper_pred)
    ctx = SimulationContext(
        x=x,
        p0=p0,
        p0_upper=p0_upper,
        p0_upper_pred=p0_upper_pred,
        P=P,
        P_prime=P_prime,
        funding=funding,
        hier=hier,
    )
    hier.ctx_memo[x] = ctx
    return ctx


def _g_row(ctx: SimulationContext, r: ExactRational):
    """Return (g(r), row) where row is the P_prime element funded, or
    (0, None) when r funds nothing."""
    x = ctx.x
    tau = x / (ONE - x + r)
    if tau > ONE:
        return ZERO, None
    y = ctx.hier.bracket(tau)[1]
    if ctx.p0_upper_pred is not None and y > ctx.p0_upper_pred:
        raise ConsistencyError(f"funded target {y} escaped the reserve row for x={x}")
    if y == ctx.p0_upper_pred:
        return ZERO, None
    row = None
    for q in ctx.P_prime:
        if q <= y:
            row = q
        else:
            break
    if row is None:
        return ZERO, None
    return contribution(ctx.p0, row), row


def g_function(ctx: SimulationContext, r: ExactRational) -> ExactRational:
    """Success mass a follower crowd of size r*k contributes when kept whole."""
    if r < 0 or r > ctx.x:
        raise InputError(f"follower mass {r} outside [0, {ctx.x}]")
    return _g_row(ctx, r)[0]


def g_prime(ctx: SimulationContext, r: ExactRational) -> ExactRational:
    """Best total success mass over all finite splits of a follower mass r.

    Equals the optimum of an unbounded knapsack over the funding items:
    splitting r into parts and running g on each part can do no better
    than buying, for each part, the row it lands on at that row's entry
    cost.  Conversely every multiset of items is realized by an actual
    split.  Solved by memoized branch and bound; exact, no rounding.
    """
    if r < 0 or r > ctx.x:
        raise InputError(f"follower mass {r} outside [0, {ctx.x}]")
    if r == 0:
        return ZERO
    items = sorted(ctx.funding, key=lambda it: it[1] / it[0], reverse=True)
    memo = ctx._gp_memo

    def best(i: int, budget: ExactRational) -> ExactRational:
        while i < len(items) and items[i][0] > budget:
            i += 1
        if i == len(items):
            return ZERO
        key = (i, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        cost, value, _ = items[i]
        take = value + best(i, budget - cost)
        skip = best(i + 1, budget)
        out = take if take > skip else skip
        memo[key] = out
        return out

    out = best(0, r)
    if out > ctx.p0:
        raise ConsistencyError(f"funding total {out} exceeds target {ctx.p0} at x={ctx.x}")
    return out


# ---- team sizes ----

def _modulus(a: ExactRational, m: int) -> int:
    # Least M such that a*k is a multiple of m whenever M divides k.
    target = a.denominator * m
    return target // gcd(a.numerator, target)


def team_size(hier: Hierarchy, p: ExactRational) -> int:
    """Size of the smallest uniformly sufficient team for member p."""
    if hier.classify(p) is Classification.NOT_MEMBER:
        raise DomainError(f"team size is defined for hierarchy members only: {p}")
    cached = hier.team_memo.get(p)
    if cached is not None:
        return cached
    if p >= HALF:
        # n/(2n-1) needs 2n-1 members; covers 1 -> 1 and 1/2 -> 2.
        k = p.denominator
    else:
        ctx = make_context(hier, p)
        k = 1
        for _, value, _ in ctx.funding:
            k = lcm(k, value.denominator)
        for q in ctx.P_prime:
            if q == p:
                continue
            k = lcm(k, _modulus(ctx.p0 / q, team_size(hier, q)))
        k = lcm(k, _modulus(ONE - ctx.p0, team_size(hier, ctx.p0_upper_pred)))
    hier.team_memo[p] = k
    return k


def _allocation_team_size(ctx: SimulationContext) -> int:
    """Team size the allocator actually uses for ctx.

    Differs from team_size at the base constants: the allocator funds
    sub-teams through the g machinery even above 1/2, so its k must
    absorb every funding denominator and sub-team modulus there too.
    """
    hier = ctx.hier
    cached = hier.alloc_memo.get(ctx.x)
    if cached is not None:
        return cached
    if ctx.x == ONE:
        k = 1
    else:
        k = ctx.p0.denominator
        for _, value, _ in ctx.funding:
            k = lcm(k, value.denominator)
        for q in ctx.P_prime:
            if q == ctx.x:
                continue
            sub = _allocation_team_size(make_context(hier, q))
            k = lcm(k, _modulus(ctx.p0 / q, sub))
        if ctx.p0_upper_pred is not None:
            sub = _allocation_team_size(make_context(hier, ctx.p0_upper_pred))
            k = lcm(k, _modulus(ONE - ctx.p0, sub))
    hier.alloc_memo[ctx.x] = k
    return k


# ---- the allocator ----

@dataclass(frozen=True)
class MachineTrace:
    tree: Tree
    labeling: Labeling


@dataclass(frozen=True)
class TeamAllocation:
    k: int
    target: int
    assignment: Labeling
    successes: dict[Path, int]


def parse_trace(text: str) -> MachineTrace:
    """Trace file: first nonblank line is the tree, the rest a labeling."""
    lines = text.splitlines()
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i == len(lines):
        raise InputError("empty trace")
    tree = parse_tree(lines[i])
    rest = "\n".join(lines[i + 1:])
    if not rest.strip():
        raise InputError("trace has no labeling")
    return MachineTrace(tree=tree, labeling=parse_labeling(rest))


def format_trace(trace: MachineTrace) -> str:
    from .trees import format_labeling, format_tree

    return format_tree(trace.tree) + "\n" + format_labeling(trace.labeling)


def _as_count(v: ExactRational, what: str) -> int:
    if v.denominator != 1:
        raise ConsistencyError(f"{what} is not an integer: {v}")
    return v.numerator


def simulate_team(ctx: SimulationContext, trace: MachineTrace) -> TeamAllocation:
    """Allocate an integer team over the trace of a machine with success ctx.x.

    The trace labeling must be an exact (x, 1)-labeling with every node
    carrying mass x (the canonical labelings from rational_labeling
    qualify).  Returns the team size k, the per-node head counts as a
    (p0*k, k)-labeling, and the surviving count on each branch, each at
    least p0*k.  The returned assignment is re-validated; failure there
    is a bug, not bad input.
    """
    tree, lab = trace.tree, trace.labeling
    if lab.p != ctx.x or lab.q != ONE:
        raise InputError(
            f"trace must be an ({ctx.x}, 1)-labeling, got ({lab.p}, {lab.q})"
        )
    ok, msg = validate_labeling(tree, lab)
    if not ok:
        raise InputError(f"invalid trace labeling: {msg}")
    for path, _ in iter_nodes(tree):
        if lab.nu1[path] + lab.nu2[path] != ctx.x:
            raise InputError(
                f"trace is not tight at {format_path(path) or 'root'}: "
                "every node must carry mass exactly x"
            )

    k = _allocation_team_size(ctx)
    target = _as_count(ctx.p0 * k, "success target")
    nu1: dict[Path, int] = {}
    nu2: dict[Path, int] = {(): 0}
    successes: dict[Path, int] = {}

    def walk(c: SimulationContext, kc: int, node: Tree, path: Path, joiners: int):
        scale = c.x / lab.p
        m = _as_count(c.p0 * kc, "sub-team target")
        if m < target:
            raise ConsistencyError(f"sub-team target {m} fell below {target}")
        live = m - joiners
        if live < 0:
            raise ConsistencyError(f"negative conjecture count at {format_path(path)}")
        nu1[path] = live
        if not node:
            successes[path] = live + nu2[path]
            return
        for i, child in enumerate(node):
            cpath = path + (i,)
            r = lab.nu2[cpath] * scale
            if r == c.x:
                # Chain step: the whole sub-team follows its own conjecture.
                nu2[cpath] = m
                walk(c, kc, child, cpath, m)
                continue
            followers = _as_count(g_prime(c, r) * kc, "follower count")
            nu2[cpath] = followers
            g, row = _g_row(c, r)
            if g > 0:
                sub_join = _as_count(g * kc, "joiner count")
                if sub_join > followers:
                    raise ConsistencyError("single-row funding beat the optimum")
                ki = _as_count(c.p0 / row * kc, "funded sub-team size")
                sub = make_context(c.hier, row)
            else:
                sub_join = 0
                ki = _as_count((ONE - c.p0) * kc, "reserve sub-team size")
                if c.p0_upper_pred is None:
                    raise ConsistencyError("base context produced an unfunded branch")
                sub = make_context(c.hier, c.p0_upper_pred)
            if ki % _allocation_team_size(sub):
                raise ConsistencyError(
                    f"sub-team size {ki} not a multiple of the row requirement"
                )
            walk(sub, ki, child, cpath, sub_join)

    walk(ctx, k, tree, (), 0)

    assignment = Labeling(
        p=ExactRational(target),
        q=ExactRational(k),
        nu1={p: ExactRational(v) for p, v in nu1.items()},
        nu2={p: ExactRational(v) for p, v in nu2.items()},
    )
    ok, msg = validate_labeling(tree, assignment)
    if not ok:
        raise ConsistencyError(f"allocation failed validation: {msg}")
    for leaf, s in successes.items():
        if s < target:
            raise ConsistencyError(
                f"branch {format_path(leaf)} finishes with {s} < {target} successes"
            )
    return TeamAllocation(k=k, target=target, assignment=assignment, successes=successes)
