#!/usr/bin/env python3
"""Walk the hierarchy interactively from the shell.

Prints a quick tour: the base segment, the first members below 1/2, a
limit sequence, a minimal set, a tree optimum with its labeling, and a
full probabilistic-to-team conversion. Handy as a worked end-to-end
example and as a smoke check that a source checkout is alive.

Usage: python3 scripts/explore_hierarchy.py [--floor N]
"""

import argparse
import sys

from pfinhier import (
    Hierarchy,
    MachineTrace,
    format_labeling,
    format_rational,
    format_tree,
    integer_labeling,
    make_context,
    p_of_tree,
    parse_rational,
    parse_tree,
    prune_dominated,
    rational_labeling,
    simulate_team,
    team_size,
)
from pfinhier.rules import apply_rule


def fmt(x):
    return format_rational(x)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--floor", type=int, default=4)
    args = ap.parse_args()

    h = Hierarchy(floor_level=args.floor)

    print("== base segment: members of [1/2, 1] ==")
    members = h.enumerate_interval(parse_rational("1/2"), parse_rational("1"), 10)
    print("  " + " ".join(fmt(m) for m in members) + " ...")

    print("== descending below 1/2 ==")
    x = parse_rational("1/2")
    row = [x]
    for _ in range(7):
        x = h.next_below(x)
        row.append(x)
    print("  " + " > ".join(fmt(m) for m in row) + " > ...")

    print("== limit sequence converging to 4/9 ==")
    seq = h.limit_sequence(parse_rational("4/9"))
    print("  " + ", ".join(fmt(t) for t in seq.take(6)) + ", ...")

    print("== minimal set for (12/25, 12/25) ==")
    P = h.xd_minimal(parse_rational("12/25"), parse_rational("12/25"))
    for T in prune_dominated(P.tuples):
        gen = apply_rule(T)
        print("  <" + ", ".join(fmt(p) for p in T) + f"> generates {fmt(gen)}")

    print("== tree optimum and labeling ==")
    tree = parse_tree("((()())(()()())())")
    p = p_of_tree(tree)
    print(f"  tree {format_tree(tree)} has p_T = {fmt(p)}")
    m, n, lab = integer_labeling(tree)
    print(f"  ({m}, {n}) labeling:")
    for line in format_labeling(lab).splitlines():
        print("    " + line)

    print("== probabilistic machine to deterministic team ==")
    tree = parse_tree("(()())")
    lab = rational_labeling(tree)
    ctx = make_context(h, lab.p)
    alloc = simulate_team(ctx, MachineTrace(tree=tree, labeling=lab))
    print(f"  x = {fmt(lab.p)}: team of k = {alloc.k}, target {alloc.target}")
    for path in sorted(alloc.successes):
        label = ".".join(str(i) for i in path) or "(root)"
        print(f"    branch {label}: {alloc.successes[path]} successes")
    print(f"  public team size at 12/25: {team_size(h, parse_rational('12/25'))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
