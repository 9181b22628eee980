"""Absorbing machinery on small hosts.

Clean a host of weak edges, measure how many witness sets join two vertices,
group vertices into reachability classes and draw a random absorbing family.
"""

import itertools
from fractions import Fraction

from hypertile import absorb
from hypertile.core import Hypergraph3


def main():
    n = 30
    hub = Hypergraph3(n, [t for t in itertools.combinations(range(n), 3) if 0 in t])
    red = absorb.epsilon_reduction(hub, Fraction(1, 5))
    print(f"hub host: {len(red.weak_edges)} weak edges, removed {sorted(red.removed)}, "
          f"guarantees {absorb.reduction_guarantees(hub, red, Fraction(1, 5))}")

    two = Hypergraph3(12, [t for t in itertools.combinations(range(12), 3) if max(t) < 6 or min(t) >= 6])
    inside = absorb.reachability_count(two, 0, 1, (1, 1, 1))
    across = absorb.reachability_count(two, 0, 7, (1, 1, 1))
    print(f"two cliques: {inside.witness_count} witnesses inside a clique, {across.witness_count} across")
    part, _ = absorb.reachability_partition(two, (1, 1, 1), 1)
    print(f"reachability classes: {[sorted(p) for p in part.clusters]}")

    K = Hypergraph3.complete(n)
    fam = absorb.build_absorbing_family(K, (1, 1, 1), 1, seed=7, p=Fraction(1, 200))
    print(f"absorbing family on K_{n}: {fam.sampled} sampled, {fam.after_disjoint} disjoint, "
          f"{len(fam)} kept; members {[sorted(A) for A in fam.sets]}")


if __name__ == "__main__":
    main()
