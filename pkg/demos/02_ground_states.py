"""Exact ground states and the structure of the optimal set.

Small instances of all six models are solved by exhaustive enumeration:
optimum value, number of optima, frozen nodes, and the equivalence classes
that drive the one-step interpolation formulas.
"""

import numpy as np

from interpolab import (
    Hypergraph,
    ModelSpec,
    build_instance,
    generate_er,
    ground_state,
    ising_levels,
    nae_equivalence,
)

path = Hypergraph(3, 2, ((1, 2), (2, 3)))

print("=== independent sets on the path 1-2-3 ===")
s = ground_state(build_instance(path, ModelSpec("independent_set")))
print(f"optimum {s.value}, {s.optimal_count} optimum(s), "
      f"always-chosen nodes {s.frozen_set}")

print("\n=== max-cut on a single edge ===")
s = ground_state(build_instance(Hypergraph(2, 2, ((1, 2),)), ModelSpec("max_cut")))
print(f"optimum {s.value}, classes {s.classes} (no frozen node: both cuts tie)")

print("\n=== three-coloring a random graph ===")
g = generate_er(7, 9, 2, seed=5)
s = ground_state(build_instance(g, ModelSpec("coloring", q=3)))
print(f"properly colorable edges: {s.value:.0f} of {g.n_edges}; "
      f"{s.optimal_count} optimal colorings; classes {s.classes}")

print("\n=== random 3-SAT ===")
inst = build_instance(generate_er(8, 12, 3, seed=9), ModelSpec("ksat", arity=3),
                      seed=10)
s = ground_state(inst)
print(f"satisfiable clauses: {s.value:.0f} of 12; frozen variables {s.frozen_set}")

print("\n=== not-all-equal SAT: mutual determination ===")
inst = build_instance(generate_er(6, 7, 3, seed=2), ModelSpec("nae_ksat", arity=3),
                      seed=3)
print("classes (equal up to a global flip):", nae_equivalence(inst))

print("\n=== ising level structure ===")
inst = build_instance(generate_er(6, 6, 2, seed=8),
                      ModelSpec("ising", beta=1.0, field=0.3))
lv = ising_levels(inst)
print(f"levels kept down to H0 - 2*beta: {lv.levels}")
print(f"truncated deeper levels: {lv.truncated}")
for m, part in enumerate(lv.partitions):
    print(f"  cumulative classes at level {m}: {part}")
