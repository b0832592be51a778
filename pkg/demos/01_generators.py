"""Tour of the random hypergraph ensembles.

Every generator is a pure function of (parameters, seed): rerun this script
and you get the same graphs, byte for byte.
"""

import numpy as np

from interpolab import (
    disjoint_union,
    dump_graph,
    generate_config_partial,
    generate_er,
    generate_er_interpolated,
    generate_er_simple,
    load_graph,
    project,
)

print("=== directed multigraph ensemble (edges with replacement) ===")
g = generate_er(n_nodes=8, n_edges=10, arity=2, seed=42)
print(dump_graph(g))
print("degrees:", g.degrees(), " repeated-node edges:", g.repeated_node_edges())

print("\n=== simple undirected ensemble (distinct edges, distinct nodes) ===")
s = generate_er_simple(n_nodes=6, n_edges=7, arity=2, seed=7)
print("edges:", s.edges)

print("\n=== configuration model: partial matching on clones ===")
state = generate_config_partial(n_nodes=6, degree_bound=2, arity=3,
                                n_matched=3, seed=3)
print("matched clone triples:", state.matching)
print("isolated clones:", state.isolated_clones())
proj = project(state)
print("projected edges:", proj.edges, " degrees:", proj.degrees())

full = generate_config_partial(6, 2, 3, 4, seed=3)
print("full matching projects to a regular graph:", project(full).degrees())

print("\n=== interpolating ensemble ===")
# the first r edges are whole-range; the rest choose a block per edge
for r in (6, 3, 0):
    g = generate_er_interpolated(n_nodes=8, n_edges=6, n_whole=r, n_first=4,
                                 arity=2, seed=11)
    block1 = sum(all(i <= 4 for i in e) for e in g.edges)
    block2 = sum(all(i > 4 for i in e) for e in g.edges)
    print(f"r={r}: {block1} edges inside block one, {block2} inside block two, "
          f"{6 - block1 - block2} crossing")

print("\n=== disjoint unions shift labels ===")
u = disjoint_union(generate_er(3, 2, 2, seed=1), generate_er(3, 2, 2, seed=2))
print("union edges:", u.edges)

print("\nround-trip check:", load_graph(dump_graph(u)) == u)
