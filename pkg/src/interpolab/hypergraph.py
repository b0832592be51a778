"""Directed K-uniform multihypergraphs and their random ensembles.

Conventions
-----------
Nodes are labelled ``1..n_nodes`` in every public structure and in the
text format; edges are ordered K-tuples and may repeat nodes (the
non-simple directed model).  The simple undirected ensemble is a separate
generator, not a flag, so the two distributions never get conflated.

Text format (``hypergraph-v1``)::

    hypergraph-v1
    N K M
    i1 i2 ... iK        (M lines, 1-based node indices)

The format round-trips bit-exactly through :func:`dump_graph` /
:func:`load_graph`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .rng import make_rng

FORMAT_GRAPH = "hypergraph-v1"


@dataclass(frozen=True)
class Hypergraph:
    """A directed K-uniform multihypergraph on nodes ``1..n_nodes``.

    ``edges`` is an ordered sequence of ordered K-tuples; multiplicity is
    allowed and node repeats inside an edge are allowed.
    """

    n_nodes: int
    arity: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError(f"n_nodes must be >= 1, got {self.n_nodes}")
        if self.arity < 2:
            raise ValueError(f"arity must be >= 2, got {self.arity}")
        for e in self.edges:
            if len(e) != self.arity:
                raise ValueError(f"edge {e} does not have arity {self.arity}")
            for i in e:
                if not 1 <= i <= self.n_nodes:
                    raise ValueError(f"node {i} outside 1..{self.n_nodes} in edge {e}")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, node: int) -> int:
        """Number of edge slots referencing ``node``.  A repeated-node edge
        counts once per occurrence, so configuration-model projections keep
        their clone bookkeeping (a full matching projects to degree exactly
        r everywhere)."""
        return sum(e.count(node) for e in self.edges)

    def degrees(self) -> np.ndarray:
        out = np.zeros(self.n_nodes, dtype=np.int64)
        for e in self.edges:
            for i in e:
                out[i - 1] += 1
        return out

    def edge_array(self) -> np.ndarray:
        """Edges as a 0-based ``(M, K)`` int array for numeric kernels."""
        if not self.edges:
            return np.zeros((0, self.arity), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64) - 1

    def repeated_node_edges(self) -> int:
        """Count of edges whose node tuple contains a repeat (flagged in reports)."""
        return sum(1 for e in self.edges if len(set(e)) < len(e))


def edges_from_array(arr: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """0-based ``(M, K)`` array -> 1-based edge tuples."""
    return tuple(tuple(int(v) + 1 for v in row) for row in np.asarray(arr))


# ---------------------------------------------------------------------------
# Erdos-Renyi style ensembles
# ---------------------------------------------------------------------------

def sample_er_edges(rng: np.random.Generator, n_nodes: int, n_edges: int,
                    arity: int, batch: int | None = None) -> np.ndarray:
    """i.i.d. uniform ordered tuples, 0-based; shape (batch, M, K) or (M, K)."""
    shape = (n_edges, arity) if batch is None else (batch, n_edges, arity)
    return rng.integers(0, n_nodes, size=shape, dtype=np.int64)


def generate_er(n_nodes: int, n_edges: int, arity: int = 2, seed: int = 0) -> Hypergraph:
    """Non-simple directed ensemble: ``n_edges`` tuples drawn i.i.d. uniformly
    from the ``n_nodes**arity`` ordered K-tuples, with replacement."""
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes}")
    if n_edges < 0:
        raise ValueError(f"n_edges must be >= 0, got {n_edges}")
    if arity < 2:
        raise ValueError(f"arity must be >= 2, got {arity}")
    arr = sample_er_edges(make_rng(seed), n_nodes, n_edges, arity)
    return Hypergraph(n_nodes, arity, edges_from_array(arr))


def generate_er_simple(n_nodes: int, n_edges: int, arity: int = 2, seed: int = 0) -> Hypergraph:
    """Simple undirected ensemble: ``n_edges`` distinct K-subsets of distinct
    nodes, uniform without replacement, stored in sorted node order."""
    if n_nodes < 1 or arity < 2:
        raise ValueError("need n_nodes >= 1 and arity >= 2")
    total = math.comb(n_nodes, arity)
    if n_edges > total:
        raise ValueError(
            f"n_edges={n_edges} exceeds the {total} available {arity}-subsets of {n_nodes} nodes")
    rng = make_rng(seed)
    picks = rng.choice(total, size=n_edges, replace=False) if n_edges else np.empty(0, dtype=np.int64)
    combos = list(itertools.combinations(range(1, n_nodes + 1), arity))
    return Hypergraph(n_nodes, arity, tuple(combos[int(p)] for p in sorted(picks.tolist())))


def sample_er_interpolated_edges(rng: np.random.Generator, n_nodes: int, n_edges: int,
                                 n_whole: int, n_first: int, arity: int,
                                 batch: int | None = None) -> np.ndarray:
    """Edge tuples for the interpolating ensemble, 0-based.

    The leading ``n_whole`` edges are uniform on the whole node set; each of
    the remaining edges independently lands inside nodes ``1..n_first`` with
    probability ``n_first/n_nodes`` and inside the complementary block
    otherwise, uniformly within the chosen block.
    """
    squeeze = batch is None
    b = 1 if squeeze else batch
    out = np.empty((b, n_edges, arity), dtype=np.int64)
    if n_whole:
        out[:, :n_whole] = rng.integers(0, n_nodes, size=(b, n_whole, arity))
    rest = n_edges - n_whole
    if rest:
        in_first = rng.random(size=(b, rest)) < (n_first / n_nodes)
        first = rng.integers(0, n_first, size=(b, rest, arity))
        second = rng.integers(n_first, n_nodes, size=(b, rest, arity))
        out[:, n_whole:] = np.where(in_first[..., None], first, second)
    return out[0] if squeeze else out


def generate_er_interpolated(n_nodes: int, n_edges: int, n_whole: int, n_first: int,
                             arity: int = 2, seed: int = 0) -> Hypergraph:
    """One point of the interpolation chain between the whole-set ensemble
    (``n_whole == n_edges``) and a disjoint pair of block ensembles
    (``n_whole == 0``, block sizes ``n_first`` and ``n_nodes - n_first``)."""
    if not 0 <= n_whole <= n_edges:
        raise ValueError(f"n_whole must lie in 0..{n_edges}, got {n_whole}")
    if not 1 <= n_first <= n_nodes - 1:
        raise ValueError(f"n_first must lie in 1..{n_nodes - 1}, got {n_first}")
    arr = sample_er_interpolated_edges(make_rng(seed), n_nodes, n_edges, n_whole, n_first, arity)
    return Hypergraph(n_nodes, arity, edges_from_array(arr))


def disjoint_union(g1: Hypergraph, g2: Hypergraph) -> Hypergraph:
    """Concatenate node blocks and edge lists; g2's labels shift by g1.n_nodes."""
    if g1.arity != g2.arity:
        raise ValueError(f"arity mismatch: {g1.arity} vs {g2.arity}")
    shift = g1.n_nodes
    shifted = tuple(tuple(i + shift for i in e) for e in g2.edges)
    return Hypergraph(g1.n_nodes + g2.n_nodes, g1.arity, g1.edges + shifted)


# ---------------------------------------------------------------------------
# Configuration model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConfigurationState:
    """Partial matching on the clone set of the configuration model.

    Node ``i`` (1-based) owns clones ``(i-1)*degree_bound .. i*degree_bound - 1``
    (0-based clone ids).  ``matching`` is a sequence of pairwise disjoint
    K-tuples of clone ids.
    """

    n_nodes: int
    degree_bound: int
    arity: int
    matching: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for e in self.matching:
            if len(e) != self.arity:
                raise ValueError(f"matching tuple {e} does not have arity {self.arity}")
            for c in e:
                if not 0 <= c < self.n_clones:
                    raise ValueError(f"clone id {c} outside 0..{self.n_clones - 1}")
                if c in seen:
                    raise ValueError(f"clone id {c} matched twice")
                seen.add(c)

    @property
    def n_clones(self) -> int:
        return self.n_nodes * self.degree_bound

    @property
    def n_matched(self) -> int:
        return len(self.matching)

    def isolated_clones(self) -> int:
        return self.n_clones - self.n_matched * self.arity

    def owner(self, clone: int) -> int:
        """1-based node owning a clone id."""
        return clone // self.degree_bound + 1

    def node_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        for e in self.matching:
            for c in e:
                deg[c // self.degree_bound] += 1
        return deg


def generate_config_partial(n_nodes: int, degree_bound: int, arity: int,
                            n_matched: int, seed: int = 0) -> ConfigurationState:
    """Uniform partial matching of ``n_matched`` K-tuples on the clone set.

    Drawn by truncating a uniform permutation of the clones to its first
    ``n_matched * arity`` slots and grouping consecutive runs of K; this is
    distributionally uniform over partial matchings and costs O(n*r).
    """
    if n_nodes < 1 or degree_bound < 1 or arity < 2:
        raise ValueError("need n_nodes >= 1, degree_bound >= 1, arity >= 2")
    n_clones = n_nodes * degree_bound
    if n_clones % arity != 0:
        raise ValueError(
            f"n_nodes*degree_bound = {n_clones} must be divisible by arity {arity}")
    if not 0 <= n_matched <= n_clones // arity:
        raise ValueError(f"n_matched must lie in 0..{n_clones // arity}, got {n_matched}")
    perm = make_rng(seed).permutation(n_clones)[: n_matched * arity]
    matching = tuple(tuple(int(c) for c in perm[j * arity:(j + 1) * arity])
                     for j in range(n_matched))
    return ConfigurationState(n_nodes, degree_bound, arity, matching)


def project(state: ConfigurationState) -> Hypergraph:
    """Replace every clone by its owner node; edge count is preserved and no
    node degree can exceed the clone budget ``degree_bound``."""
    edges = tuple(tuple(state.owner(c) for c in e) for e in state.matching)
    return Hypergraph(state.n_nodes, state.arity, edges)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def dump_graph(graph: Hypergraph) -> str:
    lines = [FORMAT_GRAPH, f"{graph.n_nodes} {graph.arity} {graph.n_edges}"]
    lines.extend(" ".join(str(i) for i in e) for e in graph.edges)
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> Hypergraph:
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_GRAPH:
        raise ValueError(f"expected header {FORMAT_GRAPH!r}")
    n_nodes, arity, n_edges = (int(v) for v in lines[1].split())
    if len(lines) < 2 + n_edges:
        raise ValueError(f"expected {n_edges} edge lines, found {len(lines) - 2}")
    edges = tuple(tuple(int(v) for v in lines[2 + m].split()) for m in range(n_edges))
    return Hypergraph(n_nodes, arity, edges)
