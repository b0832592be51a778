"""The six combinatorial models: potentials, Hamiltonians, random sign tuples.

Each model assigns a value ``H(x) = sum_i H_i(x_i) + sum_e H_e(x_e)`` to an
assignment ``x`` of symbols ``0..q-1`` to the nodes of a hypergraph:

``independent_set``
    q=2, K=2.  Node reward 1 for value 1; an edge with both endpoints at 1
    forces ``-inf``.  Finite values equal the size of the chosen set.
``max_cut``
    q=2, K=2.  One point per bichromatic edge.
``ising``
    q=2, K=2, anti-ferromagnetic.  Node term ``+field`` for 1, ``-field``
    for 0; edge term ``+beta`` when endpoints differ, ``-beta`` when equal.
``coloring``
    q>=2, K=2.  One point per properly colored edge.
``ksat``
    q=2, K>=2.  Each clause carries a random sign tuple ``a``; the clause
    scores 0 exactly when ``x_e == a`` and 1 otherwise (so ``a`` is the one
    forbidden pattern -- sign conventions vary in the literature, this
    package always uses this one).
``nae_ksat``
    As ksat but both ``a`` and its bitwise complement are forbidden.

Edges are ordered tuples and may repeat nodes; the potentials are evaluated
literally on the induced tuple (e.g. a repeated-node max-cut edge can never
be bichromatic).  Such edges are counted and flagged in reports.

``-inf`` is an exact distinguished value (IEEE infinity), never a large
negative sentinel, and arises only for independent sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import FORMAT_GRAPH, Hypergraph, dump_graph, load_graph
from .rng import make_rng

KINDS = ("independent_set", "max_cut", "ising", "coloring", "ksat", "nae_ksat")
PAIR_KINDS = ("independent_set", "max_cut", "ising", "coloring")
SIGNED_KINDS = ("ksat", "nae_ksat")
SAT_KINDS = ("coloring", "ksat", "nae_ksat")

NEG_INF = float("-inf")

FORMAT_INSTANCE = "instance-v1"


@dataclass(frozen=True)
class ModelSpec:
    """Which model, its alphabet size, arity and (for ising) couplings."""

    kind: str
    q: int = 2
    arity: int = 2
    beta: float = 1.0
    field: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; choose from {KINDS}")
        if self.kind == "coloring":
            if self.q < 2:
                raise ValueError(f"coloring needs q >= 2, got {self.q}")
        elif self.q != 2:
            raise ValueError(f"{self.kind} is a two-symbol model, got q={self.q}")
        if self.kind in PAIR_KINDS:
            if self.arity != 2:
                raise ValueError(f"{self.kind} needs arity 2, got {self.arity}")
        elif self.arity < 2:
            raise ValueError(f"{self.kind} needs arity >= 2, got {self.arity}")
        if self.kind == "ising" and not self.beta > 0:
            raise ValueError(f"ising needs beta > 0, got {self.beta}")

    @property
    def lipschitz(self) -> float:
        """Largest change of H induced by a single edge edit."""
        return self.beta if self.kind == "ising" else 1.0


@dataclass(eq=False)
class Instance:
    """A hypergraph, a model, and (for ksat/nae_ksat) per-edge sign tuples."""

    graph: Hypergraph
    spec: ModelSpec
    potentials: np.ndarray | None = None  # (M, K) uint8, index-aligned with edges

    def __post_init__(self):
        if self.graph.arity != self.spec.arity:
            raise ValueError(
                f"graph arity {self.graph.arity} != model arity {self.spec.arity}")
        if self.spec.kind in SIGNED_KINDS:
            if self.potentials is None:
                raise ValueError(f"{self.spec.kind} instance needs sign tuples")
            self.potentials = np.asarray(self.potentials, dtype=np.uint8)
            if self.potentials.shape != (self.graph.n_edges, self.graph.arity):
                raise ValueError(
                    f"sign tuples must have shape {(self.graph.n_edges, self.graph.arity)}, "
                    f"got {self.potentials.shape}")
        elif self.potentials is not None:
            raise ValueError(f"{self.spec.kind} carries no per-edge potential data")

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes


def sample_sign_tuples(rng: np.random.Generator, n_edges: int, arity: int,
                       batch: int | None = None) -> np.ndarray:
    shape = (n_edges, arity) if batch is None else (batch, n_edges, arity)
    return rng.integers(0, 2, size=shape, dtype=np.uint8)


def build_instance(graph: Hypergraph, spec: ModelSpec, seed: int = 0) -> Instance:
    """Attach model data to a graph; for ksat/nae_ksat the sign tuples are
    sampled i.i.d. uniform on {0,1}^K from the seed."""
    if spec.kind in SIGNED_KINDS:
        signs = sample_sign_tuples(make_rng(seed), graph.n_edges, graph.arity)
        return Instance(graph, spec, signs)
    return Instance(graph, spec)


# ---------------------------------------------------------------------------
# Hamiltonian evaluation
# ---------------------------------------------------------------------------

def evaluate(instance: Instance, x) -> float:
    """H(x) for a single assignment; ``-inf`` only for independent sets."""
    spec = instance.spec
    vals = np.asarray(x, dtype=np.int64)
    if vals.shape != (instance.n_nodes,):
        raise ValueError(f"assignment must have length {instance.n_nodes}")
    if vals.min(initial=0) < 0 or vals.max(initial=0) >= spec.q:
        raise ValueError(f"assignment symbols must lie in 0..{spec.q - 1}")
    kind = spec.kind
    edges = instance.graph.edges

    if kind == "independent_set":
        for (i, k) in edges:
            if vals[i - 1] == 1 and vals[k - 1] == 1:
                return NEG_INF
        return float(np.count_nonzero(vals == 1))
    if kind == "max_cut" or kind == "coloring":
        return float(sum(1 for (i, k) in edges if vals[i - 1] != vals[k - 1]))
    if kind == "ising":
        node = spec.field * (2 * int(np.count_nonzero(vals == 1)) - instance.n_nodes)
        agree = sum(1 for (i, k) in edges if vals[i - 1] == vals[k - 1])
        return node + spec.beta * (len(edges) - 2 * agree)
    # ksat / nae_ksat
    total = 0
    signs = instance.potentials
    for m, e in enumerate(edges):
        pattern = tuple(int(vals[i - 1]) for i in e)
        forbidden = tuple(int(b) for b in signs[m])
        if pattern == forbidden:
            continue
        if kind == "nae_ksat" and pattern == tuple(1 - b for b in forbidden):
            continue
        total += 1
    return float(total)


# ---------------------------------------------------------------------------
# One-edge-edit bound |H(G1) - H(G2)| <= L * |E1 symdiff E2|
# ---------------------------------------------------------------------------

def hamiltonian_bound_check(g1: Hypergraph, g2: Hypergraph, spec: ModelSpec,
                            seed: int = 0):
    """Exact check that editing edges moves the optimum by at most the
    Lipschitz constant per edit.

    Both graphs live on the same node set and share potential data on common
    edges (sign tuples are sampled once for the union edge multiset).
    Returns a :class:`~interpolab.reports.CheckReport`; the margin is
    ``L*|E1 symdiff E2| - |H(G1) - H(G2)|`` and must be >= 0.
    """
    from . import exact
    from .reports import CheckReport

    if g1.n_nodes != g2.n_nodes or g1.arity != g2.arity:
        raise ValueError("graphs must share the node set and arity")
    if g1.arity != spec.arity:
        raise ValueError("graph arity does not match the model")

    union_edges: list[tuple[int, ...]] = list(g1.edges)
    counts1: dict[tuple[int, ...], int] = {}
    for e in g1.edges:
        counts1[e] = counts1.get(e, 0) + 1
    spare = dict(counts1)
    extra2: list[tuple[int, ...]] = []
    for e in g2.edges:
        if spare.get(e, 0) > 0:
            spare[e] -= 1
        else:
            extra2.append(e)
    union_edges.extend(extra2)

    union = Hypergraph(g1.n_nodes, g1.arity, tuple(union_edges))
    pool = build_instance(union, spec, seed=seed)

    def sub_instance(graph: Hypergraph) -> Instance:
        if spec.kind not in SIGNED_KINDS:
            return Instance(graph, spec)
        remaining: dict[tuple[int, ...], list[int]] = {}
        for idx, e in enumerate(union_edges):
            remaining.setdefault(e, []).append(idx)
        rows = [remaining[e].pop(0) for e in graph.edges]
        return Instance(graph, spec, pool.potentials[rows])

    h1 = exact.ground_value(sub_instance(g1))
    h2 = exact.ground_value(sub_instance(g2))

    counts2: dict[tuple[int, ...], int] = {}
    for e in g2.edges:
        counts2[e] = counts2.get(e, 0) + 1
    symdiff = sum(abs(counts1.get(e, 0) - counts2.get(e, 0))
                  for e in set(counts1) | set(counts2))

    bound = spec.lipschitz * symdiff
    gap = abs(h1 - h2)
    return CheckReport.build(
        name="hamiltonian-edit-bound",
        params={"n_nodes": g1.n_nodes, "kind": spec.kind, "symdiff": symdiff},
        seed=seed,
        estimates={"H(G1)": (h1, 0.0, 1), "H(G2)": (h2, 0.0, 1)},
        margins={"lipschitz-bound": (bound - gap, 1e-12, "exact")},
        flags={"repeated_node_edges": union.repeated_node_edges()},
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def dump_instance(instance: Instance) -> str:
    spec = instance.spec
    head = (f"model {spec.kind} q={spec.q} K={spec.arity} "
            f"beta={spec.beta!r} B={spec.field!r}")
    body = dump_graph(instance.graph)
    lines = [FORMAT_INSTANCE, head, body.rstrip("\n")]
    if instance.potentials is not None:
        lines.extend(" ".join(str(int(b)) for b in row) for row in instance.potentials)
    return "\n".join(lines) + "\n"


def load_instance(text: str) -> Instance:
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_INSTANCE:
        raise ValueError(f"expected header {FORMAT_INSTANCE!r}")
    tokens = lines[1].split()
    if tokens[0] != "model":
        raise ValueError("missing model header line")
    kv = dict(t.split("=", 1) for t in tokens[2:])
    spec = ModelSpec(kind=tokens[1], q=int(kv["q"]), arity=int(kv["K"]),
                     beta=float(kv["beta"]), field=float(kv["B"]))
    if lines[2] != FORMAT_GRAPH:
        raise ValueError(f"expected graph header {FORMAT_GRAPH!r}")
    n_nodes, arity, n_edges = (int(v) for v in lines[3].split())
    graph_text = "\n".join(lines[2:4 + n_edges]) + "\n"
    graph = load_graph(graph_text)
    assert (graph.n_nodes, graph.arity) == (n_nodes, arity)
    if spec.kind in SIGNED_KINDS:
        rows = lines[4 + n_edges: 4 + 2 * n_edges]
        signs = np.array([[int(v) for v in row.split()] for row in rows],
                         dtype=np.uint8).reshape(n_edges, arity)
        return Instance(graph, spec, signs)
    return Instance(graph, spec)
