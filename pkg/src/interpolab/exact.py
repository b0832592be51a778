"""Exhaustive small-instance solvers.

Everything here enumerates the full assignment space, so results are exact:
optimum values and counts, frozen nodes, equivalence-class partitions of the
optimal set, suboptimal level structure for the ising model, partition
functions and Gibbs event probabilities.

Size caps
---------
Enumeration refuses to run above configurable caps (never silently
truncates): for two-symbol models n <= 24 when only the optimum value is
needed (bit-parallel scan) and n <= 20 when the optimal set is
materialized; n <= 14 otherwise.  Every operation accepts ``cap=`` to
override the default.

Numerics
--------
Integer-valued models are exact in float64.  Ising values are computed in
rational arithmetic (``beta`` and ``field`` are read as decimal literals),
so level splits and ties are exact; floats are produced only at the API
boundary.  Partition functions accumulate in log space with max shifting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from . import _bitscan
from .errors import SizeCapError
from .hypergraph import Hypergraph
from .models import Instance, NEG_INF

DEFAULT_VALUE_CAP = 24
DEFAULT_STRUCT_CAP = 20
DEFAULT_GENERAL_CAP = 14


def _require_size(n_nodes: int, q: int, structure: bool, cap: int | None) -> None:
    if cap is None:
        cap = (DEFAULT_STRUCT_CAP if structure else DEFAULT_VALUE_CAP) if q == 2 \
            else DEFAULT_GENERAL_CAP
    if n_nodes > cap:
        raise SizeCapError(
            f"enumeration over {q}^{n_nodes} assignments exceeds the cap of "
            f"{q}^{cap}; pass cap= explicitly to raise it")


def exact_decimal(x) -> Fraction:
    """Read a parameter as an exact rational (floats as decimal literals)."""
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


# ---------------------------------------------------------------------------
# Dense enumeration engine
# ---------------------------------------------------------------------------

@lru_cache(maxsize=2)
def digit_matrix(n_nodes: int, q: int) -> np.ndarray:
    """(q^n, n) int8 matrix of node digits per assignment id."""
    ids = np.arange(q ** n_nodes, dtype=np.int64)
    cols = [(ids // q ** i) % q for i in range(n_nodes)]
    return np.stack(cols, axis=1).astype(np.int8)


def edge_pattern_index(digits: np.ndarray, edge0: np.ndarray, q: int) -> np.ndarray:
    """Base-q code of the tuple x_e per assignment (first slot most significant)."""
    idx = np.zeros(digits.shape[0], dtype=np.int64)
    for j in edge0:
        idx = idx * q + digits[:, j]
    return idx


def _cut_and_ones(instance: Instance, digits: np.ndarray):
    ones = (digits == 1).sum(axis=1, dtype=np.int64)
    cut = np.zeros(digits.shape[0], dtype=np.int64)
    for (i, k) in instance.graph.edge_array():
        cut += digits[:, i] != digits[:, k]
    return ones, cut


def hamiltonian_table(instance: Instance) -> np.ndarray:
    """H(x) per assignment id, float64 (-inf only for independent_set)."""
    spec = instance.spec
    digits = digit_matrix(instance.n_nodes, spec.q)
    n, m = instance.n_nodes, instance.graph.n_edges
    kind = spec.kind

    if kind == "independent_set":
        ones = (digits == 1).sum(axis=1, dtype=np.int64)
        bad = np.zeros(digits.shape[0], dtype=bool)
        for (i, k) in instance.graph.edge_array():
            bad |= (digits[:, i] == 1) & (digits[:, k] == 1)
        table = ones.astype(np.float64)
        table[bad] = NEG_INF
        return table
    if kind in ("max_cut", "coloring"):
        _, cut = _cut_and_ones(instance, digits)
        return cut.astype(np.float64)
    if kind == "ising":
        ones, cut = _cut_and_ones(instance, digits)
        return spec.field * (2 * ones - n).astype(np.float64) \
            + spec.beta * (2 * cut - m).astype(np.float64)
    # ksat / nae_ksat
    sat = np.zeros(digits.shape[0], dtype=np.int64)
    edges = instance.graph.edge_array()
    for row, a in zip(edges, instance.potentials):
        hit = np.ones(digits.shape[0], dtype=bool)
        for j, bit in zip(row, a):
            hit &= digits[:, j] == bit
        if kind == "nae_ksat":
            mirror = np.ones(digits.shape[0], dtype=bool)
            for j, bit in zip(row, a):
                mirror &= digits[:, j] == 1 - bit
            hit |= mirror
        sat += ~hit
    return sat.astype(np.float64)


def _ising_exact_levels(instance: Instance):
    """Distinct exact values (descending) and per-assignment level index."""
    spec = instance.spec
    digits = digit_matrix(instance.n_nodes, 2)
    ones, cut = _cut_and_ones(instance, digits)
    a = 2 * ones - instance.n_nodes
    b = 2 * cut - instance.graph.n_edges
    code = (a + instance.n_nodes) * (2 * instance.graph.n_edges + 1) \
        + (b + instance.graph.n_edges)
    uniq, inverse = np.unique(code, return_inverse=True)
    f_field, f_beta = exact_decimal(spec.field), exact_decimal(spec.beta)
    span = 2 * instance.graph.n_edges + 1
    pair_values = []
    for c in uniq.tolist():
        av, bv = divmod(int(c), span)
        pair_values.append(f_field * (av - instance.n_nodes) +
                           f_beta * (bv - instance.graph.n_edges))
    order = {}
    for pid, v in enumerate(pair_values):
        order.setdefault(v, []).append(pid)
    values = sorted(order, reverse=True)
    level_of_pair = np.empty(len(pair_values), dtype=np.int64)
    for lvl, v in enumerate(values):
        for pid in order[v]:
            level_of_pair[pid] = lvl
    return values, level_of_pair[inverse]


# ---------------------------------------------------------------------------
# Optimal-set structure
# ---------------------------------------------------------------------------

def group_columns(opt_digits: np.ndarray, xor_canonical: bool = False):
    """Partition nodes by their value columns over a set of assignments.

    With ``xor_canonical`` two columns match when they agree up to a global
    0/1 flip (the mutual-determination relation); otherwise they must agree
    exactly (the same-value relation).
    """
    mat = opt_digits.T.copy()
    if xor_canonical:
        mat ^= mat[:, :1]
    _, labels = np.unique(mat, axis=0, return_inverse=True)
    by_label: dict[int, list[int]] = {}
    for node, lab in enumerate(labels.ravel().tolist()):
        by_label.setdefault(lab, []).append(node + 1)
    classes = tuple(sorted((tuple(v) for v in by_label.values()), key=lambda c: c[0]))
    constant = (opt_digits == opt_digits[0]).all(axis=0)
    class_frozen = tuple(bool(all(constant[i - 1] for i in cls)) for cls in classes)
    return classes, class_frozen


@dataclass(frozen=True)
class GroundStateSummary:
    """Exact optimum plus the structure of the optimal set.

    ``frozen_set`` follows the per-model convention: for independent_set the
    nodes present in every maximum set (frozen at value 1); for every other
    model the nodes taking the same value in all optima.  ``classes``
    partition the nodes by the model's equivalence relation (same value in
    every optimum; for nae_ksat equality up to a global flip).
    """

    value: float
    optimal_count: int
    frozen_set: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    class_frozen: tuple[bool, ...]
    relation: str
    repeated_node_edges: int

    def to_record(self) -> dict:
        return {
            "format": "ground-state-summary-v1",
            "value": self.value,
            "optimal_count": self.optimal_count,
            "frozen_set": list(self.frozen_set),
            "classes": [list(c) for c in self.classes],
            "class_frozen": list(self.class_frozen),
            "relation": self.relation,
            "repeated_node_edges": self.repeated_node_edges,
        }


def _optimum_mask(instance: Instance):
    """(value as float, boolean mask of optimal assignments)."""
    if instance.spec.kind == "ising":
        values, level_index = _ising_exact_levels(instance)
        return float(values[0]), level_index == 0
    table = hamiltonian_table(instance)
    value = table.max()
    return float(value), table == value


def ground_state(instance: Instance, cap: int | None = None) -> GroundStateSummary:
    """Exact optimum, count of optima, frozen set and equivalence classes."""
    spec = instance.spec
    _require_size(instance.n_nodes, spec.q, structure=True, cap=cap)
    value, mask = _optimum_mask(instance)
    digits = digit_matrix(instance.n_nodes, spec.q)
    opt = digits[mask]
    xor_rel = spec.kind == "nae_ksat"
    classes, class_frozen = group_columns(opt, xor_canonical=xor_rel)
    constant = (opt == opt[0]).all(axis=0)
    if spec.kind == "independent_set":
        frozen = tuple(i + 1 for i in range(instance.n_nodes)
                       if constant[i] and opt[0, i] == 1)
    else:
        frozen = tuple(i + 1 for i in range(instance.n_nodes) if constant[i])
    return GroundStateSummary(
        value=value,
        optimal_count=int(mask.sum()),
        frozen_set=frozen,
        classes=classes,
        class_frozen=class_frozen,
        relation="mutual-determination" if xor_rel else "same-value",
        repeated_node_edges=instance.graph.repeated_node_edges(),
    )


def ground_value(instance: Instance, cap: int | None = None) -> float:
    """Optimum value only; two-symbol models use the bit-parallel scan."""
    spec = instance.spec
    _require_size(instance.n_nodes, spec.q, structure=False, cap=cap)
    if spec.q == 2 and instance.n_nodes <= _bitscan.MAX_NODES:
        return float(_bitscan.solve_instance(instance)["value"])
    return float(hamiltonian_table(instance).max())


def nae_equivalence(instance: Instance, cap: int | None = None):
    """Classes of the mutual-determination relation over the optimal set:
    i ~ k when no two optima agree at i but disagree at k or vice versa."""
    if instance.spec.q != 2:
        raise ValueError("mutual-determination classes need a two-symbol model")
    _require_size(instance.n_nodes, 2, structure=True, cap=cap)
    _, mask = _optimum_mask(instance)
    opt = digit_matrix(instance.n_nodes, 2)[mask]
    classes, _ = group_columns(opt, xor_canonical=True)
    return classes


# ---------------------------------------------------------------------------
# Ising level structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsingLevels:
    """Distinct achieved values H_0 > H_1 > ... kept down to H_0 - 2*beta,
    with the same-value partition over the union of the top m+1 level sets
    for each kept level m.  ``truncated`` records whether deeper values
    exist below the cutoff."""

    levels: tuple[float, ...]
    levels_exact: tuple[Fraction, ...]
    partitions: tuple[tuple[tuple[int, ...], ...], ...]
    cutoff_index: int
    truncated: bool

    def labels(self, level: int, n_nodes: int) -> np.ndarray:
        lab = np.empty(n_nodes, dtype=np.int64)
        for ci, cls in enumerate(self.partitions[level]):
            for i in cls:
                lab[i - 1] = ci
        return lab


def ising_levels(instance: Instance, cap: int | None = None) -> IsingLevels:
    if instance.spec.kind != "ising":
        raise ValueError("level structure is defined for the ising model")
    _require_size(instance.n_nodes, 2, structure=True, cap=cap)
    values, level_index = _ising_exact_levels(instance)
    cutoff = values[0] - 2 * exact_decimal(instance.spec.beta)
    kept = max(m for m in range(len(values)) if values[m] >= cutoff)
    digits = digit_matrix(instance.n_nodes, 2)
    partitions = []
    for m in range(kept + 1):
        cum = digits[level_index <= m]
        classes, _ = group_columns(cum)
        partitions.append(classes)
    return IsingLevels(
        levels=tuple(float(v) for v in values[: kept + 1]),
        levels_exact=tuple(values[: kept + 1]),
        partitions=tuple(partitions),
        cutoff_index=kept,
        truncated=kept < len(values) - 1,
    )


def ising_edge_prediction(levels: IsingLevels, edge, n_nodes: int,
                          beta: Fraction) -> Fraction:
    """Value of H after inserting ``edge``, classified from the level
    structure alone: +beta if the endpoints already disagree in some
    optimum; H_m + beta for the first kept level m at which they can
    disagree; H_0 - beta if they agree through every kept level."""
    i, k = edge
    for m in range(levels.cutoff_index + 1):
        lab = levels.labels(m, n_nodes)
        if lab[i - 1] != lab[k - 1]:
            return levels.levels_exact[m] + beta
    return levels.levels_exact[0] - beta


def edge_addition_value(instance: Instance, edge, potential=None,
                        cap: int | None = None) -> float:
    """Exact H after appending one edge (brute force); the ising result is
    additionally cross-checked against the level-structure classification."""
    spec = instance.spec
    _require_size(instance.n_nodes, spec.q, structure=True, cap=cap)
    edge = tuple(int(i) for i in edge)
    if spec.kind in ("ksat", "nae_ksat"):
        if potential is None:
            raise ValueError("signed models need the new edge's sign tuple")
        new_pots = np.vstack([instance.potentials, np.asarray(potential, dtype=np.uint8)])
    else:
        if potential is not None:
            raise ValueError(f"{spec.kind} edges carry no potential data")
        new_pots = None
    graph = instance.graph
    bigger = Instance(
        graph=Hypergraph(graph.n_nodes, graph.arity, graph.edges + (edge,)),
        spec=spec, potentials=new_pots)

    if spec.kind != "ising":
        return float(hamiltonian_table(bigger).max())

    values, level_index = _ising_exact_levels(bigger)
    brute = values[0]
    levels = ising_levels(instance, cap=cap)
    predicted = ising_edge_prediction(levels, edge, instance.n_nodes,
                                      exact_decimal(spec.beta))
    if predicted != brute:
        raise AssertionError(
            f"ising level classification {predicted} disagrees with brute force {brute}")
    return float(brute)


# ---------------------------------------------------------------------------
# Partition functions and Gibbs events
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GibbsTable:
    """log of the partition function sum_x lambda^H(x) at one fugacity,
    with optional exact event probabilities."""

    fugacity: float
    log_z: float
    event_probs: dict | None = None

    def to_record(self) -> dict:
        rec = {"format": "gibbs-table-v1", "fugacity": self.fugacity,
               "log_z": self.log_z}
        if self.event_probs is not None:
            rec["event_probs"] = dict(sorted(self.event_probs.items()))
        return rec


def log_partition(instance: Instance, fugacity: float,
                  cap: int | None = None) -> GibbsTable:
    """Exact log Z, accumulated in log space (max-shifted), so large and
    small fugacities are equally safe.  Infeasible independent-set
    assignments contribute nothing."""
    if not fugacity > 0:
        raise ValueError(f"fugacity must be positive, got {fugacity}")
    _require_size(instance.n_nodes, instance.spec.q, structure=True, cap=cap)
    table = hamiltonian_table(instance)
    finite = table[np.isfinite(table)]
    return GibbsTable(fugacity=float(fugacity),
                      log_z=float(logsumexp(finite * np.log(fugacity))))


def _event_mask(instance: Instance, event) -> np.ndarray:
    kind, nodes = event
    digits = digit_matrix(instance.n_nodes, instance.spec.q)
    if kind == "all_ones":
        mask = np.ones(digits.shape[0], dtype=bool)
        for i in nodes:
            mask &= digits[:, i - 1] == 1
        return mask
    if kind == "equal":
        i, k = nodes
        return digits[:, i - 1] == digits[:, k - 1]
    raise ValueError(f"unknown event kind {kind!r}")


def gibbs_event_probability(instance: Instance, fugacity: float, event,
                            cap: int | None = None) -> float:
    """mu(event) under mu(x) = lambda^H(x) / Z; events are ('all_ones',
    nodes) -- every listed node at value 1 -- or ('equal', (i, k))."""
    if not fugacity > 0:
        raise ValueError(f"fugacity must be positive, got {fugacity}")
    _require_size(instance.n_nodes, instance.spec.q, structure=True, cap=cap)
    table = hamiltonian_table(instance)
    finite = np.isfinite(table)
    mask = _event_mask(instance, event) & finite
    if not mask.any():
        return 0.0
    w = np.log(fugacity)
    return float(np.exp(logsumexp(table[mask] * w) - logsumexp(table[finite] * w)))


def log_one_minus_series(mu: float, terms: int = 50) -> float:
    """-sum_{k>=1} mu^k / k, split as the first ``terms`` terms plus the
    numerically summed tail; agrees with log(1-mu) for 0 <= mu < 1."""
    if not 0 <= mu < 1:
        raise ValueError(f"series needs 0 <= mu < 1, got {mu}")
    partial = sum(mu ** k / k for k in range(1, terms + 1))
    tail = 0.0
    term = mu ** terms
    k = terms + 1
    while True:
        term *= mu
        add = term / k
        tail += add
        if add < 1e-18 * max(partial + tail, 1e-30):
            break
        k += 1
    return -(partial + tail)
