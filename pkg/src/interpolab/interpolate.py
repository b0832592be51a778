"""Interpolation chains and their one-step expectation identities.

Two constructions are implemented.

*Block chain.*  ``G(n, M, r)`` draws its first ``r`` edges uniformly on the
whole node set and each remaining edge inside block ``1..n_first`` with
probability ``n_first/n`` (else the complementary block).  Stepping ``r``
down by one replaces a whole-set edge by a block edge; conditional on the
intermediate graph the expected optimum (and log partition function, and
satisfiability probability) can only decrease, which is the engine behind
the superadditivity checks.  :func:`er_onestep_exact` verifies the step
inequality *conditionally*: it enumerates every candidate edge (and, for
signed models, every sign tuple) exactly, and compares against the
closed-form prediction from the frozen-set / equivalence-class structure of
the conditioned graph.  Ground-state and satisfiability modes run in exact
rational arithmetic, so the asserted margins are not at the mercy of
rounding.

*Regular chain.*  Starting from a partial matching of the configuration
model, cross edges between the two node blocks are deleted phase by phase
(a phase handles the cross edges with ``k1`` clones on the left and
``k2 = K - k1`` on the right) and replaced by within-block edges on
uniformly chosen isolated clones.  :func:`reg_chain_run` records the full
trace -- isolated-clone counts, edits, the failure event -- and
:func:`reg_onestep_exact` verifies the one-step inequality with
clone-weighted edge selection, where candidate node tuples are weighted by
falling-factorial products of per-node isolated-clone counts.  The
comparison carries an explicitly computed correction term: the exact
selection probabilities differ from the ratio-power main terms (which obey
Young's inequality) by without-replacement corrections of order
``1/Z_j``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from . import _mc, exact
from .hypergraph import (
    ConfigurationState,
    Hypergraph,
    edges_from_array,
    project,
    sample_er_edges,
    sample_er_interpolated_edges,
)
from .models import Instance, ModelSpec, SAT_KINDS, SIGNED_KINDS, sample_sign_tuples
from .reports import EXACT_SLACK, CheckReport
from .rng import make_rng, rng_from
from .errors import SizeCapError

MODES = ("ground_state", "log_partition", "sat_prob")


# ---------------------------------------------------------------------------
# Exact per-candidate-edge evaluation
# ---------------------------------------------------------------------------

class _TupleEvaluator:
    """Exact expected objective after inserting one candidate node tuple.

    Ground-state and satisfiability modes return Fractions (the potential
    average for signed models has denominator 2^K); the log-partition mode
    returns floats via bucketed log-sum-exp.
    """

    def __init__(self, instance: Instance, mode: str, fugacity: float | None):
        self.instance = instance
        self.spec = instance.spec
        self.mode = mode
        self.fugacity = fugacity
        self.q = instance.spec.q
        self.arity = instance.spec.arity
        self.digits = exact.digit_matrix(instance.n_nodes, self.q)
        self.n_patterns = self.q ** self.arity
        if self.spec.kind == "ising" and mode != "log_partition":
            values, level_index = exact._ising_exact_levels(instance)
            self.ising_values = values
            self.level_index = level_index
            self.beta = exact.exact_decimal(self.spec.beta)
        else:
            self.table = exact.hamiltonian_table(instance)
            if mode == "log_partition":
                self.finite = np.isfinite(self.table)
                self.logw = np.full_like(self.table, exact.NEG_INF)
                self.logw[self.finite] = self.table[self.finite] * np.log(fugacity)
        if self.spec.kind in SIGNED_KINDS:
            self.pot_vectors = self._signed_pot_vectors()
        else:
            self.pot_vectors = None

    def _signed_pot_vectors(self):
        k, kind = self.arity, self.spec.kind
        vecs = []
        for a in range(1 << k):
            pot = np.ones(1 << k)
            pot[a] = 0.0
            if kind == "nae_ksat":
                pot[a ^ ((1 << k) - 1)] = 0.0
            vecs.append(pot)
        return vecs

    def _pattern_index(self, tuple0) -> np.ndarray:
        idx = np.zeros(self.digits.shape[0], dtype=np.int64)
        for j in tuple0:
            idx = idx * self.q + self.digits[:, j]
        return idx

    def _det_pot_vector(self) -> np.ndarray:
        """Potential per inserted-edge pattern for the deterministic kinds."""
        kind, q, k = self.spec.kind, self.q, self.arity
        pot = np.zeros(self.n_patterns)
        for v in range(self.n_patterns):
            syms = [(v // q ** (k - 1 - j)) % q for j in range(k)]
            if kind == "independent_set":
                pot[v] = exact.NEG_INF if all(s == 1 for s in syms) else 0.0
            elif kind in ("max_cut", "coloring"):
                pot[v] = 0.0 if len(set(syms)) == 1 else 1.0
            elif kind == "ising":
                pot[v] = self.spec.beta if len(set(syms)) > 1 else -self.spec.beta
        return pot

    # -- ground-state / satisfiability modes (exact) ------------------------

    def value(self, tuple0) -> Fraction:
        """E over the inserted edge's potential of H(G0 + tuple)."""
        if self.spec.kind == "ising":
            return self._ising_value(tuple0)
        idx = self._pattern_index(tuple0)
        buckets = np.full(self.n_patterns, exact.NEG_INF)
        np.maximum.at(buckets, idx, self.table)
        if self.pot_vectors is None:
            best = (buckets + self._det_pot_vector()).max()
            return Fraction(int(best))
        total = sum(int((buckets + pot).max()) for pot in self.pot_vectors)
        return Fraction(total, len(self.pot_vectors))

    def _ising_value(self, tuple0) -> Fraction:
        i, k = tuple0
        eq = self.digits[:, i] == self.digits[:, k]
        best = None
        if eq.any():
            v = self.ising_values[self.level_index[eq].min()] - self.beta
            best = v
        if not eq.all():
            v = self.ising_values[self.level_index[~eq].min()] + self.beta
            best = v if best is None or v > best else best
        return best

    def stay_sat(self, tuple0) -> Fraction:
        """P over the potential that the instance stays fully satisfiable."""
        target = self.instance.graph.n_edges + 1
        idx = self._pattern_index(tuple0)
        buckets = np.full(self.n_patterns, exact.NEG_INF)
        np.maximum.at(buckets, idx, self.table)
        if self.pot_vectors is None:
            return Fraction(int((buckets + self._det_pot_vector()).max() == target))
        hits = sum(int((buckets + pot).max() == target) for pot in self.pot_vectors)
        return Fraction(hits, len(self.pot_vectors))

    # -- log-partition mode (float) -----------------------------------------

    def log_z(self, tuple0) -> float:
        """E over the potential of log Z(G0 + tuple)."""
        lw = np.log(self.fugacity)
        idx = self._pattern_index(tuple0)
        sums = np.full(self.n_patterns, exact.NEG_INF)
        for v in range(self.n_patterns):
            sel = (idx == v) & self.finite
            if sel.any():
                sums[v] = logsumexp(self.logw[sel])
        if self.pot_vectors is None:
            pot = self._det_pot_vector()
            terms = np.full_like(sums, exact.NEG_INF)
            ok = np.isfinite(pot)  # feasible inserted-edge patterns only
            terms[ok] = sums[ok] + pot[ok] * lw
            return float(logsumexp(terms))
        acc = 0.0
        for pot in self.pot_vectors:
            acc += float(logsumexp(sums + pot * lw))
        return acc / len(self.pot_vectors)

    def pattern_mass(self, tuple0, log_z0: float) -> np.ndarray:
        """Gibbs probability of each inserted-edge pattern under G0."""
        idx = self._pattern_index(tuple0)
        sums = np.full(self.n_patterns, exact.NEG_INF)
        for v in range(self.n_patterns):
            sel = (idx == v) & self.finite
            if sel.any():
                sums[v] = logsumexp(self.logw[sel])
        return np.exp(sums - log_z0)


# ---------------------------------------------------------------------------
# Closed-form predictions from the optimal-set structure
# ---------------------------------------------------------------------------

def _class_weights(classes, weights, n_first):
    """Per-class weight sums (total, block-one, block-two) as Fractions."""
    out = []
    for cls in classes:
        w1 = sum(int(weights[i - 1]) for i in cls if i <= n_first)
        w2 = sum(int(weights[i - 1]) for i in cls if i > n_first)
        out.append((Fraction(w1 + w2), Fraction(w1), Fraction(w2)))
    return out


def _structure_classes(instance: Instance, summary, mode: str):
    """The class list whose weight powers enter the one-step formula.

    independent_set: the single frozen-at-one set; ksat: the frozen set;
    max_cut/coloring/nae_ksat: all equivalence classes.
    """
    kind = instance.spec.kind
    if kind in ("independent_set", "ksat"):
        return [summary.frozen_set] if summary.frozen_set else []
    return list(summary.classes)


def _er_formula_delta(instance: Instance, n_first: int, mode: str,
                      summary=None, levels=None):
    """(lhs, rhs) closed-form deltas for the block chain, exact Fractions.

    Ground-state mode: E[H(G0+e)] - H(G0).  Satisfiability mode: P(still
    satisfiable).  The lhs inserts uniformly on the whole node set, the rhs
    inside block one with probability n1/n else block two.
    """
    spec = instance.spec
    n = instance.n_nodes
    n1 = n_first
    n2 = n - n_first
    k = spec.arity
    w_n, w_n1, w_n2 = Fraction(n), Fraction(n1), Fraction(n2)

    if spec.kind == "ising":
        beta = exact.exact_decimal(spec.beta)
        lhs = beta
        rhs = beta
        vals = levels.levels_exact
        m_top = levels.cutoff_index
        for m in range(m_top + 1):
            coeff = (vals[m + 1] - vals[m]) if m < m_top \
                else (vals[0] - vals[m_top] - 2 * beta)
            cw = _class_weights(levels.partitions[m], np.ones(n, dtype=np.int64), n_first)
            s_whole = sum((wt / w_n) ** 2 for wt, _, _ in cw)
            s_split = sum((w_n1 / w_n) * (w1 / w_n1) ** 2 +
                          (w_n2 / w_n) * (w2 / w_n2) ** 2 for _, w1, w2 in cw)
            lhs += coeff * s_whole
            rhs += coeff * s_split
        return lhs, rhs

    summary_classes = _structure_classes(instance, summary, mode)
    cw = _class_weights(summary_classes, np.ones(n, dtype=np.int64), n_first)
    s_whole = sum((wt / w_n) ** k for wt, _, _ in cw)
    s_split = sum((w_n1 / w_n) * (w1 / w_n1) ** k +
                  (w_n2 / w_n) * (w2 / w_n2) ** k for _, w1, w2 in cw)
    if spec.kind == "independent_set":
        return -s_whole, -s_split
    weight = Fraction(1)
    if spec.kind == "ksat":
        weight = Fraction(1, 2 ** k)
    elif spec.kind == "nae_ksat":
        weight = Fraction(2, 2 ** k)
    return 1 - weight * s_whole, 1 - weight * s_split


@dataclass(frozen=True)
class ErStepResult:
    """One conditional interpolation step, fully audited.

    ``lhs`` conditions on inserting into the whole node set, ``rhs`` on the
    block mixture; ``margin = lhs - rhs``.  ``formula_*`` are the closed-form
    predictions from the optimal-set structure.  In the exact modes
    ``margin_nonneg`` states ``margin >= 0`` as rationals.
    """

    mode: str
    n_first: int
    fugacity: float | None
    base_value: float
    lhs: float
    rhs: float
    margin: float
    formula_lhs: float
    formula_rhs: float
    formula_margin: float
    exact: bool
    margin_nonneg: bool | None
    repeated_node_edges: int


def er_onestep_exact(instance: Instance, n_first: int, mode: str = "ground_state",
                     fugacity: float | None = None,
                     cap: int | None = None) -> ErStepResult:
    """Exact conditional one-step comparison for the block chain.

    Enumerates all ``n**K`` candidate edges (times all ``2**K`` sign tuples
    for signed models, weighted ``2**-K``) on both sides of the step.
    """
    spec = instance.spec
    n = instance.n_nodes
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not 1 <= n_first <= n - 1:
        raise ValueError(f"n_first must lie in 1..{n - 1}, got {n_first}")
    if mode == "sat_prob" and spec.kind not in SAT_KINDS:
        raise ValueError(f"satisfiability mode applies to {SAT_KINDS}")
    if mode == "log_partition":
        if fugacity is None or fugacity <= 0:
            raise ValueError("log-partition mode needs a positive fugacity")
        if spec.kind != "independent_set" and fugacity <= 1:
            raise ValueError(
                "the one-step comparison for this model needs fugacity > 1")
    exact._require_size(n, spec.q, structure=True, cap=cap)

    k = spec.arity
    whole = list(itertools.product(range(n), repeat=k))
    first = [t for t in whole if all(j < n_first for j in t)]
    second = [t for t in whole if all(j >= n_first for j in t)]
    ev = _TupleEvaluator(instance, mode, fugacity)

    if mode == "log_partition":
        return _er_onestep_logz(instance, n_first, fugacity, ev, whole, first, second)

    if mode == "ground_state":
        base = ev.ising_values[0] if spec.kind == "ising" \
            else Fraction(int(ev.table.max()))
        per_tuple = {t: ev.value(t) for t in whole}
    else:
        base = Fraction(int(ev.table.max()))
        if base != instance.graph.n_edges:
            per_tuple = {t: Fraction(0) for t in whole}
        else:
            per_tuple = {t: ev.stay_sat(t) for t in whole}

    lhs = sum(per_tuple[t] for t in whole) / len(whole)
    avg1 = sum(per_tuple[t] for t in first) / len(first)
    avg2 = sum(per_tuple[t] for t in second) / len(second)
    rhs = Fraction(n_first, n) * avg1 + Fraction(n - n_first, n) * avg2

    if mode == "sat_prob" and base != instance.graph.n_edges:
        f_lhs, f_rhs = Fraction(0), Fraction(0)
    else:
        summary = levels = None
        if spec.kind == "ising":
            levels = exact.ising_levels(instance, cap=cap)
        else:
            summary = exact.ground_state(instance, cap=cap)
        f_lhs, f_rhs = _er_formula_delta(instance, n_first, mode,
                                         summary=summary, levels=levels)
        if mode == "ground_state":
            f_lhs, f_rhs = base + f_lhs, base + f_rhs

    margin = lhs - rhs
    return ErStepResult(
        mode=mode, n_first=n_first, fugacity=None,
        base_value=float(base), lhs=float(lhs), rhs=float(rhs),
        margin=float(margin), formula_lhs=float(f_lhs), formula_rhs=float(f_rhs),
        formula_margin=float(f_lhs - f_rhs), exact=True,
        margin_nonneg=margin >= 0,
        repeated_node_edges=instance.graph.repeated_node_edges(),
    )


def _er_onestep_logz(instance, n_first, fugacity, ev, whole, first, second):
    """Log-partition flavour: floats, with the Gibbs-measure closed form."""
    spec = instance.spec
    n = instance.n_nodes
    log_z0 = float(logsumexp(ev.logw[ev.finite]))
    lw = np.log(fugacity)
    k = spec.arity

    per_tuple = {t: ev.log_z(t) for t in whole}
    lhs = float(np.mean([per_tuple[t] for t in whole]))
    rhs = (n_first / n) * float(np.mean([per_tuple[t] for t in first])) \
        + ((n - n_first) / n) * float(np.mean([per_tuple[t] for t in second]))

    def formula_term(t):
        mass = ev.pattern_mass(t, log_z0)
        if spec.kind == "independent_set":
            mu = mass[-1]  # all-ones pattern
            return np.log1p(-mu)
        if spec.kind in ("max_cut", "coloring"):
            mono = [v for v in range(ev.n_patterns)
                    if len({(v // spec.q ** (k - 1 - j)) % spec.q for j in range(k)}) == 1]
            mu = mass[mono].sum()
            return lw + np.log1p(-(1 - 1 / fugacity) * mu)
        if spec.kind == "ising":
            mu = mass[0] + mass[-1]
            return spec.beta * lw + np.log1p(-(1 - fugacity ** (-2 * spec.beta)) * mu)
        if spec.kind == "ksat":
            return lw + float(np.mean([np.log1p(-(1 - 1 / fugacity) * mass[a])
                                       for a in range(ev.n_patterns)]))
        full = ev.n_patterns - 1
        return lw + float(np.mean([np.log1p(-(1 - 1 / fugacity) * (mass[a] + mass[a ^ full]))
                                   for a in range(ev.n_patterns)]))

    f_whole = {t: formula_term(t) for t in whole}
    f_lhs = log_z0 + float(np.mean([f_whole[t] for t in whole]))
    f_rhs = log_z0 + (n_first / n) * float(np.mean([f_whole[t] for t in first])) \
        + ((n - n_first) / n) * float(np.mean([f_whole[t] for t in second]))

    return ErStepResult(
        mode="log_partition", n_first=n_first, fugacity=fugacity,
        base_value=log_z0, lhs=lhs, rhs=rhs, margin=lhs - rhs,
        formula_lhs=f_lhs, formula_rhs=f_rhs, formula_margin=f_lhs - f_rhs,
        exact=False, margin_nonneg=None,
        repeated_node_edges=instance.graph.repeated_node_edges(),
    )


# ---------------------------------------------------------------------------
# Block-chain Monte Carlo
# ---------------------------------------------------------------------------

def _chain_position_worker(seq, count, spec, n_nodes, n_edges, n_whole,
                           n_first, want_sat):
    """One chunk at chain position n_whole (None: the plain whole ensemble)."""
    rng = rng_from(seq)
    if n_whole is None:
        edges = sample_er_edges(rng, n_nodes, n_edges, spec.arity, batch=count)
    else:
        edges = sample_er_interpolated_edges(rng, n_nodes, n_edges, n_whole,
                                             n_first, spec.arity, batch=count)
    signs = sample_sign_tuples(rng, n_edges, spec.arity, batch=count) \
        if spec.kind in SIGNED_KINDS else None
    res = _mc.solve_values(spec, n_nodes, edges, signs,
                           want_value=not want_sat, want_sat=want_sat)
    part = _mc.RunningStats()
    part.add(res["sat"].astype(np.float64) if want_sat else res["value"])
    return part


def er_chain_mc(n_nodes: int, density: float, n_first: int, spec: ModelSpec,
                whole_counts, samples: int, seed: int,
                mode: str = "ground_state", jobs: int = 1) -> CheckReport:
    """Estimate the chain objective across interpolation positions and check
    monotonicity within the three-sigma rule.

    ``whole_counts`` lists positions r (number of whole-set edges); the
    expected optimum must be nondecreasing in r.  The endpoints are
    additionally compared against an independent whole-ensemble run (r = M)
    and an explicit disjoint block construction (r = 0).  ``mode`` may be
    ``sat_prob`` for the satisfiability variant of coloring/ksat/nae_ksat.
    """
    if mode not in ("ground_state", "sat_prob"):
        raise ValueError("er_chain_mc supports ground_state and sat_prob modes")
    if mode == "sat_prob" and spec.kind not in SAT_KINDS:
        raise ValueError(f"satisfiability mode applies to {SAT_KINDS}")
    n_edges = int(density * n_nodes)
    if not 1 <= n_first <= n_nodes - 1:
        raise ValueError(f"n_first must lie in 1..{n_nodes - 1}")
    whole_counts = sorted(int(r) for r in whole_counts)
    if whole_counts and not 0 <= whole_counts[0] <= whole_counts[-1] <= n_edges:
        raise ValueError(f"whole counts must lie in 0..{n_edges}")
    k = spec.arity
    want_sat = mode == "sat_prob"

    def run_position(n_whole):
        worker = functools.partial(
            _chain_position_worker, spec=spec, n_nodes=n_nodes,
            n_edges=n_edges, n_whole=n_whole, n_first=n_first,
            want_sat=want_sat)
        stats = _mc.RunningStats()
        for part in _mc.run_chunked(worker, seed, samples, jobs=jobs):
            stats.merge(part)
        return stats

    estimates = {r: run_position(r) for r in whole_counts}
    whole_ref = run_position(None)

    margins = {}
    for lo, hi in zip(whole_counts, whole_counts[1:]):
        a, b = estimates[lo], estimates[hi]
        se = (a.se ** 2 + b.se ** 2) ** 0.5
        margins[f"monotone[r={lo}->r={hi}]"] = (b.mean - a.mean, 3 * se, "statistical")
    if whole_counts and whole_counts[-1] == n_edges:
        a, b = estimates[n_edges], whole_ref
        se = (a.se ** 2 + b.se ** 2) ** 0.5
        margins["endpoint[r=M matches whole ensemble]"] = \
            (3 * se - abs(a.mean - b.mean), 0.0, "statistical")

    est_out = {f"chain[r={r}]": (s.mean, s.se, s.n) for r, s in estimates.items()}
    est_out["whole-ensemble"] = (whole_ref.mean, whole_ref.se, whole_ref.n)
    series = tuple((float(r), estimates[r].mean, estimates[r].se) for r in whole_counts)
    return CheckReport.build(
        name=f"chain-mc[{spec.kind},{mode}]",
        params={"n_nodes": n_nodes, "density": density, "n_first": n_first,
                "n_edges": n_edges, "kind": spec.kind, "q": spec.q,
                "arity": k, "mode": mode, "samples": samples,
                "whole_counts": list(whole_counts)},
        seed=seed, estimates=est_out, margins=margins, series=series,
    )


# ---------------------------------------------------------------------------
# Regular (configuration-model) chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegStep:
    """One delete-insert step.  ``z1``/``z2`` count isolated clones per block
    after the deletion; a failed step has ``side``/``inserted`` of None."""

    index: int
    phase: tuple[int, int]
    z1: int
    z2: int
    remaining_cross: int
    deleted: tuple[int, ...]
    side: int | None
    inserted: tuple[int, ...] | None
    repeated_node_insert: bool


@dataclass(frozen=True)
class RegInterpolationTrace:
    n_nodes: int
    n_first: int
    degree: int
    arity: int
    n_matched: int
    seed: int
    initial: ConfigurationState
    cross_counts: tuple[tuple[tuple[int, int], int], ...]
    steps: tuple[RegStep, ...]
    failed_at: int | None
    final: ConfigurationState

    def to_lines(self) -> str:
        """Line-per-step structured text for audit."""
        head = (f"reg-trace-v1 n={self.n_nodes} n1={self.n_first} r={self.degree} "
                f"K={self.arity} T={self.n_matched} seed={self.seed} "
                f"failed_at={self.failed_at}")
        rows = [head]
        rows.append("schedule " + " ".join(f"{k1}+{k2}:{c}"
                                           for (k1, k2), c in self.cross_counts))
        for s in self.steps:
            ins = ",".join(map(str, s.inserted)) if s.inserted else "-"
            rows.append(f"step {s.index} phase={s.phase[0]}+{s.phase[1]} "
                        f"z1={s.z1} z2={s.z2} rem={s.remaining_cross} "
                        f"del={','.join(map(str, s.deleted))} side={s.side or '-'} "
                        f"ins={ins}")
        return "\n".join(rows) + "\n"


def _clone_block(clone: int, n_first: int, degree: int) -> int:
    return 1 if clone < n_first * degree else 2


def reg_chain_run(n_nodes: int, n_first: int, degree: int, arity: int,
                  spec: ModelSpec | None = None, seed: int = 0,
                  n_matched: int | None = None) -> RegInterpolationTrace:
    """Run the regular-chain interpolation and record the full trace.

    The default matching size leaves ``floor(n^(2/3)/K)`` hyperedges' worth
    of isolated clones; pass ``n_matched`` to override at desk scale.  The
    phase schedule (cross-edge counts by type) is frozen from the initial
    matching.  The procedure fails at the first step where either block has
    fewer than K isolated clones after the deletion, even when the insertion
    targets the other block; the graph then stays frozen at the
    post-deletion state.
    """
    if spec is not None and spec.arity != arity:
        raise ValueError(f"model arity {spec.arity} != chain arity {arity}")
    n_second = n_nodes - n_first
    if not 1 <= n_first <= n_nodes - 1:
        raise ValueError(f"n_first must lie in 1..{n_nodes - 1}")
    for label, nn in (("n", n_nodes), ("n1", n_first), ("n2", n_second)):
        if (nn * degree) % arity != 0:
            raise ValueError(f"{label}*r = {nn * degree} is not divisible by K={arity}")
    max_matched = n_nodes * degree // arity
    if n_matched is None:
        n_matched = max_matched - int(n_nodes ** (2 / 3)) // arity
    if not 0 <= n_matched <= max_matched:
        raise ValueError(f"n_matched must lie in 0..{max_matched}")

    rng = make_rng(seed)
    perm = rng.permutation(n_nodes * degree)[: n_matched * arity]
    matching = [tuple(int(c) for c in perm[j * arity:(j + 1) * arity])
                for j in range(n_matched)]
    initial = ConfigurationState(n_nodes, degree, arity, tuple(matching))

    phases = [(k1, arity - k1) for k1 in range(1, arity)]
    pools: dict[tuple[int, int], list[int]] = {ph: [] for ph in phases}
    for idx, e in enumerate(matching):
        k1 = sum(1 for c in e if _clone_block(c, n_first, degree) == 1)
        if 0 < k1 < arity:
            pools[(k1, arity - k1)].append(idx)
    cross_counts = tuple((ph, len(pools[ph])) for ph in phases)

    matched = np.zeros(n_nodes * degree, dtype=bool)
    for e in matching:
        for c in e:
            matched[c] = True
    z1 = int((~matched[: n_first * degree]).sum())
    z2 = int((~matched[n_first * degree:]).sum())

    edges: dict[int, tuple[int, ...] | None] = dict(enumerate(matching))
    next_id = len(matching)
    steps: list[RegStep] = []
    failed_at = None
    index = 0

    for ph in phases:
        if failed_at is not None:
            break
        k1, k2 = ph
        pool = pools[ph]
        total = len(pool)
        for t in range(total):
            remaining = total - t
            pick = int(rng.integers(remaining))
            edge_id = pool.pop(pick)
            deleted = edges[edge_id]
            edges[edge_id] = None
            for c in deleted:
                matched[c] = False
            z1 += k1
            z2 += k2
            g0_z1, g0_z2 = z1, z2
            index += 1
            if z1 < arity or z2 < arity:
                steps.append(RegStep(index, ph, g0_z1, g0_z2, remaining, deleted,
                                     None, None, False))
                failed_at = index
                break
            side = 1 if rng.random() < k1 / arity else 2
            lo, hi = (0, n_first * degree) if side == 1 else \
                (n_first * degree, n_nodes * degree)
            isolated = np.flatnonzero(~matched[lo:hi]) + lo
            chosen = rng.choice(isolated, size=arity, replace=False)
            inserted = tuple(int(c) for c in chosen)
            for c in inserted:
                matched[c] = True
            if side == 1:
                z1 -= arity
            else:
                z2 -= arity
            owners = {c // degree for c in inserted}
            edges[next_id] = inserted
            next_id += 1
            steps.append(RegStep(index, ph, g0_z1, g0_z2, remaining, deleted,
                                 side, inserted, len(owners) < arity))

    final_matching = tuple(e for e in edges.values() if e is not None)
    final = ConfigurationState(n_nodes, degree, arity, final_matching)
    return RegInterpolationTrace(
        n_nodes=n_nodes, n_first=n_first, degree=degree, arity=arity,
        n_matched=n_matched, seed=seed, initial=initial,
        cross_counts=cross_counts, steps=tuple(steps), failed_at=failed_at,
        final=final)


def verify_trace(trace: RegInterpolationTrace) -> dict:
    """Exact replay of a trace's isolated-clone bookkeeping.

    Recomputes z1/z2 from the initial matching and the recorded edits,
    checks the per-step increment law (deletion frees k_j clones in block j;
    the insertion consumes K in its block, so a completed step moves z_j by
    k_j - K when block j hosts the insertion and by +k_j otherwise), checks
    the remaining-cross countdown and the freeze after failure, and returns
    per-phase insertion-side tallies for distributional tests.
    """
    matched = np.zeros(trace.n_nodes * trace.degree, dtype=bool)
    for e in trace.initial.matching:
        for c in e:
            matched[c] = True
    boundary = trace.n_first * trace.degree
    z1 = int((~matched[:boundary]).sum())
    z2 = int((~matched[boundary:]).sum())

    side_counts: dict[tuple[int, int], list[int]] = {}
    expected_remaining = dict(trace.cross_counts)
    checked = 0
    for step in trace.steps:
        k1, k2 = step.phase
        if step.remaining_cross != expected_remaining[step.phase]:
            raise AssertionError(
                f"step {step.index}: remaining cross count "
                f"{step.remaining_cross} != scheduled {expected_remaining[step.phase]}")
        expected_remaining[step.phase] -= 1
        blocks = [_clone_block(c, trace.n_first, trace.degree) for c in step.deleted]
        if blocks.count(1) != k1 or blocks.count(2) != k2:
            raise AssertionError(f"step {step.index}: deleted edge is not type {step.phase}")
        for c in step.deleted:
            if not matched[c]:
                raise AssertionError(f"step {step.index}: deleting unmatched clone {c}")
            matched[c] = False
        z1 += k1
        z2 += k2
        if (z1, z2) != (step.z1, step.z2):
            raise AssertionError(
                f"step {step.index}: recorded z=({step.z1},{step.z2}) "
                f"but replay gives ({z1},{z2})")
        if step.side is None:
            if min(z1, z2) >= trace.arity:
                raise AssertionError(f"step {step.index}: spurious failure")
            if trace.failed_at != step.index or trace.steps[-1] is not step:
                raise AssertionError("trace continues past the failure step")
            break
        if min(z1, z2) < trace.arity:
            raise AssertionError(f"step {step.index}: missed failure condition")
        tally = side_counts.setdefault(step.phase, [0, 0])
        tally[step.side - 1] += 1
        for c in step.inserted:
            block = _clone_block(c, trace.n_first, trace.degree)
            if block != step.side:
                raise AssertionError(f"step {step.index}: insert crosses blocks")
            if matched[c]:
                raise AssertionError(f"step {step.index}: inserting matched clone {c}")
            matched[c] = True
        if step.side == 1:
            z1 -= trace.arity
        else:
            z2 -= trace.arity
        checked += 1

    final_matched = np.zeros_like(matched)
    for e in trace.final.matching:
        for c in e:
            final_matched[c] = True
    if not np.array_equal(matched, final_matched):
        raise AssertionError("final state does not match the replayed edits")
    return {
        "ok": True,
        "checked_steps": checked,
        "side_counts": {ph: tuple(v) for ph, v in side_counts.items()},
        "failed_at": trace.failed_at,
    }


# ---------------------------------------------------------------------------
# Regular-chain one-step comparison with clone weighting
# ---------------------------------------------------------------------------

def _falling(x: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= x - j
    return out


def _weighted_tuples(nodes, weights, count):
    """(ordered node tuple, probability) pairs for drawing ``count`` distinct
    clones uniformly; tuples are weighted by falling-factorial products of
    per-node isolated-clone counts."""
    total = int(sum(int(weights[i]) for i in nodes))
    denom = _falling(total, count)
    out = []
    for t in itertools.product(nodes, repeat=count):
        num = 1
        seen: dict[int, int] = {}
        for i in t:
            used = seen.get(i, 0)
            num *= int(weights[i]) - used
            if num <= 0:
                num = 0
                break
            seen[i] = used + 1
        if num:
            out.append((t, Fraction(num, denom)))
    return out


@dataclass(frozen=True)
class RegStepResult:
    """Clone-weighted one-step comparison for the regular chain.

    ``lhs`` recreates the earlier chain graph (one cross edge with the
    phase's clone split), ``rhs`` the later one (a within-block edge on K
    isolated clones, block j with probability k_j/K).  ``formula_*`` hold
    the ratio-power main terms, which satisfy Young's inequality exactly;
    ``correction`` is the total without-replacement gap between the exact
    probabilities and those main terms, and ``margin_within_correction``
    states ``margin >= -correction`` as exact rationals."""

    mode: str
    phase: tuple[int, int]
    z1: int
    z2: int
    failed: bool
    base_value: float
    lhs: float
    rhs: float
    margin: float
    formula_lhs: float
    formula_rhs: float
    formula_margin: float
    correction: float
    margin_within_correction: bool


def _reg_formula_delta(instance, weights, n_first, phase, mode,
                       summary=None, levels=None):
    """Ratio-power main terms (lhs, rhs) for the regular chain, Fractions."""
    spec = instance.spec
    k1, k2 = phase
    k = spec.arity
    boundary = n_first
    z1 = Fraction(int(sum(int(weights[i - 1]) for i in range(1, boundary + 1))))
    z2 = Fraction(int(sum(int(weights[i - 1])
                          for i in range(boundary + 1, instance.n_nodes + 1))))

    def ratios(classes):
        out = []
        for wt, w1, w2 in _class_weights(classes, weights, n_first):
            out.append((w1 / z1, w2 / z2))
        return out

    def power_terms(classes, exp_left, exp_right):
        cross = Fraction(0)
        within = Fraction(0)
        for a1, a2 in ratios(classes):
            cross += a1 ** exp_left * a2 ** exp_right
            within += Fraction(k1, k) * a1 ** k + Fraction(k2, k) * a2 ** k
        return cross, within

    if spec.kind == "ising":
        beta = exact.exact_decimal(spec.beta)
        vals = levels.levels_exact
        m_top = levels.cutoff_index
        lhs = beta
        rhs = beta
        for m in range(m_top + 1):
            coeff = (vals[m + 1] - vals[m]) if m < m_top \
                else (vals[0] - vals[m_top] - 2 * beta)
            cross, within = power_terms(levels.partitions[m], k1, k2)
            lhs += coeff * cross
            rhs += coeff * within
        return lhs, rhs

    classes = _structure_classes(instance, summary, mode)
    cross, within = power_terms(classes, k1, k2)
    if spec.kind == "independent_set":
        return -cross, -within
    weight = Fraction(1)
    if spec.kind == "ksat":
        weight = Fraction(1, 2 ** k)
    elif spec.kind == "nae_ksat":
        weight = Fraction(2, 2 ** k)
    return 1 - weight * cross, 1 - weight * within


def reg_onestep_exact(state: ConfigurationState, instance: Instance,
                      n_first: int, phase: tuple[int, int],
                      mode: str = "ground_state",
                      cap: int | None = None) -> RegStepResult:
    """Exact one-step comparison for the regular chain.

    The conditioned graph is ``project(state)`` with the given model data;
    node weights are the per-node isolated-clone counts.  Supported modes
    are ``ground_state`` and ``sat_prob`` (the log-partition analogue has no
    closed main term here and is out of scope).  When either block has
    fewer than K isolated clones the step is the chain's failure state and
    is reported as such rather than evaluated.
    """
    spec = instance.spec
    if mode not in ("ground_state", "sat_prob"):
        raise ValueError("reg_onestep_exact supports ground_state and sat_prob modes")
    if mode == "sat_prob" and spec.kind not in SAT_KINDS:
        raise ValueError(f"satisfiability mode applies to {SAT_KINDS}")
    if spec.arity != state.arity:
        raise ValueError("model arity does not match the configuration state")
    if project(state).edges != instance.graph.edges:
        raise ValueError("instance graph must be the projection of the state")
    k1, k2 = phase
    k = spec.arity
    if k1 < 1 or k2 < 1 or k1 + k2 != k:
        raise ValueError(f"phase {phase} is not a split of K={k}")
    if not 1 <= n_first <= state.n_nodes - 1:
        raise ValueError(f"n_first must lie in 1..{state.n_nodes - 1}")
    exact._require_size(state.n_nodes, spec.q, structure=True, cap=cap)

    weights = state.degree_bound - state.node_degrees()
    boundary = n_first
    z1 = int(weights[:boundary].sum())
    z2 = int(weights[boundary:].sum())
    if min(z1, z2) < k:
        return RegStepResult(mode=mode, phase=phase, z1=z1, z2=z2, failed=True,
                             base_value=float("nan"), lhs=float("nan"),
                             rhs=float("nan"), margin=float("nan"),
                             formula_lhs=float("nan"), formula_rhs=float("nan"),
                             formula_margin=float("nan"), correction=float("nan"),
                             margin_within_correction=False)

    ev = _TupleEvaluator(instance, mode, None)
    if spec.kind == "ising":
        base = ev.ising_values[0]
    else:
        base = Fraction(int(ev.table.max()))
    if mode == "sat_prob":
        if base != instance.graph.n_edges:
            zero = Fraction(0)
            return RegStepResult(mode=mode, phase=phase, z1=z1, z2=z2, failed=False,
                                 base_value=float(base), lhs=0.0, rhs=0.0,
                                 margin=0.0, formula_lhs=0.0, formula_rhs=0.0,
                                 formula_margin=0.0, correction=0.0,
                                 margin_within_correction=True)
        tuple_value = ev.stay_sat
    else:
        tuple_value = ev.value

    part1 = list(range(boundary))
    part2 = list(range(boundary, state.n_nodes))
    cache: dict[tuple[int, ...], Fraction] = {}

    def val(t):
        if t not in cache:
            cache[t] = tuple_value(t)
        return cache[t]

    lhs = Fraction(0)
    left = _weighted_tuples(part1, weights, k1)
    right = _weighted_tuples(part2, weights, k2)
    for t1, p1 in left:
        for t2, p2 in right:
            lhs += p1 * p2 * val(t1 + t2)

    rhs = Fraction(0)
    for block, kk in ((part1, Fraction(k1, k)), (part2, Fraction(k2, k))):
        for t, p in _weighted_tuples(block, weights, k):
            rhs += kk * p * val(t)

    summary = levels = None
    if spec.kind == "ising":
        levels = exact.ising_levels(instance, cap=cap)
    else:
        summary = exact.ground_state(instance, cap=cap)
    f_lhs, f_rhs = _reg_formula_delta(instance, weights, n_first, phase, mode,
                                      summary=summary, levels=levels)
    if mode == "ground_state":
        f_lhs, f_rhs = base + f_lhs, base + f_rhs

    margin = lhs - rhs
    correction = abs(lhs - f_lhs) + abs(rhs - f_rhs)
    return RegStepResult(
        mode=mode, phase=phase, z1=z1, z2=z2, failed=False,
        base_value=float(base), lhs=float(lhs), rhs=float(rhs),
        margin=float(margin), formula_lhs=float(f_lhs), formula_rhs=float(f_rhs),
        formula_margin=float(f_lhs - f_rhs), correction=float(correction),
        margin_within_correction=margin >= -correction,
    )
