import math

import numpy as np
import pytest

from interpolab import (
    Hypergraph,
    Instance,
    ModelSpec,
    build_instance,
    generate_config_partial,
    generate_er,
    project,
)
from interpolab import interpolate as ip
from conftest import KINDS, random_instance


# ---------------------------------------------------------------------------
# Block-chain one-step identities
# ---------------------------------------------------------------------------

def test_onestep_is_path_exact_values():
    inst = build_instance(Hypergraph(3, 2, ((1, 2), (2, 3))),
                          ModelSpec("independent_set"))
    res = ip.er_onestep_exact(inst, n_first=1)
    # 4 of the 9 candidate edges land inside the always-chosen pair {1, 3}
    assert res.lhs - res.base_value == pytest.approx(-4 / 9, abs=1e-15)
    assert res.margin == pytest.approx(1 / 18, abs=1e-15)
    assert res.lhs == res.formula_lhs and res.rhs == res.formula_rhs
    assert res.margin_nonneg


def test_onestep_maxcut_single_edge():
    inst = build_instance(Hypergraph(2, 2, ((1, 2),)), ModelSpec("max_cut"))
    res = ip.er_onestep_exact(inst, n_first=1)
    assert res.lhs - res.base_value == pytest.approx(0.5)
    assert res.rhs - res.base_value == pytest.approx(0.0)


def test_onestep_rejects_degenerate_split_and_modes():
    inst = build_instance(Hypergraph(4, 2, ()), ModelSpec("max_cut"))
    with pytest.raises(ValueError):
        ip.er_onestep_exact(inst, n_first=4)
    with pytest.raises(ValueError):
        ip.er_onestep_exact(inst, n_first=0)
    with pytest.raises(ValueError):
        ip.er_onestep_exact(inst, n_first=2, mode="sat_prob")  # not a sat kind
    with pytest.raises(ValueError):
        ip.er_onestep_exact(inst, n_first=2, mode="log_partition", fugacity=1.0)
    is_inst = build_instance(Hypergraph(4, 2, ()), ModelSpec("independent_set"))
    ip.er_onestep_exact(is_inst, n_first=2, mode="log_partition", fugacity=0.5)


def test_onestep_identity_random_instances_exact():
    rng = np.random.default_rng(29)
    for kind in KINDS:
        for _ in range(8):
            inst = random_instance(rng, kind, n_max=7, m_max=9)
            n1 = int(rng.integers(1, inst.n_nodes)) if inst.n_nodes > 1 else 1
            res = ip.er_onestep_exact(inst, n_first=n1)
            assert res.lhs == res.formula_lhs
            assert res.rhs == res.formula_rhs
            assert res.margin_nonneg


def test_onestep_sat_mode_random_instances():
    rng = np.random.default_rng(31)
    for kind in ("coloring", "ksat", "nae_ksat"):
        for _ in range(8):
            inst = random_instance(rng, kind, n_max=6, m_max=6)
            n1 = int(rng.integers(1, inst.n_nodes)) if inst.n_nodes > 1 else 1
            res = ip.er_onestep_exact(inst, n_first=n1, mode="sat_prob")
            assert res.lhs == res.formula_lhs
            assert res.rhs == res.formula_rhs
            assert res.margin_nonneg
            assert 0.0 <= res.rhs <= res.lhs <= 1.0


def test_onestep_logz_formula_and_margin():
    rng = np.random.default_rng(41)
    for kind in KINDS:
        lams = (0.5, 2.0) if kind == "independent_set" else (2.0,)
        for lam in lams:
            for _ in range(4):
                inst = random_instance(rng, kind, n_max=6, m_max=7)
                n1 = int(rng.integers(1, inst.n_nodes)) if inst.n_nodes > 1 else 1
                res = ip.er_onestep_exact(inst, n_first=n1,
                                          mode="log_partition", fugacity=lam)
                assert abs(res.lhs - res.formula_lhs) <= 1e-12
                assert abs(res.rhs - res.formula_rhs) <= 1e-12
                assert res.margin >= -1e-12


def test_is_sandwich_under_edge_addition():
    # Z(G) >= Z(G+e) >= Z(G) / (1 + lambda) for every candidate edge
    from interpolab import log_partition
    rng = np.random.default_rng(43)
    for _ in range(10):
        inst = random_instance(rng, "independent_set", n_max=6, m_max=6)
        for lam in (0.5, 1.0, 2.0, 10.0):
            base = log_partition(inst, lam).log_z
            for i in range(1, inst.n_nodes + 1):
                for k in range(1, inst.n_nodes + 1):
                    bigger = Instance(
                        Hypergraph(inst.n_nodes, 2, inst.graph.edges + ((i, k),)),
                        inst.spec)
                    lz = log_partition(bigger, lam).log_z
                    assert lz <= base + 1e-12
                    assert lz >= base - math.log1p(lam) - 1e-12


# ---------------------------------------------------------------------------
# Block-chain Monte Carlo
# ---------------------------------------------------------------------------

def test_chain_mc_zero_edges_is_flat():
    rep = ip.er_chain_mc(8, 0.0, 4, ModelSpec("independent_set"),
                         whole_counts=[0], samples=256, seed=1)
    assert rep.passed
    assert rep.estimates["chain[r=0]"]["value"] == 8.0
    assert rep.estimates["chain[r=0]"]["se"] == 0.0


def test_chain_mc_monotone_is():
    rep = ip.er_chain_mc(10, 1.0, 5, ModelSpec("independent_set"),
                         whole_counts=[0, 5, 10], samples=4000, seed=7)
    assert rep.passed
    assert len(rep.series) == 3


def test_chain_mc_sat_variant():
    rep = ip.er_chain_mc(8, 1.0, 4, ModelSpec("ksat", arity=3),
                         whole_counts=[0, 8], samples=3000, seed=9,
                         mode="sat_prob")
    assert rep.passed
    assert 0 <= rep.estimates["chain[r=0]"]["value"] <= 1


# ---------------------------------------------------------------------------
# Regular chain
# ---------------------------------------------------------------------------

def test_reg_chain_k2_bookkeeping():
    trace = ip.reg_chain_run(12, 6, 2, 2, seed=5)
    diag = ip.verify_trace(trace)
    assert diag["ok"]
    # complete steps leave the total isolated count unchanged
    for a, b in zip(trace.steps, trace.steps[1:]):
        assert (a.z1 + a.z2) == (b.z1 + b.z2)


def test_reg_chain_default_matching_size():
    trace = ip.reg_chain_run(12, 6, 2, 2, seed=5)
    assert trace.n_matched == 12 * 2 // 2 - int(12 ** (2 / 3)) // 2


def test_reg_chain_k3_phases_in_order():
    trace = ip.reg_chain_run(9, 3, 2, 3, seed=12, n_matched=5)
    diag = ip.verify_trace(trace)
    assert diag["ok"]
    phases = [s.phase for s in trace.steps]
    assert phases == sorted(phases)  # (1,2) before (2,1)


def test_reg_chain_integrality_validation():
    with pytest.raises(ValueError):
        ip.reg_chain_run(9, 4, 2, 3, seed=0)  # n1*r not divisible by K
    with pytest.raises(ValueError):
        ip.reg_chain_run(7, 3, 1, 2, seed=0)  # n*r odd


def test_reg_chain_full_matching_fails_on_first_cross_edge():
    for seed in range(30):
        trace = ip.reg_chain_run(2, 1, 2, 2, seed=seed, n_matched=2)
        total_cross = sum(c for _, c in trace.cross_counts)
        if total_cross:
            assert trace.failed_at == 1
            assert ip.verify_trace(trace)["ok"]
            assert trace.steps[-1].side is None
            break
    else:
        pytest.fail("no seed produced a crossing full matching")


def test_reg_chain_freeze_after_failure():
    found = False
    for seed in range(200):
        trace = ip.reg_chain_run(6, 3, 2, 2, seed=seed, n_matched=6)
        if trace.failed_at is not None:
            found = True
            assert trace.steps[-1].index == trace.failed_at
            assert all(s.side is not None for s in trace.steps[:-1])
            ip.verify_trace(trace)
            break
    assert found


def test_reg_chain_increment_mean_zero():
    # E[z_j(t+1) - z_j(t)] = 0 over completed steps within one phase
    rng = np.random.default_rng(0)
    deltas = []
    for seed in range(150):
        trace = ip.reg_chain_run(10, 5, 2, 2, seed=seed)
        steps = [s for s in trace.steps if s.side is not None]
        for a, b in zip(steps, steps[1:]):
            deltas.append(b.z1 - a.z1)
    deltas = np.array(deltas, dtype=float)
    # increments are k1 - K*1[side 1]: values in {-1, +1} for K=2 phases
    assert set(np.unique(deltas)) <= {-1.0, 1.0}
    se = deltas.std() / math.sqrt(len(deltas))
    assert abs(deltas.mean()) <= 3 * se


# ---------------------------------------------------------------------------
# Regular one-step
# ---------------------------------------------------------------------------

def test_reg_onestep_margin_within_correction():
    rng = np.random.default_rng(71)
    evaluated = 0
    for kind in KINDS:
        for _ in range(6):
            arity = 3 if kind in ("ksat", "nae_ksat") and rng.random() < 0.5 else 2
            n = int(rng.integers(4, 8))
            r = int(rng.integers(2, 4))
            while (n * r) % arity:
                n += 1
            t = int(rng.integers(0, n * r // arity))
            state = generate_config_partial(n, r, arity, t,
                                            seed=int(rng.integers(10_000)))
            spec = ModelSpec(kind, arity=arity,
                             beta=float(rng.choice([0.5, 1.0])),
                             field=float(rng.choice([0.0, 0.3])))
            inst = build_instance(project(state), spec,
                                  seed=int(rng.integers(10_000)))
            k1 = int(rng.integers(1, arity))
            res = ip.reg_onestep_exact(state, inst, n_first=n // 2,
                                       phase=(k1, arity - k1))
            if res.failed:
                continue
            evaluated += 1
            assert res.margin_within_correction
            assert res.formula_margin >= -1e-15  # Young's inequality is exact
    assert evaluated >= 15


def test_reg_onestep_empty_frozen_set_gives_zero_margin():
    state = generate_config_partial(6, 2, 2, 2, seed=3)
    inst = build_instance(project(state), ModelSpec("independent_set"))
    from interpolab import ground_state
    if ground_state(inst).frozen_set == ():
        res = ip.reg_onestep_exact(state, inst, n_first=3, phase=(1, 1))
        assert res.lhs == res.rhs == res.base_value


def test_reg_onestep_uniform_weights_match_er_within_correction():
    # an empty matching weights every node equally: the within-block side
    # agrees with the uniform block insertion up to the one-over-Z term
    state = generate_config_partial(6, 3, 2, 0, seed=1)
    inst = build_instance(project(state), ModelSpec("max_cut"))
    reg = ip.reg_onestep_exact(state, inst, n_first=3, phase=(1, 1))
    er = ip.er_onestep_exact(inst, n_first=3)
    assert abs(reg.rhs - er.rhs) <= reg.correction + 1e-12


def test_reg_onestep_degenerate_isolated_count_is_failure():
    state = generate_config_partial(4, 1, 2, 2, seed=0)  # no isolated clones
    inst = build_instance(project(state), ModelSpec("max_cut"))
    res = ip.reg_onestep_exact(state, inst, n_first=2, phase=(1, 1))
    assert res.failed


def test_reg_onestep_validates_graph_match():
    state = generate_config_partial(4, 2, 2, 2, seed=1)
    other = build_instance(Hypergraph(4, 2, ()), ModelSpec("max_cut"))
    with pytest.raises(ValueError):
        ip.reg_onestep_exact(state, other, n_first=2, phase=(1, 1))
