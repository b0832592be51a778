import itertools
import math

import numpy as np
import pytest

from interpolab import (
    Hypergraph,
    Instance,
    ModelSpec,
    build_instance,
    disjoint_union,
    dump_instance,
    evaluate,
    generate_er,
    ground_value,
    hamiltonian_bound_check,
    load_instance,
)
from conftest import KINDS, random_instance

NEG_INF = float("-inf")


def test_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec("nonsense")
    with pytest.raises(ValueError):
        ModelSpec("independent_set", q=3)
    with pytest.raises(ValueError):
        ModelSpec("max_cut", arity=3)
    with pytest.raises(ValueError):
        ModelSpec("coloring", q=1)
    with pytest.raises(ValueError):
        ModelSpec("ksat", arity=1)
    with pytest.raises(ValueError):
        ModelSpec("ising", beta=0.0)
    assert ModelSpec("ising", beta=2.0).lipschitz == 2.0
    assert ModelSpec("ksat", arity=3).lipschitz == 1.0


def test_build_instance_shapes():
    g = generate_er(5, 7, 3, seed=1)
    inst = build_instance(g, ModelSpec("ksat", arity=3), seed=2)
    assert inst.potentials.shape == (7, 3)
    col = build_instance(generate_er(5, 7, 2, seed=1), ModelSpec("coloring", q=3))
    assert col.potentials is None
    with pytest.raises(ValueError):
        build_instance(g, ModelSpec("max_cut"))  # arity mismatch


def test_sign_tuple_marginals():
    g = generate_er(4, 100_000, 2, seed=3)
    inst = build_instance(g, ModelSpec("ksat", arity=2), seed=9)
    p = 0.5
    sigma = math.sqrt(p * (1 - p) / g.n_edges)
    for j in range(2):
        freq = inst.potentials[:, j].mean()
        assert abs(freq - p) <= 3 * sigma


def test_evaluate_examples():
    edge = Hypergraph(2, 2, ((1, 2),))
    assert evaluate(build_instance(edge, ModelSpec("independent_set")), (1, 1)) == NEG_INF
    assert evaluate(build_instance(edge, ModelSpec("independent_set")), (1, 0)) == 1
    assert evaluate(build_instance(edge, ModelSpec("max_cut")), (0, 1)) == 1
    assert evaluate(build_instance(edge, ModelSpec("max_cut")), (1, 1)) == 0
    assert evaluate(build_instance(edge, ModelSpec("coloring", q=3)), (2, 1)) == 1

    ising = build_instance(edge, ModelSpec("ising", beta=0.5, field=0.25))
    assert evaluate(ising, (0, 1)) == pytest.approx(0.5)   # fields cancel
    assert evaluate(ising, (1, 1)) == pytest.approx(0.5 - 0.5)

    sat = Instance(edge, ModelSpec("ksat", arity=2), np.array([[0, 0]], dtype=np.uint8))
    assert evaluate(sat, (0, 0)) == 0
    for x in ((0, 1), (1, 0), (1, 1)):
        assert evaluate(sat, x) == 1

    nae = Instance(edge, ModelSpec("nae_ksat", arity=2), np.array([[0, 0]], dtype=np.uint8))
    assert evaluate(nae, (0, 0)) == 0 and evaluate(nae, (1, 1)) == 0
    assert evaluate(nae, (0, 1)) == 1


def test_evaluate_validates_assignment():
    inst = build_instance(Hypergraph(2, 2, ()), ModelSpec("max_cut"))
    with pytest.raises(ValueError):
        evaluate(inst, (0, 1, 0))
    with pytest.raises(ValueError):
        evaluate(inst, (0, 2))


def test_minus_inf_only_for_independent_set():
    rng = np.random.default_rng(11)
    for kind in KINDS:
        if kind == "independent_set":
            continue
        for _ in range(5):
            inst = random_instance(rng, kind, n_max=5, m_max=6)
            for _ in range(10):
                x = rng.integers(0, inst.spec.q, inst.n_nodes)
                assert np.isfinite(evaluate(inst, x))


def test_monotone_under_edge_addition_fixed_assignment():
    rng = np.random.default_rng(21)
    for kind in ("max_cut", "coloring", "ksat", "nae_ksat"):
        for _ in range(10):
            inst = random_instance(rng, kind, n_max=6, m_max=8)
            if inst.graph.n_edges == 0:
                continue
            smaller = Instance(
                Hypergraph(inst.graph.n_nodes, inst.graph.arity, inst.graph.edges[:-1]),
                inst.spec,
                None if inst.potentials is None else inst.potentials[:-1])
            for _ in range(8):
                x = rng.integers(0, inst.spec.q, inst.n_nodes)
                assert evaluate(inst, x) >= evaluate(smaller, x)


def test_symbol_permutation_invariance():
    rng = np.random.default_rng(31)
    for kind, q in (("max_cut", 2), ("coloring", 3)):
        for _ in range(8):
            inst = random_instance(rng, kind, n_max=6, m_max=8)
            q = inst.spec.q
            perm = rng.permutation(q)
            for _ in range(6):
                x = rng.integers(0, q, inst.n_nodes)
                assert evaluate(inst, x) == evaluate(inst, perm[x])
    # ising flip symmetry without a field
    inst = build_instance(generate_er(6, 7, 2, seed=3),
                          ModelSpec("ising", beta=1.5, field=0.0))
    for _ in range(10):
        x = rng.integers(0, 2, 6)
        assert evaluate(inst, x) == pytest.approx(evaluate(inst, 1 - x))


def test_ground_state_additive_over_disjoint_union():
    rng = np.random.default_rng(41)
    for kind in KINDS:
        a = random_instance(rng, kind, n_max=5, m_max=5)
        b_graph = generate_er(int(rng.integers(2, 5)), int(rng.integers(0, 5)),
                              a.spec.arity, seed=int(rng.integers(100)))
        b = build_instance(b_graph, a.spec, seed=int(rng.integers(100)))
        union_graph = disjoint_union(a.graph, b.graph)
        pots = None
        if a.potentials is not None:
            pots = np.vstack([a.potentials, b.potentials]) \
                if a.potentials.size or b.potentials.size else a.potentials
        union = Instance(union_graph, a.spec, pots)
        assert ground_value(union) == pytest.approx(
            ground_value(a) + ground_value(b), abs=1e-12)


def test_hamiltonian_bound_check_margins():
    g = generate_er(6, 6, 2, seed=5)
    same = hamiltonian_bound_check(g, g, ModelSpec("max_cut"), seed=1)
    assert same.passed
    assert same.margins["lipschitz-bound"]["margin"] == pytest.approx(0.0)

    plus = Hypergraph(6, 2, g.edges + ((2, 4),))
    rep = hamiltonian_bound_check(g, plus, ModelSpec("max_cut"), seed=1)
    assert rep.passed

    rep = hamiltonian_bound_check(g, plus, ModelSpec("ising", beta=0.7), seed=1)
    assert rep.passed  # |dH| <= beta for a single edit

    rep = hamiltonian_bound_check(g, plus, ModelSpec("ksat", arity=2), seed=1)
    assert rep.passed


def test_instance_serialization_roundtrip():
    rng = np.random.default_rng(51)
    for kind in KINDS:
        inst = random_instance(rng, kind, n_max=6, m_max=6)
        text = dump_instance(inst)
        back = load_instance(text)
        assert dump_instance(back) == text
        assert back.graph == inst.graph and back.spec == inst.spec
        if inst.potentials is not None:
            assert np.array_equal(back.potentials, inst.potentials)
