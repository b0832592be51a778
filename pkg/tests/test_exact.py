import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from interpolab import (
    Hypergraph,
    Instance,
    ModelSpec,
    SizeCapError,
    build_instance,
    disjoint_union,
    edge_addition_value,
    evaluate,
    generate_er,
    gibbs_event_probability,
    ground_state,
    ground_value,
    ising_levels,
    log_partition,
    nae_equivalence,
)
from interpolab import exact
from conftest import KINDS, random_instance, slow_ground_state, slow_optima


def test_ground_state_is_path():
    # independent sets on the path 1-2-3: unique optimum {1, 3}
    inst = build_instance(Hypergraph(3, 2, ((1, 2), (2, 3))),
                          ModelSpec("independent_set"))
    s = ground_state(inst)
    assert s.value == 2 and s.optimal_count == 1
    assert s.frozen_set == (1, 3)


def test_ground_state_maxcut_single_edge():
    s = ground_state(build_instance(Hypergraph(2, 2, ((1, 2),)), ModelSpec("max_cut")))
    assert s.value == 1 and s.optimal_count == 2
    assert s.classes == ((1,), (2,)) and s.frozen_set == ()


def test_ground_state_coloring_edgeless():
    s = ground_state(build_instance(Hypergraph(2, 2, ()), ModelSpec("coloring", q=2)))
    assert s.value == 0 and s.optimal_count == 4
    assert s.classes == ((1,), (2,))


def test_ground_state_against_literal_oracle():
    rng = np.random.default_rng(7)
    for kind in KINDS:
        for _ in range(12):
            inst = random_instance(rng, kind, n_max=6, m_max=8)
            value, count = slow_ground_state(inst)
            s = ground_state(inst)
            assert s.value == pytest.approx(value, abs=1e-12)
            assert s.optimal_count == count


def test_frozen_set_bipartition_crosscheck():
    # a frozen node admits no optimum on the other value; an unfrozen node
    # splits the optimal set into two nonempty parts
    rng = np.random.default_rng(17)
    for _ in range(15):
        inst = random_instance(rng, "ksat", n_max=6, m_max=8)
        s = ground_state(inst)
        optima = slow_optima(inst)
        for node in range(1, inst.n_nodes + 1):
            vals = {x[node - 1] for x in optima}
            assert (len(vals) == 1) == (node in s.frozen_set)


def test_classes_match_literal_relation():
    rng = np.random.default_rng(27)
    for kind in ("max_cut", "coloring"):
        for _ in range(10):
            inst = random_instance(rng, kind, n_max=6, m_max=7)
            optima = slow_optima(inst)
            s = ground_state(inst)
            label = {}
            for ci, cls in enumerate(s.classes):
                for i in cls:
                    label[i] = ci
            for i, k in itertools.combinations(range(1, inst.n_nodes + 1), 2):
                same = all(x[i - 1] == x[k - 1] for x in optima)
                assert same == (label[i] == label[k])


def test_nae_equivalence_examples():
    edge = Hypergraph(2, 2, ((1, 2),))
    inst = Instance(edge, ModelSpec("nae_ksat", arity=2),
                    np.array([[0, 0]], dtype=np.uint8))
    assert nae_equivalence(inst) == ((1, 2),)

    edgeless = build_instance(Hypergraph(3, 2, ()), ModelSpec("nae_ksat", arity=2))
    assert nae_equivalence(edgeless) == ((1,), (2,), (3,))

    # two independent clauses on disjoint pairs do not merge across pairs
    g = Hypergraph(4, 2, ((1, 2), (3, 4)))
    inst = Instance(g, ModelSpec("nae_ksat", arity=2),
                    np.array([[0, 0], [0, 0]], dtype=np.uint8))
    classes = nae_equivalence(inst)
    assert classes == ((1, 2), (3, 4))


def test_nae_equivalence_matches_literal_relation():
    rng = np.random.default_rng(37)
    for _ in range(10):
        inst = random_instance(rng, "nae_ksat", n_max=6, m_max=6)
        optima = slow_optima(inst)
        classes = nae_equivalence(inst)
        label = {}
        for ci, cls in enumerate(classes):
            for i in cls:
                label[i] = ci
        for i, k in itertools.combinations(range(1, inst.n_nodes + 1), 2):
            equivalent = not any(
                (x[i - 1] == y[i - 1]) != (x[k - 1] == y[k - 1])
                for x in optima for y in optima)
            assert equivalent == (label[i] == label[k])


def test_ising_levels_single_edge():
    inst = build_instance(Hypergraph(2, 2, ((1, 2),)),
                          ModelSpec("ising", beta=1.0, field=0.0))
    lv = ising_levels(inst)
    assert lv.levels == (1.0, -1.0)
    assert lv.cutoff_index == 1 and not lv.truncated


def test_ising_levels_single_node_truncation():
    inst = build_instance(Hypergraph(1, 2, ()), ModelSpec("ising", beta=0.5, field=1.0))
    lv = ising_levels(inst)
    # values 1 and -1; cutoff at 1 - 2*0.5 = 0 discards -1
    assert lv.levels == (1.0,) and lv.truncated
    wide = ising_levels(build_instance(Hypergraph(1, 2, ()),
                                       ModelSpec("ising", beta=1.0, field=1.0)))
    assert wide.levels == (1.0, -1.0) and not wide.truncated


def test_ising_levels_refinement():
    rng = np.random.default_rng(47)
    for _ in range(10):
        inst = random_instance(rng, "ising", n_max=6, m_max=8)
        lv = ising_levels(inst)
        assert all(a > b for a, b in zip(lv.levels_exact, lv.levels_exact[1:]))
        assert all(v >= lv.levels_exact[0] - 2 * exact.exact_decimal(inst.spec.beta)
                   for v in lv.levels_exact)
        for m in range(1, lv.cutoff_index + 1):
            coarse = lv.labels(m - 1, inst.n_nodes)
            fine = lv.labels(m, inst.n_nodes)
            pairs = {}
            for node in range(inst.n_nodes):
                prev = pairs.setdefault(fine[node], coarse[node])
                assert prev == coarse[node]  # finer classes stay inside coarser


def test_edge_addition_ising_lemma_cases():
    rng = np.random.default_rng(57)
    for _ in range(25):
        inst = random_instance(rng, "ising", n_max=6, m_max=7)
        for _ in range(5):
            i, k = rng.integers(1, inst.n_nodes + 1, 2)
            edge_addition_value(inst, (int(i), int(k)))  # raises on any mismatch


def test_edge_addition_is_and_ksat_cases():
    # independent set: an edge inside the always-chosen set costs exactly one
    path = build_instance(Hypergraph(3, 2, ((1, 2), (2, 3))),
                          ModelSpec("independent_set"))
    assert edge_addition_value(path, (1, 3)) == 1.0
    assert edge_addition_value(path, (1, 2)) == 2.0

    # ksat: an edge touching a non-frozen node gains exactly one
    rng = np.random.default_rng(67)
    for _ in range(10):
        inst = random_instance(rng, "ksat", n_max=6, m_max=7)
        s = ground_state(inst)
        free = [i for i in range(1, inst.n_nodes + 1) if i not in s.frozen_set]
        if not free:
            continue
        edge = tuple(int(v) for v in rng.integers(1, inst.n_nodes + 1,
                                                  inst.spec.arity - 1)) + (free[0],)
        pot = rng.integers(0, 2, inst.spec.arity)
        assert edge_addition_value(inst, edge, potential=pot) == s.value + 1


def test_log_partition_examples_and_oracle():
    one = build_instance(Hypergraph(1, 2, ()), ModelSpec("independent_set"))
    for lam in (0.5, 1.0, 2.0, 10.0):
        assert log_partition(one, lam).log_z == pytest.approx(math.log(1 + lam))
    with pytest.raises(ValueError):
        log_partition(one, 0.0)

    rng = np.random.default_rng(77)
    for kind in ("independent_set", "max_cut", "coloring", "ksat", "nae_ksat"):
        for lam in (Fraction(1, 2), Fraction(3), Fraction(10)):
            inst = random_instance(rng, kind, n_max=5, m_max=6)
            z = Fraction(0)
            for x in itertools.product(range(inst.spec.q), repeat=inst.n_nodes):
                v = evaluate(inst, x)
                if math.isinf(v):
                    continue
                z += lam ** int(v)
            got = log_partition(inst, float(lam)).log_z
            want = math.log(z)
            assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_log_partition_large_fugacity_tracks_optimum():
    rng = np.random.default_rng(87)
    lam = 1e6
    for kind in KINDS:
        inst = random_instance(rng, kind, n_max=6, m_max=6)
        ratio = log_partition(inst, lam).log_z / math.log(lam)
        h = ground_value(inst)
        assert h <= ratio + 1e-9
        assert ratio <= h + inst.n_nodes * math.log(inst.spec.q) / math.log(lam) + 1e-9


def test_log_partition_additivity():
    rng = np.random.default_rng(97)
    for _ in range(8):
        a = random_instance(rng, "max_cut", n_max=5, m_max=6)
        b = random_instance(rng, "max_cut", n_max=5, m_max=6)
        union = Instance(disjoint_union(a.graph, b.graph), a.spec)
        for lam in (0.5, 2.0):
            la = log_partition(a, lam).log_z
            lb = log_partition(b, lam).log_z
            lu = log_partition(union, lam).log_z
            assert abs(lu - la - lb) <= 1e-12 * max(1.0, abs(lu))


def test_gibbs_event_probabilities():
    pair = build_instance(Hypergraph(2, 2, ()), ModelSpec("independent_set"))
    assert gibbs_event_probability(pair, 1.0, ("all_ones", (1, 2))) == pytest.approx(0.25)

    cut = build_instance(Hypergraph(2, 2, ((1, 2),)), ModelSpec("max_cut"))
    assert gibbs_event_probability(cut, 1.0, ("equal", (1, 2))) == pytest.approx(0.5)

    rng = np.random.default_rng(107)
    for _ in range(10):
        inst = random_instance(rng, "independent_set", n_max=6, m_max=6)
        i, k = (int(v) for v in rng.integers(1, inst.n_nodes + 1, 2))
        lam = float(rng.choice([0.5, 1.0, 2.0]))
        mu_edge = gibbs_event_probability(inst, lam, ("all_ones", (i, k)))
        empty_weight = 1.0 / math.exp(log_partition(inst, lam).log_z)
        assert 1 - mu_edge >= empty_weight - 1e-12 > 0


def test_log_one_minus_series_identity():
    for mu in (0.0, 0.1, 0.5, 0.9):
        assert abs(exact.log_one_minus_series(mu) - math.log1p(-mu)) <= 1e-9
    with pytest.raises(ValueError):
        exact.log_one_minus_series(1.0)


def test_size_caps_raise():
    big = build_instance(Hypergraph(25, 2, ()), ModelSpec("independent_set"))
    with pytest.raises(SizeCapError):
        ground_value(big)
    mid = build_instance(Hypergraph(21, 2, ()), ModelSpec("independent_set"))
    with pytest.raises(SizeCapError):
        ground_state(mid)
    assert ground_value(mid) == 21.0  # value-only cap is higher
    q3 = build_instance(Hypergraph(15, 2, ()), ModelSpec("coloring", q=3))
    with pytest.raises(SizeCapError):
        ground_state(q3)
    # explicit override
    assert ground_state(mid, cap=21).value == 21.0


def test_ground_value_engines_agree():
    rng = np.random.default_rng(117)
    for kind in KINDS:
        for _ in range(10):
            inst = random_instance(rng, kind, n_max=8, m_max=10)
            dense = exact.hamiltonian_table(inst).max()
            assert ground_value(inst) == pytest.approx(dense, abs=1e-12)
