"""The bit-parallel scan must agree with the dense enumeration everywhere."""

import numpy as np
import pytest

from interpolab import ModelSpec, build_instance, generate_er
from interpolab import _bitscan, exact
from interpolab.models import sample_sign_tuples
from interpolab.hypergraph import sample_er_edges
from interpolab.rng import make_rng
from conftest import KINDS, random_instance


def test_matches_dense_on_random_instances():
    rng = np.random.default_rng(3)
    for kind in KINDS:
        for _ in range(15):
            inst = random_instance(rng, kind, n_max=9, m_max=12)
            if inst.spec.q != 2:
                continue
            table = exact.hamiltonian_table(inst)
            res = _bitscan.solve_instance(inst, want_count=kind != "ising")
            assert res["value"] == pytest.approx(table.max(), abs=1e-12)
            if kind != "ising":
                assert res["count"] == (table == table.max()).sum()


def test_tiny_node_counts_use_partial_words():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3, 4, 5, 6, 7):
        for kind in ("independent_set", "max_cut", "ksat"):
            spec = ModelSpec(kind, arity=2)
            g = generate_er(n, 5, 2, seed=int(rng.integers(100)))
            inst = build_instance(g, spec, seed=int(rng.integers(100)))
            table = exact.hamiltonian_table(inst)
            assert _bitscan.solve_instance(inst)["value"] == table.max()


def test_sat_flags_match_dense():
    rng = np.random.default_rng(7)
    for kind in ("coloring", "ksat", "nae_ksat"):
        arity = 3 if kind != "coloring" else 2
        spec = ModelSpec(kind, arity=arity)
        edges = sample_er_edges(make_rng(1), 6, 7, arity, batch=64)
        signs = sample_sign_tuples(make_rng(2), 7, arity, batch=64) \
            if kind != "coloring" else None
        res = _bitscan.solve_batch(kind, 6, edges, signs, want_sat=True)
        assert np.array_equal(res["sat"], res["value"] == 7)


def test_batch_matches_per_instance():
    edges = sample_er_edges(make_rng(11), 10, 9, 2, batch=40)
    batch = _bitscan.solve_batch("max_cut", 10, edges)
    for s in range(40):
        single = _bitscan.solve_batch("max_cut", 10, edges[s:s + 1])
        assert single["value"][0] == batch["value"][s]


def test_zero_edges():
    edges = np.zeros((3, 0, 2), dtype=np.int64)
    res = _bitscan.solve_batch("max_cut", 5, edges, want_count=True)
    assert list(res["value"]) == [0.0] * 3
    assert list(res["count"]) == [32] * 3
    res = _bitscan.solve_batch("independent_set", 5, edges, want_count=True)
    assert list(res["value"]) == [5.0] * 3
    assert list(res["count"]) == [1] * 3


def test_ising_batch_values():
    rng = np.random.default_rng(13)
    edges = sample_er_edges(make_rng(17), 8, 10, 2, batch=16)
    res = _bitscan.solve_batch("ising", 8, edges, beta=0.5, field=0.3)
    from interpolab.hypergraph import Hypergraph, edges_from_array
    from interpolab.models import Instance
    for s in range(16):
        inst = Instance(Hypergraph(8, 2, edges_from_array(edges[s])),
                        ModelSpec("ising", beta=0.5, field=0.3))
        assert res["value"][s] == pytest.approx(exact.hamiltonian_table(inst).max(),
                                                abs=1e-12)
