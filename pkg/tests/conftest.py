import itertools
import math

import numpy as np
import pytest

from interpolab import Instance, ModelSpec, build_instance, evaluate, generate_er

KINDS = ("independent_set", "max_cut", "ising", "coloring", "ksat", "nae_ksat")


def random_spec(rng, kind):
    arity = 3 if kind in ("ksat", "nae_ksat") and rng.random() < 0.5 else 2
    q = 3 if kind == "coloring" and rng.random() < 0.5 else 2
    beta = float(rng.choice([0.5, 1.0, 2.0]))
    field = float(rng.choice([0.0, 0.3]))
    return ModelSpec(kind, q=q, arity=arity, beta=beta, field=field)


def random_instance(rng, kind=None, n_max=8, m_max=10):
    kind = kind or KINDS[int(rng.integers(len(KINDS)))]
    spec = random_spec(rng, kind)
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(0, m_max + 1))
    graph = generate_er(n, m, spec.arity, seed=int(rng.integers(2 ** 62)))
    return build_instance(graph, spec, seed=int(rng.integers(2 ** 62)))


def slow_ground_state(instance):
    """Independent literal-definition oracle: evaluate every assignment."""
    spec = instance.spec
    best = -math.inf
    count = 0
    for x in itertools.product(range(spec.q), repeat=instance.n_nodes):
        v = evaluate(instance, x)
        if v > best:
            best, count = v, 1
        elif v == best:
            count += 1
    return best, count


def slow_optima(instance):
    """All optimal assignments, as tuples, by literal evaluation."""
    spec = instance.spec
    best, _ = slow_ground_state(instance)
    return [x for x in itertools.product(range(spec.q), repeat=instance.n_nodes)
            if evaluate(instance, x) == best]
