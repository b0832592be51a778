"""Shared Monte Carlo plumbing: chunked seeded trials, batched solving,
mergeable running statistics.  Internal.

Chunks receive independent child seeds spawned from the master seed in a
fixed order, and chunk results merge associatively, so estimates are
identical no matter how many workers execute the chunks.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _bitscan
from .models import Instance, ModelSpec

CHUNK = 512


@dataclass
class RunningStats:
    n: int = 0
    total: float = 0.0
    total_sq: float = 0.0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        self.n += values.size
        self.total += float(values.sum())
        self.total_sq += float((values * values).sum())

    def merge(self, other: "RunningStats") -> None:
        self.n += other.n
        self.total += other.total
        self.total_sq += other.total_sq

    @property
    def mean(self) -> float:
        return self.total / self.n

    @property
    def variance(self) -> float:
        if self.n < 2:
            return 0.0
        return max(0.0, (self.total_sq - self.total ** 2 / self.n) / (self.n - 1))

    @property
    def se(self) -> float:
        return (self.variance / self.n) ** 0.5

    @property
    def sd(self) -> float:
        return self.variance ** 0.5


def chunk_counts(samples: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(samples, chunk)
    return [chunk] * full + ([rest] if rest else [])


def solve_values(spec: ModelSpec, n_nodes: int, edges: np.ndarray,
                 signs: np.ndarray | None, want_value: bool = True,
                 want_sat: bool = False) -> dict:
    """Batched exact solve; two-symbol models ride the bit-parallel scan,
    anything else enumerates densely per sample."""
    if spec.q == 2 and n_nodes <= _bitscan.MAX_NODES:
        return _bitscan.solve_batch(spec.kind, n_nodes, edges, signs,
                                    beta=spec.beta, field=spec.field,
                                    want_value=want_value, want_sat=want_sat)
    from . import exact
    from .hypergraph import Hypergraph, edges_from_array

    S = edges.shape[0]
    out: dict = {}
    values = np.empty(S, dtype=np.float64) if want_value else None
    sat = np.empty(S, dtype=bool) if want_sat else None
    for s in range(S):
        graph = Hypergraph(n_nodes, spec.arity, edges_from_array(edges[s]))
        inst = Instance(graph, spec, None if signs is None else signs[s])
        table = exact.hamiltonian_table(inst)
        top = table.max()
        if values is not None:
            values[s] = top
        if sat is not None:
            sat[s] = top == edges.shape[1]
    if values is not None:
        out["value"] = values
    if sat is not None:
        out["sat"] = sat
    return out


def run_chunked(worker, seed: int, samples: int, jobs: int = 1,
                chunk: int = CHUNK) -> list:
    """Apply ``worker(seed_seq, count)`` over deterministic chunks; results
    come back in chunk order regardless of ``jobs``."""
    from .rng import spawn_seeds

    counts = chunk_counts(samples, chunk)
    seqs = spawn_seeds(seed, len(counts))
    if jobs <= 1:
        return [worker(sq, c) for sq, c in zip(seqs, counts)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, seqs, counts))
