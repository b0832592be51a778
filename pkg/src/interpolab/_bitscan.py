"""Bit-parallel exhaustive scans over two-symbol assignment spaces.

Internal module.  Assignments ``s in 0..2^n-1`` are laid out one per bit
(little bit order) across words of 64, so a batch of instances is solved
with word-wide boolean algebra: per-edge satisfaction planes are added into
bit-sliced counters and the maximum is read off by a most-significant-plane
scan.  Only exactness is contractual; callers cross-check against the dense
enumeration in :mod:`interpolab.exact`.

Supports the q=2 models (coloring only with q=2) up to n=24.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

U1 = np.uint64(1)
U0 = np.uint64(0)
FULL = np.uint64(0xFFFFFFFFFFFFFFFF)
_LOW_PATTERNS = (0xAAAAAAAAAAAAAAAA, 0xCCCCCCCCCCCCCCCC, 0xF0F0F0F0F0F0F0F0,
                 0xFF00FF00FF00FF00, 0xFFFF0000FFFF0000, 0xFFFFFFFF00000000)

MAX_NODES = 24


def n_words(n_nodes: int) -> int:
    return max(1, (1 << n_nodes) >> 6)


@lru_cache(maxsize=4)
def valid_mask(n_nodes: int) -> np.ndarray:
    w = np.full(n_words(n_nodes), FULL, dtype=np.uint64)
    if n_nodes < 6:
        w[0] = np.uint64((1 << (1 << n_nodes)) - 1)
    return w


@lru_cache(maxsize=4)
def node_columns(n_nodes: int) -> np.ndarray:
    """(n, W) planes; bit s of row i is digit i of assignment s."""
    if n_nodes > MAX_NODES:
        raise ValueError(f"bit scan supports n <= {MAX_NODES}, got {n_nodes}")
    W = n_words(n_nodes)
    cols = np.zeros((n_nodes, W), dtype=np.uint64)
    w = np.arange(W, dtype=np.uint64)
    for i in range(n_nodes):
        if i < 6:
            cols[i] = np.uint64(_LOW_PATTERNS[i])
        else:
            cols[i] = np.where((w >> np.uint64(i - 6)) & U1 != 0, FULL, U0)
    cols &= valid_mask(n_nodes)
    return cols


@lru_cache(maxsize=4)
def popcount_planes(n_nodes: int) -> np.ndarray:
    """(B, W) planes; bit s of row p is bit p of popcount(s)."""
    n_bits = max(1, int(n_nodes).bit_length())
    W = n_words(n_nodes)
    planes = np.zeros((n_bits, W), dtype=np.uint64)
    pop = np.bitwise_count(np.arange(1 << n_nodes, dtype=np.uint32)).astype(np.uint8)
    for p in range(n_bits):
        bits = ((pop >> p) & 1).astype(np.uint8)
        planes[p] = np.packbits(bits, bitorder="little").view(np.uint64) \
            if n_nodes >= 6 else _pack_small(bits)
    return planes


def _pack_small(bits: np.ndarray) -> np.ndarray:
    padded = np.zeros(64, dtype=np.uint8)
    padded[: bits.size] = bits
    return np.packbits(padded, bitorder="little").view(np.uint64)


def _ripple_add(planes: np.ndarray, addend: np.ndarray) -> None:
    carry = addend
    for p in range(planes.shape[0]):
        planes[p], carry = planes[p] ^ carry, planes[p] & carry
        if not carry.any():
            return
    if carry.any():
        raise AssertionError("counter overflow: too few planes")


def _scan_max(planes: np.ndarray, cand: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max counter value over candidate bits, per batch row; also the bits
    attaining it."""
    cand = cand.copy()
    value = np.zeros(cand.shape[0], dtype=np.int64)
    for p in range(planes.shape[0] - 1, -1, -1):
        t = cand & planes[p]
        nz = t.any(axis=-1)
        value += nz.astype(np.int64) << p
        cand = np.where(nz[:, None], t, cand)
    return value, cand


def _popcount_rows(mask: np.ndarray) -> np.ndarray:
    return np.bitwise_count(mask).sum(axis=-1).astype(np.int64)


def solve_batch(kind: str, n_nodes: int, edges: np.ndarray,
                signs: np.ndarray | None = None, *, beta: float = 1.0,
                field: float = 0.0, want_value: bool = True,
                want_count: bool = False, want_sat: bool = False) -> dict:
    """Exact optimum of a batch of instances sharing (kind, n, M, K).

    edges: (S, M, K) 0-based node ids; signs: (S, M, K) in {0,1} for
    ksat/nae_ksat.  Returns ``value`` (S,) float64 plus optionally ``count``
    (number of optimal assignments) and ``sat`` (all edges satisfied; only
    for coloring/ksat/nae_ksat).
    """
    edges = np.asarray(edges)
    S, M, K = edges.shape
    cols = node_columns(n_nodes)
    valid = valid_mask(n_nodes)
    W = cols.shape[1]
    out: dict = {}

    if kind == "independent_set":
        if want_sat:
            raise ValueError("sat flag undefined for independent_set")
        bad = np.zeros((S, W), dtype=np.uint64)
        for m in range(M):
            bad |= cols[edges[:, m, 0]] & cols[edges[:, m, 1]]
        feasible = ~bad & valid
        value, cand = _scan_max(popcount_planes(n_nodes)[:, None, :], feasible)
        out["value"] = value.astype(np.float64)
        if want_count:
            out["count"] = _popcount_rows(cand)
        return out

    if kind in ("max_cut", "coloring", "ising"):
        if kind == "ising" and (want_count or want_sat):
            raise ValueError("ising counts/sat flags go through the dense engine")
        sat_planes = _edge_planes_pair(cols, edges)
    elif kind in ("ksat", "nae_ksat"):
        sat_planes = _edge_planes_signed(kind, cols, edges, signs)
    else:
        raise ValueError(f"unsupported kind {kind!r}")

    allsat = np.tile(valid, (S, 1)) if want_sat else None
    planes = None
    if want_value or want_count:
        n_planes = max(1, M.bit_length())
        planes = np.zeros((n_planes, S, W), dtype=np.uint64)
    for plane in sat_planes:
        if allsat is not None:
            allsat &= plane
        if planes is not None:
            _ripple_add(planes, plane)

    if allsat is not None:
        out["sat"] = allsat.any(axis=-1)
    if planes is None:
        return out

    if kind == "ising":
        out["value"] = _ising_values(n_nodes, planes, M, beta, field)
        return out

    value, cand = _scan_max(planes, np.tile(valid, (S, 1)))
    out["value"] = value.astype(np.float64)
    if want_count:
        out["count"] = _popcount_rows(cand)
    return out


def _edge_planes_pair(cols, edges):
    S, M, _ = edges.shape
    for m in range(M):
        yield cols[edges[:, m, 0]] ^ cols[edges[:, m, 1]]


def _edge_planes_signed(kind, cols, edges, signs):
    if signs is None:
        raise ValueError(f"{kind} needs sign tuples")
    signs = np.asarray(signs)
    S, M, K = edges.shape
    for m in range(M):
        hit = None  # bits where x_e equals the forbidden tuple
        mirror = None  # bits where x_e equals the complement tuple
        for j in range(K):
            c = cols[edges[:, m, j]]
            a = (signs[:, m, j] != 0)[:, None]
            agree = np.where(a, c, ~c)
            hit = agree if hit is None else hit & agree
            if kind == "nae_ksat":
                mirror = ~agree if mirror is None else mirror & ~agree
        bad = hit if kind == "ksat" else hit | mirror
        yield ~bad


def _ising_values(n_nodes, planes, n_edges, beta, field):
    """H = field*(2*pop - n) + beta*(n_edges - 2*agreements); the counter
    planes hold the bichromatic-edge count, so H = field*(2*pop - n) +
    beta*(2*cut - n_edges)."""
    n_planes, S, W = planes.shape
    size = 1 << n_nodes
    pop = np.bitwise_count(np.arange(size, dtype=np.uint32)).astype(np.float64)
    node_term = field * (2.0 * pop - n_nodes)
    values = np.empty(S, dtype=np.float64)
    chunk = max(1, (1 << 22) // size)
    for lo in range(0, S, chunk):
        hi = min(S, lo + chunk)
        cut = np.zeros((hi - lo, size), dtype=np.uint8)
        for p in range(n_planes):
            cut += np.unpackbits(planes[p, lo:hi].view(np.uint8), axis=1,
                                 bitorder="little")[:, :size] << p
        h = node_term[None, :] + beta * (2.0 * cut - n_edges)
        values[lo:hi] = h.max(axis=1)
    return values


def solve_instance(instance, want_count: bool = False, want_sat: bool = False) -> dict:
    """Single-instance convenience wrapper around :func:`solve_batch`."""
    spec = instance.spec
    if spec.q != 2:
        raise ValueError("bit scan handles two-symbol models only")
    edges = instance.graph.edge_array()[None, ...]
    signs = None if instance.potentials is None else instance.potentials[None, ...]
    res = solve_batch(spec.kind, instance.graph.n_nodes, edges, signs,
                      beta=spec.beta, field=spec.field,
                      want_count=want_count, want_sat=want_sat)
    return {k: v[0] for k, v in res.items()}
