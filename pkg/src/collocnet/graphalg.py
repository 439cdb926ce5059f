"""Graph algorithms behind the global network properties.

Everything runs on CSR adjacency arrays built from a network's edge list.
Self-loops never take part in path, component or clustering computations,
and parallel edges collapse. The inner loops are numba-compiled; shortest
paths come from one BFS per source vertex, which suits sparse word networks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numba import njit

from collocnet.errors import UndefinedProperty
from collocnet.netbuild import CollocationNetwork

RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"


def csr(net: CollocationNetwork, respect_direction: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays ``(indptr, indices)`` of the loop-free simple graph.

    With ``respect_direction=False`` (or an undirected network) every edge
    is stored in both directions.
    """
    key = ("csr", bool(net.directed and respect_direction), net.n_vertices, net.n_edges)
    if key in net.cache:
        return net.cache[key]
    n = net.n_vertices
    edges = net.edge_array()
    if len(edges):
        edges = edges[edges[:, 0] != edges[:, 1]]
    if not (net.directed and respect_direction) and len(edges):
        edges = np.concatenate([edges, edges[:, ::-1]])
    if len(edges):
        keys = np.unique(edges[:, 0] * n + edges[:, 1])
        src, dst = keys // n, keys % n
    else:
        src = dst = np.empty(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    net.cache[key] = (indptr, dst.astype(np.int64))
    return net.cache[key]


def simple_undirected_edge_count(net: CollocationNetwork) -> int:
    indptr, _ = csr(net, respect_direction=False)
    return int(indptr[-1]) // 2


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class ComponentLabeling:
    mode: str
    labels: np.ndarray
    count: int
    giant_size: int

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)


@njit(cache=True)
def _weak_labels(indptr, indices, n):
    labels = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    count = 0
    for root in range(n):
        if labels[root] != -1:
            continue
        labels[root] = count
        head, tail = 0, 1
        queue[0] = root
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if labels[w] == -1:
                    labels[w] = count
                    queue[tail] = w
                    tail += 1
        count += 1
    return labels, count


@njit(cache=True)
def _tarjan_labels(indptr, indices, n):
    # Iterative Tarjan; the explicit call stack keeps (vertex, next edge slot).
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    on_stack = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    call_v = np.empty(n, np.int64)
    call_it = np.empty(n, np.int64)
    labels = np.full(n, -1, np.int64)
    sp = 0
    counter = 0
    count = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on_stack[root] = True
        call_v[0] = root
        call_it[0] = indptr[root]
        csp = 1
        while csp > 0:
            v = call_v[csp - 1]
            it = call_it[csp - 1]
            if it < indptr[v + 1]:
                call_it[csp - 1] = it + 1
                w = indices[it]
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on_stack[w] = True
                    call_v[csp] = w
                    call_it[csp] = indptr[w]
                    csp += 1
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                csp -= 1
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = False
                        labels[w] = count
                        if w == v:
                            break
                    count += 1
                if csp > 0:
                    p = call_v[csp - 1]
                    if low[v] < low[p]:
                        low[p] = low[v]
    return labels, count


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Renumber components in order of their lowest vertex id."""
    if len(labels) == 0:
        return labels
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse]


def components(net: CollocationNetwork, mode: Literal["weak", "strong"] = "weak") -> ComponentLabeling:
    if mode not in ("weak", "strong"):
        raise ValueError(f"unknown component mode {mode!r}")
    n = net.n_vertices
    if mode == "strong" and net.directed:
        indptr, indices = csr(net, respect_direction=True)
        labels, count = _tarjan_labels(indptr, indices, n)
    else:
        indptr, indices = csr(net, respect_direction=False)
        labels, count = _weak_labels(indptr, indices, n)
    labels = _canonical_labels(labels)
    giant = int(np.bincount(labels).max()) if n else 0
    return ComponentLabeling(mode, labels, int(count), giant)


# ------------------------------------------------------------ shortest paths


@njit(cache=True)
def _bfs_sweep(indptr, indices, n):
    """Max, sum and count of finite shortest-path lengths over ordered pairs s != t."""
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    longest = 0
    total = 0
    pairs = 0
    for s in range(n):
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == -1:
                    dist[w] = dv
                    queue[tail] = w
                    tail += 1
                    total += dv
                    if dv > longest:
                        longest = dv
        pairs += tail - 1
        for i in range(tail):
            dist[queue[i]] = -1
    return longest, total, pairs


BITSET_WORDS = 4
BITSET_MAX_LEVELS = 32
BITSET_MIN_VERTICES = 32


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _bitset_sweep(in_ptr, in_idx, n, max_levels):
    """Same result as ``_bfs_sweep``, running 256 sources per pass over the edges.

    Bit j of word w of ``frontier[v]`` says v is at the current level from
    source ``base + 64 w + j``; a vertex pulls the frontier bits of its
    in-neighbours. Returns ``(-1, 0, 0)`` as soon as a level exceeds
    ``max_levels``.
    """
    W = BITSET_WORDS
    visited = np.zeros((n, W), np.uint64)
    frontier = np.zeros((n, W), np.uint64)
    nxt = np.zeros((n, W), np.uint64)
    full = np.zeros(W, np.uint64)
    acc = np.zeros(W, np.uint64)
    zero = np.uint64(0)
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    longest = 0
    total = 0
    pairs = 0
    for base in range(0, n, 64 * W):
        width = min(64 * W, n - base)
        visited[:, :] = zero
        frontier[:, :] = zero
        for w in range(W):
            bits = min(64, max(0, width - 64 * w))
            full[w] = ones if bits == 64 else (np.uint64(1) << np.uint64(bits)) - np.uint64(1)
        for j in range(width):
            bit = np.uint64(1) << np.uint64(j % 64)
            visited[base + j, j // 64] = bit
            frontier[base + j, j // 64] = bit
        level = 0
        active = True
        while active:
            level += 1
            if level > max_levels:
                return -1, 0, 0
            active = False
            for v in range(n):
                done = True
                for w in range(W):
                    if visited[v, w] != full[w]:
                        done = False
                if done:
                    for w in range(W):
                        nxt[v, w] = zero
                    continue
                acc[:] = zero
                for k in range(in_ptr[v], in_ptr[v + 1]):
                    u = in_idx[k]
                    for w in range(W):
                        acc[w] |= frontier[u, w]
                for w in range(W):
                    a = acc[w] & ~visited[v, w]
                    nxt[v, w] = a
                    if a != zero:
                        cnt = np.int64(_popcount(a))
                        total += cnt * level
                        pairs += cnt
                        active = True
                        if level > longest:
                            longest = level
            for v in range(n):
                for w in range(W):
                    visited[v, w] |= nxt[v, w]
                    frontier[v, w] = nxt[v, w]
    return longest, total, pairs




def _transpose(indptr: np.ndarray, indices: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    order = np.lexsort((src, indices))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(indices, minlength=n), out=ptr[1:])
    return ptr, src[order]


@dataclass(frozen=True)
class PathStats:
    diameter: int
    total_length: int
    connected_pairs: int  # ordered pairs

    @property
    def average_length(self) -> float:
        if self.connected_pairs == 0:
            raise UndefinedProperty("path length undefined", "no connected vertex pair")
        return self.total_length / self.connected_pairs


def path_stats(net: CollocationNetwork, respect_direction: bool) -> PathStats:
    if net.n_vertices == 0:
        raise UndefinedProperty("empty graph")
    n = net.n_vertices
    indptr, indices = csr(net, respect_direction)
    # The bitset kernel costs about levels/64 single-source sweeps, so it
    # gives up on long, thin graphs and the plain sweep takes over.
    longest = -1
    if n >= BITSET_MIN_VERTICES:
        in_ptr, in_idx = _transpose(indptr, indices, n) if (net.directed and respect_direction) else (indptr, indices)
        longest, total, pairs = _bitset_sweep(in_ptr, in_idx, n, BITSET_MAX_LEVELS)
    if longest < 0:
        longest, total, pairs = _bfs_sweep(indptr, indices, n)
    return PathStats(int(longest), int(total), int(pairs))


def diameter(net: CollocationNetwork, respect_direction: bool = True) -> int:
    """Longest finite shortest path; unreachable pairs are skipped."""
    return path_stats(net, respect_direction).diameter


def avg_path_length(net: CollocationNetwork) -> float:
    """Mean shortest-path length over connected pairs, direction ignored."""
    return path_stats(net, respect_direction=False).average_length


# ---------------------------------------------------------------- clustering


@njit(cache=True)
def _triangles_per_vertex(indptr, indices, n):
    """Triangles through each vertex, by the degree-ordered forward algorithm.

    Each edge is oriented from lower to higher (degree, id) rank, so every
    triangle is found exactly once from its lowest-ranked corner.
    """
    deg = indptr[1:] - indptr[:-1]
    order = np.argsort(deg * n + np.arange(n))
    rank = np.empty(n, np.int64)
    for r in range(n):
        rank[order[r]] = r
    fptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        c = 0
        for k in range(indptr[v], indptr[v + 1]):
            if rank[indices[k]] > rank[v]:
                c += 1
        fptr[v + 1] = fptr[v] + c
    fidx = np.empty(fptr[n], np.int64)
    for v in range(n):
        pos = fptr[v]
        for k in range(indptr[v], indptr[v + 1]):
            if rank[indices[k]] > rank[v]:
                fidx[pos] = indices[k]
                pos += 1
    mark = np.full(n, -1, np.int64)
    out = np.zeros(n, np.int64)
    for v in range(n):
        for k in range(fptr[v], fptr[v + 1]):
            mark[fidx[k]] = v
        for k in range(fptr[v], fptr[v + 1]):
            u = fidx[k]
            for j in range(fptr[u], fptr[u + 1]):
                w = fidx[j]
                if mark[w] == v:
                    out[v] += 1
                    out[u] += 1
                    out[w] += 1
    return out


def triangle_census(net: CollocationNetwork) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex ``(closed, degree)``: edges among neighbours and simple degree."""
    indptr, indices = csr(net, respect_direction=False)
    closed = _triangles_per_vertex(indptr, indices, net.n_vertices)
    return closed, np.diff(indptr)


def local_clustering(net: CollocationNetwork, low_degree: Literal["zero", "nan"] = "zero") -> np.ndarray:
    closed, deg = triangle_census(net)
    pairs = deg * (deg - 1) / 2
    out = np.full(len(deg), 0.0 if low_degree == "zero" else np.nan)
    ok = deg >= 2
    out[ok] = closed[ok] / pairs[ok]
    return out


def clustering(
    net: CollocationNetwork,
    kind: Literal["global", "avg_local"] = "global",
    low_degree: Literal["zero", "exclude"] = "zero",
) -> float:
    """Transitivity (``global``) or mean local clustering (``avg_local``).

    For ``avg_local``, vertices of degree < 2 count as 0 by default;
    ``low_degree="exclude"`` drops them from the mean instead.
    """
    if kind == "global":
        closed, deg = triangle_census(net)
        triples = int(np.sum(deg * (deg - 1) // 2))
        return 0.0 if triples == 0 else int(closed.sum()) / triples
    if kind != "avg_local":
        raise ValueError(f"unknown clustering kind {kind!r}")
    if net.n_vertices == 0:
        raise UndefinedProperty("empty graph")
    values = local_clustering(net, "zero" if low_degree == "zero" else "nan")
    if low_degree == "exclude":
        values = values[~np.isnan(values)]
        if len(values) == 0:
            raise UndefinedProperty("no vertex of degree >= 2")
    # fsum keeps the mean independent of vertex order
    return math.fsum(values.tolist()) / len(values)


# -------------------------------------------------------------- random graphs


def _decode_undirected(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # Row-major index over pairs i < j, decoded from the end: the t-th row
    # from the bottom holds t + 1 pairs.
    k = k.astype(np.int64)
    total = n * (n - 1) // 2
    r = total - 1 - k  # index counted from the end
    t = ((np.sqrt(8.0 * r + 1) - 1) // 2).astype(np.int64)
    # Guard against floating-point error in the square root.
    t = np.where((t + 1) * (t + 2) // 2 <= r, t + 1, t)
    t = np.where(t * (t + 1) // 2 > r, t - 1, t)
    i = n - 2 - t
    j = n - 1 - (r - t * (t + 1) // 2)
    return i, j


def gnm_random(n: int, m: int, directed: bool, seed: int) -> CollocationNetwork:
    """Uniform simple G(n, m) without self-loops, reproducible from ``seed``."""
    capacity = n * (n - 1) if directed else n * (n - 1) // 2
    if n < 0 or m < 0 or m > capacity:
        raise ValueError(f"m={m} exceeds the simple-edge capacity {capacity} for n={n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    keys = np.sort(rng.choice(capacity, size=m, replace=False)) if m else np.empty(0, np.int64)
    if directed:
        i = keys // (n - 1)
        j = keys % (n - 1)
        j = j + (j >= i)
    else:
        i, j = _decode_undirected(keys, n)
    edges = list(zip(i.tolist(), j.tolist()))
    return CollocationNetwork([str(v) for v in range(n)], edges, directed, False, None)
