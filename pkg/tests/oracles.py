"""Brute-force reference implementations used as test oracles.

Everything here works on plain Python sets and is deliberately naive:
Floyd-Warshall distances, triple enumeration, transitive closures.
"""

import itertools
import math

INF = math.inf


def simple_edges(net, respect_direction):
    """Loop-free edge set as ordered pairs (both orientations if undirected)."""
    out = set()
    for u, v in net.edges:
        if u == v:
            continue
        out.add((u, v))
        if not (net.directed and respect_direction):
            out.add((v, u))
    return out


def floyd_warshall(n, arcs):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in arcs:
        d[u][v] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def path_oracle(net, respect_direction):
    """(diameter, sum of finite lengths, number of connected ordered pairs)."""
    n = net.n_vertices
    d = floyd_warshall(n, simple_edges(net, respect_direction))
    finite = [d[i][j] for i in range(n) for j in range(n) if i != j and d[i][j] < INF]
    return (max(finite) if finite else 0), sum(finite), len(finite)


def neighbours(net):
    nb = {v: set() for v in range(net.n_vertices)}
    for u, v in simple_edges(net, False):
        nb[u].add(v)
    return nb


def clustering_oracle(net):
    """(global transitivity, mean local clustering with degree<2 counted as 0)."""
    nb = neighbours(net)
    closed_triples = triples = 0
    local = []
    for v in range(net.n_vertices):
        pairs = list(itertools.combinations(sorted(nb[v]), 2))
        linked = sum(1 for a, b in pairs if b in nb[a])
        triples += len(pairs)
        closed_triples += linked
        local.append(linked / len(pairs) if pairs else 0.0)
    glob = closed_triples / triples if triples else 0.0
    return glob, (sum(local) / len(local) if local else math.nan)


def reachability(n, arcs):
    reach = [{i} for i in range(n)]
    changed = True
    while changed:
        changed = False
        for u, v in arcs:
            new = reach[v] - reach[u]
            if new:
                reach[u] |= new
                changed = True
    return reach


def component_oracle(net, mode):
    """Partition of vertices into weak or strong components, as a set of frozensets."""
    n = net.n_vertices
    if mode == "weak" or not net.directed:
        reach = reachability(n, simple_edges(net, False))
        return {frozenset(r) for r in reach}
    reach = reachability(n, simple_edges(net, True))
    return {frozenset(j for j in reach[i] if i in reach[j]) for i in range(n)}
