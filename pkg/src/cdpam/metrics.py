"""Structural metrics: clustering, assortativity, triangles, diameter, degree histogram."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numba
import numpy as np

from .errors import InvalidParameterError, UndefinedAssortativityError
from .graph import Graph

EXACT_DIAMETER_CUTOFF = 20000
_SWEEP_RESTARTS = 4


@numba.njit(cache=True)
def _oriented_csr(indptr, indices, degrees):
    """Keep edge u->v only when (deg u, u) < (deg v, v); rows stay sorted by id."""
    n = len(degrees)
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    out_idx = np.empty(len(indices) // 2, dtype=np.int64)
    pos = 0
    for u in range(n):
        du = degrees[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            dv = degrees[v]
            if du < dv or (du == dv and u < v):
                out_idx[pos] = v
                pos += 1
        out_ptr[u + 1] = pos
    return out_ptr, out_idx


@numba.njit(cache=True)
def _triangles_per_node(indptr, indices, degrees):
    """Triangles through each node via merge-intersection on the degree-ordered orientation.

    Every triangle has exactly one oriented edge u->v whose endpoints share a
    third out-neighbor, so each is found once and credited to all three nodes.
    """
    optr, oidx = _oriented_csr(indptr, indices, degrees)
    n = len(degrees)
    counts = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for e in range(optr[u], optr[u + 1]):
            v = oidx[e]
            a, a_end = optr[u], optr[u + 1]
            b, b_end = optr[v], optr[v + 1]
            while a < a_end and b < b_end:
                x = oidx[a]
                y = oidx[b]
                if x < y:
                    a += 1
                elif y < x:
                    b += 1
                else:
                    counts[u] += 1
                    counts[v] += 1
                    counts[x] += 1
                    a += 1
                    b += 1
    return counts


@numba.njit(cache=True)
def _bfs(indptr, indices, src, dist, queue):
    """BFS from ``src``; returns (eccentricity, a farthest node, nodes reached)."""
    dist[:] = -1
    dist[src] = 0
    queue[0] = src
    head, tail = 0, 1
    far = src
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
                far = v
    return dist[far], far, tail


@numba.njit(cache=True)
def _all_eccentricities(indptr, indices, n):
    ecc = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        e, _, _ = _bfs(indptr, indices, s, dist, queue)
        ecc[s] = e
    return ecc


class Diameter(NamedTuple):
    value: float  # int hop count, or math.inf when disconnected
    is_estimate: bool


def _require_node(g: Graph, i: int) -> None:
    if not 0 <= i < g.node_count:
        raise InvalidParameterError(f"node id {i} out of range [0, {g.node_count})")


def local_clustering(g: Graph, i: int) -> float:
    _require_node(g, i)
    nbrs = g.neighbors(i)
    k = len(nbrs)
    if k < 2:
        return 0.0
    nset = set(nbrs)
    links = sum(1 for j in nbrs for w in g.neighbors(j) if w > j and w in nset)
    return 2 * links / (k * (k - 1))


def triangles_per_node(g: Graph) -> np.ndarray:
    indptr, indices = g.csr()
    return _triangles_per_node(indptr, indices, g.degrees)


def local_clustering_all(g: Graph) -> np.ndarray:
    tri = triangles_per_node(g).astype(np.float64)
    k = g.degrees.astype(np.float64)
    pairs = k * (k - 1) / 2
    out = np.zeros(g.node_count)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def global_clustering(g: Graph) -> float:
    """Mean local clustering; nodes of degree < 2 count as 0."""
    if g.node_count == 0:
        raise InvalidParameterError("clustering of an empty graph")
    return float(np.mean(local_clustering_all(g)))


def triangle_count(g: Graph) -> int:
    if g.node_count == 0:
        return 0
    return int(triangles_per_node(g).sum()) // 3


def assortativity(g: Graph) -> float:
    """Newman degree assortativity, evaluated with exact integer sums."""
    if g.edge_count == 0:
        raise UndefinedAssortativityError("assortativity needs at least one edge")
    k = [int(d) for d in g.degrees]
    two_m = 2 * g.edge_count
    s2 = sum(d * d for d in k)
    s3 = sum(d * d * d for d in k)
    # sum over ordered adjacent pairs of k_i k_j
    sa = 2 * sum(k[u] * k[v] for u, v in g.edges())
    denom = two_m * s3 - s2 * s2
    if denom == 0:
        raise UndefinedAssortativityError("degree-regular graph: assortativity is 0/0")
    return (two_m * sa - s2 * s2) / denom


def bfs_diameter(
    g: Graph, exact_cutoff: int = EXACT_DIAMETER_CUTOFF, seed: int = 0
) -> Diameter:
    """Hop diameter: exact up to ``exact_cutoff`` nodes, else a double-sweep lower bound.

    The estimate runs iterated double sweeps from the max-degree node and
    three random nodes drawn with ``seed``; the result is a true eccentricity,
    hence never above the real diameter.
    """
    n = g.node_count
    if n == 0:
        raise InvalidParameterError("diameter of an empty graph")
    indptr, indices = g.csr()
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    _, _, reached = _bfs(indptr, indices, 0, dist, queue)
    if reached < n:
        return Diameter(math.inf, False)
    if n <= exact_cutoff:
        return Diameter(int(_all_eccentricities(indptr, indices, n).max()), False)

    rng = np.random.default_rng(seed)
    starts = [int(np.argmax(g.degrees))] + rng.integers(0, n, _SWEEP_RESTARTS - 1).tolist()
    best = 0
    for s in starts:
        _, u, _ = _bfs(indptr, indices, s, dist, queue)
        while True:
            ecc, v, _ = _bfs(indptr, indices, u, dist, queue)
            if ecc <= best:
                break
            best, u = int(ecc), v
    return Diameter(best, True)


def degree_histogram(g: Graph) -> dict[int, int]:
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(d): int(c) for d, c in zip(values, counts)}


@dataclass
class MetricsReport:
    node_count: int
    edge_count: int
    clustering: float
    assortativity: float | None
    triangles: int
    diameter: float
    diameter_is_estimate: bool
    degree_histogram: dict[int, int] = field(repr=False)
    assortativity_reason: str | None = None


def metrics_report(g: Graph, exact_cutoff: int = EXACT_DIAMETER_CUTOFF) -> MetricsReport:
    try:
        ai, reason = assortativity(g), None
    except UndefinedAssortativityError as exc:
        ai, reason = None, str(exc)
    diam = bfs_diameter(g, exact_cutoff)
    return MetricsReport(
        node_count=g.node_count,
        edge_count=g.edge_count,
        clustering=global_clustering(g),
        assortativity=ai,
        triangles=triangle_count(g),
        diameter=diam.value,
        diameter_is_estimate=diam.is_estimate,
        degree_histogram=degree_histogram(g),
        assortativity_reason=reason,
    )
