"""Append-only simple undirected graph with arrival-ordered node ids."""

from __future__ import annotations

import bisect
from collections.abc import Iterable, Iterator
from pathlib import Path

import numpy as np

from .errors import EdgeListParseError, InvalidParameterError


class Graph:
    """Simple undirected graph whose node ids are 0..node_count-1.

    Ids double as arrival times: a node's id is the order in which it was
    added. Neighbor lists are kept sorted so membership is a bisection and
    edge-list output is canonical.
    """

    def __init__(self, node_count: int = 0):
        if node_count < 0:
            raise InvalidParameterError(f"node_count must be >= 0, got {node_count}")
        self._adj: list[list[int]] = [[] for _ in range(node_count)]
        self._edge_count = 0
        self._csr = None

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
        g = cls(node_count)
        for u, v in edges:
            g.add_edge(int(u), int(v))
        return g

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return len(self._adj)

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def degree(self, i: int) -> int:
        self._check_node(i)
        return len(self._adj[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))

    def neighbors(self, i: int) -> list[int]:
        """Sorted neighbor ids of ``i`` (a read-only view; do not mutate)."""
        self._check_node(i)
        return self._adj[i]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        a = self._adj[u]
        pos = bisect.bisect_left(a, v)
        return pos < len(a) and a[pos] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (u, v) with u < v in ascending lexicographic order."""
        for u, nbrs in enumerate(self._adj):
            start = bisect.bisect_right(nbrs, u)
            for v in nbrs[start:]:
                yield u, v

    def add_node(self) -> int:
        self._adj.append([])
        self._csr = None
        return len(self._adj) - 1

    def add_edge(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise InvalidParameterError(f"self-loop on node {u}")
        au = self._adj[u]
        pos = bisect.bisect_left(au, v)
        if pos < len(au) and au[pos] == v:
            raise InvalidParameterError(f"duplicate edge ({u}, {v})")
        au.insert(pos, v)
        bisect.insort(self._adj[v], u)
        self._edge_count += 1
        self._csr = None

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) arrays of the symmetric adjacency, cached."""
        if self._csr is None:
            deg = self.degrees
            indptr = np.zeros(len(deg) + 1, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            indices = np.fromiter(
                (v for nbrs in self._adj for v in nbrs), dtype=np.int64, count=int(indptr[-1])
            )
            self._csr = (indptr, indices)
        return self._csr

    def adjacency_matrix(self):
        """Symmetric adjacency as a ``scipy.sparse.csr_array`` of float64."""
        from scipy import sparse

        indptr, indices = self.csr()
        n = self.node_count
        data = np.ones(len(indices), dtype=np.float64)
        return sparse.csr_array((data, indices, indptr), shape=(n, n))

    def validate(self) -> None:
        """Walk the whole structure and raise AssertionError on any broken invariant."""
        total = 0
        for i, nbrs in enumerate(self._adj):
            assert all(nbrs[k] < nbrs[k + 1] for k in range(len(nbrs) - 1)), f"node {i} unsorted"
            assert i not in nbrs, f"self-loop at {i}"
            for j in nbrs:
                assert 0 <= j < len(self._adj), f"dangling neighbor {j} of {i}"
                assert self.has_edge(j, i), f"asymmetric edge {i}-{j}"
            total += len(nbrs)
        assert total == 2 * self._edge_count, "degree sum != 2 * edge_count"

    def _check_node(self, i: int) -> None:
        if not 0 <= i < len(self._adj):
            raise InvalidParameterError(f"node id {i} out of range [0, {len(self._adj)})")


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"complete graph needs n >= 1, got {n}")
    g = Graph(n)
    for u in range(n):
        g._adj[u] = [v for v in range(n) if v != u]
    g._edge_count = n * (n - 1) // 2
    return g


def attach_node(g: Graph, targets: Iterable[int]) -> int:
    """Append a node linked to every id in ``targets``; return its id."""
    targets = list(targets)
    if not targets:
        raise InvalidParameterError("target set is empty")
    if len(set(targets)) != len(targets):
        raise InvalidParameterError(f"duplicate targets in {sorted(targets)}")
    n = g.node_count
    for t in targets:
        if not 0 <= t < n:
            raise InvalidParameterError(f"target {t} out of range [0, {n})")
    new = g.add_node()
    for t in sorted(targets):
        # new id exceeds every existing id, so appending keeps lists sorted
        g._adj[t].append(new)
        g._adj[new].append(t)
    g._edge_count += len(targets)
    return new


def mean_degree(g: Graph) -> float:
    if g.node_count == 0:
        raise InvalidParameterError("mean degree of an empty graph")
    return 2 * g.edge_count / g.node_count


def write_edgelist(g: Graph, path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(f"{u} {v}\n" for u, v in g.edges())


def format_edgelist(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def read_edgelist(path: str | Path, node_count: int | None = None) -> Graph:
    """Parse the canonical "u v" edge-list format.

    Node count defaults to max id + 1. Lines must be two nonnegative decimal
    ids; blank lines are tolerated, anything else raises EdgeListParseError.
    """
    edges = []
    seen = set()
    max_id = -1
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
                raise EdgeListParseError(path, lineno, f"expected 'u v', got {line.rstrip()!r}")
            u, v = int(parts[0]), int(parts[1])
            if u == v:
                raise EdgeListParseError(path, lineno, f"self-loop on node {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise EdgeListParseError(path, lineno, f"duplicate edge {e}")
            seen.add(e)
            edges.append(e)
            max_id = max(max_id, u, v)
    n = max_id + 1 if node_count is None else node_count
    if n <= max_id:
        raise InvalidParameterError(f"node_count {n} too small for id {max_id}")
    g = Graph(n)
    for u, v in sorted(edges):
        g._adj[u].append(v)
        g._adj[v].append(u)
    for nbrs in g._adj:
        nbrs.sort()
    g._edge_count = len(edges)
    return g
