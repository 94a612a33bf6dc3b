import numpy as np
import pytest

from cdpam.graph import Graph, complete_graph


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def k4_minus_edge():
    g = complete_graph(4)
    return Graph.from_edges(4, [e for e in g.edges() if e != (2, 3)])


def random_graph(rng, n, p):
    """G(n, p) on n nodes; used as oracle input, may be disconnected."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def dense_adjacency(g):
    a = np.zeros((g.node_count, g.node_count))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


@pytest.fixture
def small_graphs():
    rng = np.random.default_rng(20240601)
    graphs = [path_graph(4), cycle_graph(5), star_graph(3), k4_minus_edge(), complete_graph(6)]
    for _ in range(40):
        n = int(rng.integers(2, 40))
        graphs.append(random_graph(rng, n, float(rng.uniform(0.05, 0.6))))
    return graphs


_ORACLE_MAX = 10**7


class OraclePowerLaw:
    """Explicit pmf over [x_min, 1e7] inverted by search; independent of the package sampler."""

    def __init__(self, gamma, x_min):
        xs = np.arange(x_min, _ORACLE_MAX + 1, dtype=np.float64)
        pmf = xs**-gamma
        self.xs = xs.astype(np.int64)
        self.cdf = np.cumsum(pmf) / pmf.sum()

    def sample(self, rng, size):
        idx = np.searchsorted(self.cdf, rng.random(size), side="right")
        return self.xs[np.minimum(idx, len(self.xs) - 1)]


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Records one summary line per acceptance criterion for the terminal report."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
