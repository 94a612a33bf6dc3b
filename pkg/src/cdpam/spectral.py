"""Algebraic connectivity and spectral radius.

Algebraic connectivity here is the second-SMALLEST eigenvalue of the
Laplacian ``L = D - A`` (the Fiedler value), which is positive exactly when
the graph is connected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .errors import InvalidParameterError, NoConvergenceError
from .graph import Graph
from .metrics import _bfs

_STABLE_STEPS = 5


@dataclass(frozen=True)
class SpectralOptions:
    tolerance: float = 1e-8
    max_iterations: int = 10000
    dense_cutoff: int = 2000

    def __post_init__(self):
        if not 0 < self.tolerance <= 1e-2:
            raise InvalidParameterError(f"tolerance must be in (0, 1e-2], got {self.tolerance}")
        if self.max_iterations < 1:
            raise InvalidParameterError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.dense_cutoff < 2:
            raise InvalidParameterError(f"dense_cutoff must be >= 2, got {self.dense_cutoff}")


def _dense_adjacency(g: Graph) -> np.ndarray:
    n = g.node_count
    a = np.zeros((n, n))
    indptr, indices = g.csr()
    rows = np.repeat(np.arange(n), np.diff(indptr))
    a[rows, indices] = 1.0
    return a


def _is_connected(g: Graph) -> bool:
    n = g.node_count
    indptr, indices = g.csr()
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    return _bfs(indptr, indices, 0, dist, queue)[2] == n


def algebraic_connectivity(g: Graph, opts: SpectralOptions | None = None) -> float:
    """Fiedler value of ``g``; exactly 0.0 for disconnected graphs.

    Dense symmetric eigendecomposition up to ``opts.dense_cutoff`` nodes.
    Larger graphs run Lanczos on ``sigma*I - L`` restricted to the complement
    of the all-ones vector (every product is re-projected), then polish the
    eigenvalue with the Rayleigh quotient of ``L`` itself.
    """
    opts = opts or SpectralOptions()
    n = g.node_count
    if n == 0:
        raise InvalidParameterError("algebraic connectivity of an empty graph")
    if n == 1 or not _is_connected(g):
        return 0.0
    deg = g.degrees.astype(np.float64)
    if n <= opts.dense_cutoff:
        lap = np.diag(deg) - _dense_adjacency(g)
        vals = scipy.linalg.eigh(lap, eigvals_only=True, subset_by_index=[0, 1])
        return max(float(vals[1]), 0.0)

    adj = g.adjacency_matrix()
    sigma = 2.0 * deg.max()  # upper bound on the Laplacian spectrum

    def project(x):
        return x - x.mean(axis=0)

    def shifted(x):
        x = project(x.reshape(n, -1))
        lx = deg[:, None] * x - adj @ x
        return project(sigma * x - lx)

    op = LinearOperator((n, n), matvec=shifted, matmat=shifted, dtype=np.float64)
    v0 = project(deg.copy())
    try:
        vals, vecs = eigsh(
            op, k=1, which="LA", v0=v0, tol=opts.tolerance, maxiter=opts.max_iterations
        )
    except ArpackNoConvergence as exc:
        if len(exc.eigenvalues):
            est = sigma - float(exc.eigenvalues[0])
            raise NoConvergenceError("Lanczos did not converge for lambda2", (est, est)) from exc
        raise NoConvergenceError(
            "Lanczos did not converge for lambda2", (0.0, float(deg.min()))
        ) from exc
    x = project(vecs[:, 0])
    x /= np.linalg.norm(x)
    rq = float(x @ (deg * x - adj @ x))
    return max(rq, 0.0)


def spectral_radius(g: Graph, opts: SpectralOptions | None = None) -> float:
    """Largest adjacency eigenvalue (the spectral radius for undirected graphs).

    Above the dense cutoff: power iteration on ``A + I`` starting from the
    degree vector. The unit shift breaks the +-rho tie of bipartite graphs.
    Stops once the Rayleigh quotient's relative change stays below
    ``opts.tolerance`` for five consecutive steps.
    """
    opts = opts or SpectralOptions()
    n = g.node_count
    if n == 0:
        raise InvalidParameterError("spectral radius of an empty graph")
    if g.edge_count == 0:
        return 0.0
    if n <= opts.dense_cutoff:
        vals = scipy.linalg.eigh(_dense_adjacency(g), eigvals_only=True, subset_by_index=[n - 1, n - 1])
        return float(vals[0])

    adj = g.adjacency_matrix()
    x = g.degrees.astype(np.float64)
    x /= np.linalg.norm(x)
    rq_prev = float(x @ (adj @ x))
    stable = 0
    for _ in range(opts.max_iterations):
        y = adj @ x + x
        x = y / np.linalg.norm(y)
        rq = float(x @ (adj @ x))
        if abs(rq - rq_prev) <= opts.tolerance * abs(rq):
            stable += 1
            if stable >= _STABLE_STEPS:
                return rq
        else:
            stable = 0
        rq_prev = rq
    # Rayleigh quotient is a lower bound; the max row sum of |A| bounds from above
    raise NoConvergenceError(
        "power iteration did not converge for the spectral radius",
        (rq_prev, float(g.degrees.max())),
    )
