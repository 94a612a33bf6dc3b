"""Context-dependent preferential attachment growth and the BA baseline.

A new node links to ``m`` distinct existing nodes. Node ``i`` is picked with
probability proportional to::

    beta * k_i + theta * (k_i - mean_degree)

where the mean is over the current network (exact node count, not the
large-t approximation). The BA baseline uses weight ``k_i``.

Targets within one step are drawn without replacement by successive
sampling with the weights frozen for the whole step. Each step consumes
exactly ``m`` uniforms from a PCG64 stream seeded by ``ModelParams.seed``, so
the seed alone fixes the output graph.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np

from .errors import DegenerateWeightsError, InvalidParameterError
from .graph import Graph, attach_node, complete_graph, mean_degree

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class ModelParams:
    m0: int
    m: int
    beta: float
    theta: float
    n_steps: int
    seed: int

    def __post_init__(self):
        for name in ("m0", "m", "n_steps", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InvalidParameterError(f"{name} must be an integer, got {v!r}")
        if self.m0 < 1:
            raise InvalidParameterError(f"m0 must be >= 1, got {self.m0}")
        if not 1 <= self.m <= self.m0:
            raise InvalidParameterError(f"need 1 <= m <= m0, got m={self.m}, m0={self.m0}")
        if self.n_steps < 0:
            raise InvalidParameterError(f"n_steps must be >= 0, got {self.n_steps}")
        if not 0 <= self.seed <= _U64_MAX:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        check_context_weights(self.beta, self.theta)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["beta"] = float(d["beta"])
        d["theta"] = float(d["theta"])
        return d


def check_context_weights(beta: float, theta: float) -> None:
    if not (np.isfinite(beta) and np.isfinite(theta)):
        raise InvalidParameterError(f"beta and theta must be finite, got {beta}, {theta}")
    if not 0 < theta < beta:
        raise InvalidParameterError(f"need 0 < theta < beta, got beta={beta}, theta={theta}")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def attachment_weights(g: Graph, beta: float, theta: float) -> np.ndarray:
    """Unnormalized attachment weight of every node in ``g``."""
    check_context_weights(beta, theta)
    k = g.degrees.astype(np.float64)
    w = beta * k + theta * (k - mean_degree(g))
    _check_positive(w)
    return w


def _check_positive(w: np.ndarray) -> None:
    bad = np.flatnonzero(~(w > 0))
    if len(bad):
        raise DegenerateWeightsError(int(bad[0]), float(w[bad[0]]))


@numba.njit(cache=True)
def _pick_distinct(weights, cum, uniforms, out):
    """Successive weighted sampling without replacement.

    Draw r maps ``uniforms[r]`` onto the weight line with the intervals of
    earlier picks cut out, so each draw is proportional to the remaining
    weights. ``out`` receives the picked ids in draw order.
    """
    n = len(weights)
    m = len(out)
    chosen = np.empty(m, dtype=np.int64)  # kept sorted ascending
    removed = 0.0
    for r in range(m):
        x = uniforms[r] * (cum[n - 1] - removed)
        for q in range(r):
            c = chosen[q]
            lo = cum[c - 1] if c > 0 else 0.0
            if x >= lo:
                x += weights[c]
        idx = np.searchsorted(cum, x, side="right")
        if idx >= n:
            idx = n - 1
        # rounding can land on a removed interval boundary; step to a free id
        step = 1
        while _contains(chosen, r, idx):
            idx += step
            if idx >= n:
                idx = n - 1
                step = -1
        out[r] = idx
        pos = r
        while pos > 0 and chosen[pos - 1] > idx:
            chosen[pos] = chosen[pos - 1]
            pos -= 1
        chosen[pos] = idx
        removed += weights[idx]


@numba.njit(cache=True)
def _contains(sorted_ids, count, value):
    for q in range(count):
        if sorted_ids[q] == value:
            return True
    return False


def sample_targets(weights, m: int, rng: np.random.Generator) -> list[int]:
    """Draw ``m`` distinct ids with probability proportional to ``weights``.

    Consumes exactly ``m`` uniforms from ``rng``. Returns ids in draw order.
    """
    w = np.ascontiguousarray(weights, dtype=np.float64)
    if m < 1 or m > len(w):
        raise InvalidParameterError(f"cannot draw {m} distinct ids from {len(w)}")
    _check_positive(w)
    out = np.empty(m, dtype=np.int64)
    _pick_distinct(w, np.cumsum(w), rng.random(m), out)
    return out.tolist()


@numba.njit(cache=True)
def _grow(degrees, n0, edge_total, m, beta, theta, pure_degree, uniforms, targets):
    """Run the growth loop in place; return (bad_node, bad_weight) or (-1, 0)."""
    n_steps = uniforms.shape[0]
    out = np.empty(m, dtype=np.int64)
    for s in range(n_steps):
        n = n0 + s
        w = np.empty(n, dtype=np.float64)
        if pure_degree:
            for i in range(n):
                w[i] = float(degrees[i])
        else:
            mean = 2 * edge_total / n
            for i in range(n):
                k = float(degrees[i])
                w[i] = beta * k + theta * (k - mean)
        for i in range(n):
            if not w[i] > 0:
                return i, w[i]
        cum = np.empty(n, dtype=np.float64)
        acc = 0.0
        for i in range(n):
            acc += w[i]
            cum[i] = acc
        _pick_distinct(w, cum, uniforms[s], out)
        for r in range(m):
            targets[s, r] = out[r]
            degrees[out[r]] += 1
        degrees[n] = m
        edge_total += m
    return -1, 0.0


def _run(params: ModelParams, pure_degree: bool) -> Graph:
    g = complete_graph(params.m0)
    if params.n_steps == 0:
        return g
    total = params.m0 + params.n_steps
    degrees = np.zeros(total, dtype=np.int64)
    degrees[: params.m0] = params.m0 - 1
    rng = make_rng(params.seed)
    uniforms = rng.random((params.n_steps, params.m))
    targets = np.empty((params.n_steps, params.m), dtype=np.int64)
    bad, w = _grow(
        degrees, params.m0, g.edge_count, params.m,
        float(params.beta), float(params.theta), pure_degree, uniforms, targets,
    )
    if bad >= 0:
        raise DegenerateWeightsError(int(bad), float(w))
    for row in targets.tolist():
        attach_node(g, row)
    return g


def generate_cdpam(params: ModelParams) -> Graph:
    """Grow a CDPAM graph from K_m0 by ``params.n_steps`` attachments.

    Requires ``m0 <= 2m + 1``: under that condition every weight stays at
    least ``m * (beta - theta)``, so growth can never hit a degenerate step.
    """
    if params.m0 > 2 * params.m + 1:
        raise InvalidParameterError(
            f"CDPAM growth needs m0 <= 2m+1 for positive weights, got m0={params.m0}, m={params.m}"
        )
    return _run(params, pure_degree=False)


def generate_ba(params: ModelParams) -> Graph:
    """Barabasi-Albert growth (weight = degree) under the same sampling discipline."""
    return _run(params, pure_degree=True)


def generate_reference(params: ModelParams, model: str = "cdpam") -> Graph:
    """Step-by-step generation through the public weight and sampling functions.

    Slow; exists so the compiled growth loop can be checked against it.
    """
    if model not in ("cdpam", "ba"):
        raise InvalidParameterError(f"unknown model {model!r}")
    g = complete_graph(params.m0)
    rng = make_rng(params.seed)
    for _ in range(params.n_steps):
        if model == "ba":
            w = g.degrees.astype(np.float64)
        else:
            w = attachment_weights(g, params.beta, params.theta)
        attach_node(g, sample_targets(w, params.m, rng))
    return g
