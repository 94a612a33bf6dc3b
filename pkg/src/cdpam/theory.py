"""Closed-form mean-field results for CDPAM graphs.

All logarithms are natural. Arrival times ``t_i`` are node ids as produced
by the generator (positive reals here, so curves can be evaluated off-grid).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError

EULER_GAMMA = 0.5772156649015329

# Above this n the harmonic number uses its asymptotic expansion.
_HARMONIC_EXACT_LIMIT = 10**4


def _check(beta: float, theta: float) -> None:
    if not (math.isfinite(beta) and math.isfinite(theta)):
        raise InvalidParameterError(f"beta and theta must be finite, got {beta}, {theta}")
    if not 0 < theta < beta:
        raise InvalidParameterError(f"need 0 < theta < beta, got beta={beta}, theta={theta}")


def gamma_theoretical(beta: float, theta: float) -> float:
    """Degree exponent ``1 + 2 beta / (beta + theta)``, in (2, 3)."""
    _check(beta, theta)
    return 1 + 2 * beta / (beta + theta)


def c_offset(m: int, beta: float, theta: float) -> float:
    """Degree offset ``2 m theta / (beta + theta)``, in (0, m)."""
    _check(beta, theta)
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    return 2 * m * theta / (beta + theta)


@dataclass(frozen=True)
class TheoryParams:
    """Inputs to the closed forms; ``gamma``, ``c`` and ``K`` are derived.

    ``r`` is the additive constant in the distance formulas. It defaults to
    the Euler-Mascheroni constant.
    """

    m: int
    beta: float
    theta: float
    r: float = EULER_GAMMA
    gamma: float = field(init=False)
    c: float = field(init=False)
    K: float = field(init=False)

    def __post_init__(self):
        g = gamma_theoretical(self.beta, self.theta)
        c = c_offset(self.m, self.beta, self.theta)
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "K", (self.beta + self.theta) * (self.m - c) / (2 * self.beta))


def expected_degree(t: float, t_i: float, p: TheoryParams) -> float:
    """Mean-field degree at time ``t`` of the node that arrived at ``t_i``."""
    if not 0 < t_i <= t:
        raise InvalidParameterError(f"need 0 < t_i <= t, got t_i={t_i}, t={t}")
    return (p.m - p.c) * (t / t_i) ** (1 / (p.gamma - 1)) + p.c


def degree_density(k: float, p: TheoryParams) -> float:
    """Large-t degree density ``(gamma-1) (m-c)^(gamma-1) (k-c)^(-gamma)``."""
    if not k > p.c:
        raise InvalidParameterError(f"density defined for k > c={p.c}, got {k}")
    g = p.gamma
    return (g - 1) * (p.m - p.c) ** (g - 1) * (k - p.c) ** (-g)


class LinkVariant(enum.Enum):
    AS_PRINTED = "as_printed"
    DERIVATION_CONSISTENT = "derivation_consistent"


def link_probability(
    t_i: float, t_j: float, p: TheoryParams, variant: LinkVariant | str = LinkVariant.AS_PRINTED
) -> float:
    """Probability that the node arriving at ``t_j`` links to the older node ``t_i``.

    ``as_printed`` keeps the extra ``m(1-2 theta)/(2 beta t_j)`` term; the
    ``derivation_consistent`` variant drops it. They coincide at theta=0.5.
    """
    variant = LinkVariant(variant)
    if not 0 < t_i < t_j:
        raise InvalidParameterError(f"need 0 < t_i < t_j, got t_i={t_i}, t_j={t_j}")
    a = 1 / (p.gamma - 1)
    lead = (p.m - p.c) / ((p.gamma - 1) * t_i**a * t_j ** (1 - a))
    if variant is LinkVariant.DERIVATION_CONSISTENT:
        return lead
    return lead + p.m * (1 - 2 * p.theta) / (2 * p.beta * t_j)


def harmonic(n: int) -> float:
    """n-th harmonic number.

    Compensated summation up to 10**4; beyond that the asymptotic series
    through the n**-4 term, whose truncation error is below 1e-25 there.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameterError(f"harmonic number needs an integer n >= 1, got {n}")
    n = int(n)
    if n <= _HARMONIC_EXACT_LIMIT:
        return math.fsum(1 / k for k in range(1, n + 1))
    inv = 1 / n
    inv2 = inv * inv
    return math.log(n) + EULER_GAMMA + inv / 2 - inv2 / 12 + inv2 * inv2 / 120


def _scaled_age(t_i: float, t_j: float, p: TheoryParams) -> float:
    a = 1 / (p.gamma - 1)
    return t_i**a * t_j ** (1 - a)


def path_probability(t_i: float, t_j: float, l: int, n: int, p: TheoryParams) -> float:
    """Probability that nodes ``t_i < t_j`` are joined by a path of length <= ``l``
    in a network of ``n`` nodes."""
    if not 0 < t_i < t_j <= n:
        raise InvalidParameterError(f"need 0 < t_i < t_j <= n, got {t_i}, {t_j}, {n}")
    if l < 1:
        raise InvalidParameterError(f"path length must be >= 1, got {l}")
    h = harmonic(n)
    # exponent computed in log space so large l neither overflows nor underflows
    log_x = l * math.log(p.K) + (l - 1) * math.log(h) - math.log(_scaled_age(t_i, t_j, p))
    if log_x > 700:
        return 1.0
    return -math.expm1(-math.exp(log_x))


def expected_distance(t_i: float, t_j: float, n: int, p: TheoryParams) -> float:
    """Expected hop distance between the nodes that arrived at ``t_i < t_j``."""
    if not 0 < t_i < t_j <= n:
        raise InvalidParameterError(f"need 0 < t_i < t_j <= n, got {t_i}, {t_j}, {n}")
    denom = math.log(p.K * harmonic(n))
    if not denom > 0:
        raise InvalidParameterError(f"distance formula needs K*H_n > 1, got K={p.K}, n={n}")
    a = 1 / (p.gamma - 1)
    num = (1 - a) * math.log(t_j) + a * math.log(t_i) - math.log(p.K) - p.r
    return num / denom + 0.5


def expected_diameter(n: int, p: TheoryParams) -> float:
    """Expected diameter: distance between the first and the n-th node."""
    if n < 2:
        raise InvalidParameterError(f"diameter needs n >= 2, got {n}")
    return expected_distance(1, n, n, p)
