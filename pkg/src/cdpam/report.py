"""Flat JSON-ready reports combining structural, spectral and power-law results."""

from __future__ import annotations

import math

from .errors import CdpamError
from .graph import Graph
from .metrics import (
    EXACT_DIAMETER_CUTOFF,
    assortativity,
    bfs_diameter,
    global_clustering,
    triangle_count,
)
from .powerlaw import fit_powerlaw, ks_pvalue
from .spectral import SpectralOptions, algebraic_connectivity, spectral_radius

REPORT_KEYS = (
    "nodes",
    "edges",
    "clustering",
    "assortativity",
    "triangles",
    "diameter",
    "diameter_is_estimate",
    "lambda2",
    "spectral_radius",
    "gamma_hat",
    "x_min",
    "ks",
    "p_value",
)

ALL_METRICS = frozenset(
    {"clustering", "assortativity", "triangles", "diameter", "lambda2", "spectral_radius", "powerlaw"}
)


def build_report(
    g: Graph,
    *,
    metrics=ALL_METRICS,
    spectral: SpectralOptions | None = None,
    exact_diameter_cutoff: int = EXACT_DIAMETER_CUTOFF,
    bootstrap: int = 0,
    seed: int | None = None,
) -> dict:
    """Compute the requested metrics into a flat dict keyed by ``REPORT_KEYS``.

    A metric that is undefined for ``g`` is stored as None with the cause in
    ``<key>_reason``. Metrics not requested are omitted.
    """
    unknown = set(metrics) - ALL_METRICS
    if unknown:
        raise ValueError(f"unknown metrics {sorted(unknown)}")
    spectral = spectral or SpectralOptions()
    out: dict = {"nodes": g.node_count, "edges": g.edge_count}

    def attempt(key, fn):
        try:
            out[key] = fn()
        except CdpamError as exc:
            out[key] = None
            out[f"{key}_reason"] = str(exc)

    if "clustering" in metrics:
        attempt("clustering", lambda: global_clustering(g))
    if "assortativity" in metrics:
        attempt("assortativity", lambda: assortativity(g))
    if "triangles" in metrics:
        out["triangles"] = triangle_count(g)
    if "diameter" in metrics:
        d = bfs_diameter(g, exact_diameter_cutoff)
        if math.isinf(d.value):
            out["diameter"] = None
            out["diameter_reason"] = "graph is disconnected"
        else:
            out["diameter"] = int(d.value)
        out["diameter_is_estimate"] = d.is_estimate
    if "lambda2" in metrics:
        attempt("lambda2", lambda: algebraic_connectivity(g, spectral))
    if "spectral_radius" in metrics:
        attempt("spectral_radius", lambda: spectral_radius(g, spectral))
    if "powerlaw" in metrics:
        try:
            fit = fit_powerlaw(g.degrees)
        except CdpamError as exc:
            fit = None
            for key in ("gamma_hat", "x_min", "ks", "p_value"):
                out[key] = None
                out[f"{key}_reason"] = str(exc)
        if fit is not None:
            out["gamma_hat"] = fit.gamma_hat
            out["x_min"] = fit.x_min
            out["ks"] = fit.ks_distance
            if bootstrap:
                if seed is None:
                    raise ValueError("a seed is required for the bootstrap p-value")
                out["p_value"] = ks_pvalue(g.degrees, fit, bootstrap, seed)
            else:
                out["p_value"] = None
                out["p_value_reason"] = "bootstrap not requested"
    return out
