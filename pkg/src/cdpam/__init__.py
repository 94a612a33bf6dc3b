"""Context-dependent preferential attachment (CDPAM) graphs: generation, theory and analysis."""

__version__ = "0.1.0"

from .errors import (
    CdpamError,
    DegenerateWeightsError,
    EdgeListParseError,
    InvalidParameterError,
    NoConvergenceError,
    UndefinedAssortativityError,
    UnfittableDataError,
)
from .generator import ModelParams, attachment_weights, generate_ba, generate_cdpam, sample_targets
from .graph import Graph, attach_node, complete_graph, mean_degree, read_edgelist, write_edgelist
from .metrics import (
    MetricsReport,
    assortativity,
    bfs_diameter,
    degree_histogram,
    global_clustering,
    local_clustering,
    metrics_report,
    triangle_count,
)
from .powerlaw import PowerLawFit, fit_powerlaw, ks_pvalue
from .spectral import SpectralOptions, algebraic_connectivity, spectral_radius
from .theory import (
    TheoryParams,
    c_offset,
    degree_density,
    expected_degree,
    expected_diameter,
    expected_distance,
    gamma_theoretical,
    harmonic,
    link_probability,
    path_probability,
)
