"""Packing and covering of theta-minor targets: exact oracles, greedy
degree-based extraction, protrusion reduction, and an O(log OPT)
approximation driver for vertex/edge packing and covering."""

from .boundaried import BoundariedGraph, compatible, glue, split
from .certificates import (
    CoverCert,
    PackingCert,
    SubdivisionWitness,
    witness_from_subgraph,
)
from .errors import (
    CompatibilityError,
    GraphError,
    OracleSizeError,
    PreconditionError,
    ReductionFailed,
)
from .hfamily import HCollection, double_theta_graph, theta_graph
from .multigraph import (
    MultiGraph,
    are_isomorphic,
    canonical_key,
    dissolve,
    format_edge_list,
    parse_edge_list,
)
from .oracle import (
    exact_cover,
    exact_pack,
    find_subdivision,
    has_theta_minor,
    is_free,
    verify_certificate,
)

__all__ = [
    "BoundariedGraph",
    "CompatibilityError",
    "CoverCert",
    "GraphError",
    "HCollection",
    "MultiGraph",
    "OracleSizeError",
    "PackingCert",
    "PreconditionError",
    "ReductionFailed",
    "SubdivisionWitness",
    "are_isomorphic",
    "canonical_key",
    "compatible",
    "dissolve",
    "double_theta_graph",
    "exact_cover",
    "exact_pack",
    "find_subdivision",
    "format_edge_list",
    "glue",
    "has_theta_minor",
    "is_free",
    "parse_edge_list",
    "split",
    "theta_graph",
    "verify_certificate",
    "witness_from_subgraph",
]

__version__ = "0.1.0"
