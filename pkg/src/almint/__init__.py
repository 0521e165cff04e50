"""Toolkit for almost-intersecting uniform hypergraphs and multihypergraphs.

A family is [a,b]-almost intersecting when every edge instance is disjoint
from at least a and at most b other instances.  The package builds the
known extremal families, verifies degree windows, certifies them through
the elimination procedure's cross-intersecting set pairs, decomposes
families into sunflowers, and exhaustively searches small parameter spaces
with isomorphism-free reporting.
"""

from .core import (
    CapacityError,
    ConsistencyError,
    DisjointnessGraph,
    Multihypergraph,
    Verdict,
    VertexSet,
    blocking_set_exists,
    classify_components,
    disjointness_graph,
    has_mutually_disjoint_edges,
    neighborhood_partition,
    verify_almost_intersecting,
    verify_almost_t_intersecting,
)
from .constructions import (
    StarMap,
    build_complete,
    build_filled_mf,
    build_k2e,
    build_l_family,
    build_mf,
    build_mstar,
)
from .ab import (
    AbTrace,
    SetPairSequence,
    bollobas_bound,
    check_cross_intersecting,
    check_skew_cross_intersecting,
    detect_extremal_structure,
    run_ab,
)
from .sunflower import (
    Sunflower,
    SunflowerDecomposition,
    core_bound_check,
    core_multihypergraph,
    decompose,
    find_sunflower,
)
from .search import (
    SearchParams,
    SearchReport,
    brute_force_oracle,
    canonical_form,
    exhaustive_max,
    verify_extremal_claim,
)

__version__ = "0.1.0"

__all__ = [
    "AbTrace",
    "CapacityError",
    "ConsistencyError",
    "DisjointnessGraph",
    "Multihypergraph",
    "SearchParams",
    "SearchReport",
    "SetPairSequence",
    "StarMap",
    "Sunflower",
    "SunflowerDecomposition",
    "Verdict",
    "VertexSet",
    "blocking_set_exists",
    "bollobas_bound",
    "brute_force_oracle",
    "build_complete",
    "build_filled_mf",
    "build_k2e",
    "build_l_family",
    "build_mf",
    "build_mstar",
    "canonical_form",
    "check_cross_intersecting",
    "check_skew_cross_intersecting",
    "classify_components",
    "core_bound_check",
    "core_multihypergraph",
    "decompose",
    "detect_extremal_structure",
    "disjointness_graph",
    "exhaustive_max",
    "find_sunflower",
    "has_mutually_disjoint_edges",
    "neighborhood_partition",
    "run_ab",
    "verify_almost_intersecting",
    "verify_almost_t_intersecting",
    "verify_extremal_claim",
]
