"""Exact solvers for the minimum-broadcast problem on unit-disk graphs in strips.

A broadcast set is a connected dominating set that contains a designated
source.  The package provides the narrow-strip solver, the hop-bounded
narrow-strip solver, the planar 2-hop solver, the any-width window DP, a
brute-force oracle, instance file I/O, generators, and an SVG renderer.
"""

from .model import (
    BroadcastSet,
    ContractError,
    InfeasibleError,
    InstanceError,
    LevelPartition,
    NARROW_LIMIT,
    Point,
    StripInstance,
    UnitDiskGraph,
    ValidationReport,
    build_graph,
    compute_levels,
    core_region,
    make_broadcast_set,
    make_instance,
    validate_broadcast,
)
from .narrow import solve_narrow
from .hopdp import solve_hop
from .twohop import solve_two_hop
from .wide import solve_wide, solve_wide_cds, mu
from .oracle import brute_min_broadcast, brute_min_cds, OracleConfig

__all__ = [
    "BroadcastSet",
    "ContractError",
    "InfeasibleError",
    "InstanceError",
    "LevelPartition",
    "NARROW_LIMIT",
    "OracleConfig",
    "Point",
    "StripInstance",
    "UnitDiskGraph",
    "ValidationReport",
    "brute_min_broadcast",
    "brute_min_cds",
    "build_graph",
    "compute_levels",
    "core_region",
    "make_broadcast_set",
    "make_instance",
    "mu",
    "solve_hop",
    "solve_narrow",
    "solve_two_hop",
    "solve_wide",
    "solve_wide_cds",
    "validate_broadcast",
]

__version__ = "0.1.0"
