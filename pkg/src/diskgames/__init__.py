"""Maker-Breaker games on random geometric graphs.

The package combines exact geometric area formulas, the random geometric
graph edge process with hitting-radius detection, a deterministic dissection
of the unit square into dense and sparse regions, local game strategies
(path, matching and blob-cycle games), grand strategies for the connectivity,
Hamilton cycle and perfect matching games, and a Monte Carlo harness that
compares observed hitting probabilities against closed-form limits.
"""

from diskgames.geometry import (
    DiskPairFrame,
    chernoff_rate,
    chernoff_tail,
    disk_diff_area,
    disk_diff_bounds,
    disk_square_area,
    disk_square_bounds,
    dist,
    mc_area,
    mu_H,
    segments_cross,
    union_near_boundary_areas,
)
from diskgames.rgg import (
    GeometricGraph,
    PointSet,
    build_graph,
    contains_family_member,
    count_induced,
    count_low_structures,
    edge_degrees,
    edge_process,
    hitting_radius,
    min_deg_at_least,
    pm_necessary,
    sample,
)
from diskgames.dissection import Dissection, DissectionParams
from diskgames.games import (
    GameState,
    LehmanMakerStrategy,
    compute_kH,
    play_game,
    solve_exact,
    two_tree_packing,
    verify_hamilton_cycle,
    verify_perfect_matching,
)
from diskgames.grand import (
    GrandMakerStrategy,
    GrandParams,
    MarkingPlan,
    PlanError,
    maker_connectivity,
    maker_hamilton,
    maker_perfect_matching,
    marking_plan,
    stitch_hamilton,
    stitch_perfect_matching,
    synthetic_instance,
)
from diskgames.harness import (
    ExperimentConfig,
    expected_obstruction_count,
    limit_prob,
    run_experiment,
    scaling_radius,
)

__version__ = "0.1.0"

__all__ = [
    "DiskPairFrame",
    "Dissection",
    "DissectionParams",
    "ExperimentConfig",
    "GameState",
    "GeometricGraph",
    "GrandMakerStrategy",
    "GrandParams",
    "LehmanMakerStrategy",
    "MarkingPlan",
    "PlanError",
    "PointSet",
    "build_graph",
    "chernoff_rate",
    "chernoff_tail",
    "compute_kH",
    "contains_family_member",
    "count_induced",
    "count_low_structures",
    "disk_diff_area",
    "disk_diff_bounds",
    "disk_square_area",
    "disk_square_bounds",
    "dist",
    "edge_degrees",
    "edge_process",
    "expected_obstruction_count",
    "hitting_radius",
    "limit_prob",
    "maker_connectivity",
    "maker_hamilton",
    "maker_perfect_matching",
    "marking_plan",
    "mc_area",
    "min_deg_at_least",
    "mu_H",
    "play_game",
    "pm_necessary",
    "run_experiment",
    "sample",
    "scaling_radius",
    "segments_cross",
    "solve_exact",
    "stitch_hamilton",
    "stitch_perfect_matching",
    "synthetic_instance",
    "two_tree_packing",
    "union_near_boundary_areas",
    "verify_hamilton_cycle",
    "verify_perfect_matching",
]
