"""Bounding AND/OR search graph size of graphical models via bucket tree decompositions."""

from .bounds import (
    BestBounds,
    BoundReport,
    Covering,
    asymptotic_bound,
    best_bounds,
    evaluate_ordering,
    greedy_covering,
    hwb,
    twb,
)
from .decomposition import (
    BucketTree,
    Cluster,
    build_bucket_tree,
    check_hypertree_condition,
    tree_width,
    verify_tree_decomposition,
)
from .graph import Ordering, PrimalGraph, build_primal_graph, minfill_ordering, triangulate
from .model import (
    Evidence,
    FunctionTable,
    GraphicalModel,
    Kind,
    Variable,
    apply_evidence,
    make_model,
    model_stats,
    parse_evidence,
    parse_model,
    serialize_model,
    tightness_ratio,
)
from .oracle import PseudoTree, brute_force_count, build_pseudo_tree, count_context_minimal

__version__ = "0.1.0"
