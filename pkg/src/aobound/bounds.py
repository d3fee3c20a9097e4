"""Upper bounds on the number of AND nodes in the context-minimal AND/OR graph.

Three bounds are computed over a bucket tree:

* ``asymptotic``: ``n * k**(w + 1)``
* ``twb``: sum over clusters of the product of member domain sizes
* ``hwb``: like ``twb`` but each cluster term is tightened by greedily
  covering cluster variables with tight functions

All values are exact Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .decomposition import BucketTree, Cluster, build_bucket_tree, tree_width
from .graph import build_primal_graph, minfill_ordering, triangulate, Ordering
from .model import FunctionTable, GraphicalModel


@dataclass(frozen=True)
class Covering:
    chosen: tuple[int, ...]
    covered: frozenset[int]
    uncovered: frozenset[int]


@dataclass(frozen=True)
class ClusterBound:
    variable: int
    twb: int
    hwb: int
    covering: Covering


@dataclass
class BoundReport:
    ordering_seed: int | None
    width: int
    asymptotic: int
    twb: int
    hwb: int
    per_cluster: list[ClusterBound] = field(default_factory=list)
    ordering: Ordering | None = None

    def to_dict(self) -> dict:
        return {
            "ordering_seed": self.ordering_seed,
            "w": self.width,
            "asymptotic": self.asymptotic,
            "twb": self.twb,
            "hwb": self.hwb,
            "log10": {
                "asymptotic": log10_int(self.asymptotic),
                "twb": log10_int(self.twb),
                "hwb": log10_int(self.hwb),
            },
            "per_cluster": [
                {
                    "variable": c.variable,
                    "twb": c.twb,
                    "hwb": c.hwb,
                    "covering": list(c.covering.chosen),
                    "uncovered": sorted(c.covering.uncovered),
                }
                for c in self.per_cluster
            ],
        }


def log10_int(x: int) -> float:
    """log10 of a non-negative integer of any size; ``-inf`` for zero."""
    if x < 0:
        raise ValueError("log10 of a negative bound")
    if x == 0:
        return float("-inf")
    bits = x.bit_length()
    if bits < 1000:
        return math.log10(x)
    shift = bits - 64
    return math.log10(x >> shift) + shift * math.log10(2)


def asymptotic_bound(model: GraphicalModel, w: int) -> int:
    k = max(model.domains, default=1)
    return model.n * k ** (w + 1)


def cluster_twb(cluster: Cluster, domains: Sequence[int]) -> int:
    return math.prod(domains[v] for v in cluster.chi)


def twb(tree: BucketTree, model: GraphicalModel) -> tuple[int, list[int]]:
    domains = model.domains
    terms = [cluster_twb(tree.clusters[x], domains) for x in range(model.n)]
    return sum(terms), terms


def greedy_covering(
    cluster: Cluster, candidates: Iterable[FunctionTable], domains: Sequence[int]
) -> Covering:
    """Greedy weighted cover of ``cluster.chi`` by tight functions.

    Repeatedly adds the candidate minimizing
    ``tightness / prod(domain of its still-uncovered scope variables)``
    while that ratio is below 1.  Ratios are compared by integer
    cross-multiplication; equal ratios go to the lowest function id.
    Candidates touching no uncovered variable are never selected.
    """
    uncov = set(cluster.chi)
    pool = sorted(candidates, key=lambda f: f.id)
    chosen: list[int] = []
    used: set[int] = set()
    while uncov:
        best = None
        best_t = best_d = 0
        for f in pool:
            if f.id in used:
                continue
            inter = [v for v in f.scope if v in uncov]
            if not inter:
                continue
            d = math.prod(domains[v] for v in inter)
            t = f.tightness
            # t/d < best_t/best_d; strict so the earlier (lower id) wins ties
            if best is None or t * best_d < best_t * d:
                best, best_t, best_d = f, t, d
        if best is None or best_t >= best_d:
            break
        chosen.append(best.id)
        used.add(best.id)
        uncov.difference_update(best.scope)
    return Covering(tuple(chosen), frozenset(cluster.chi - uncov), frozenset(uncov))


def covering_term(covering: Covering, functions: Sequence[FunctionTable], domains: Sequence[int]) -> int:
    term = math.prod(functions[j].tightness for j in covering.chosen)
    return term * math.prod(domains[v] for v in covering.uncovered)


def _candidate_lists(tree: BucketTree, model: GraphicalModel, include_ancestors: bool) -> list[list[int]]:
    """Functions usable when covering each cluster.

    A function placed at the cluster itself or (optionally) at a proper
    ancestor has its scope fully instantiated when search reaches the
    cluster.  Only those sharing a variable with chi can ever be chosen, so
    the lists are built from the variable incidence instead of walking the
    whole ancestor path.
    """
    n = model.n
    if not include_ancestors:
        return [sorted(tree.clusters[x].psi) for x in range(n)]

    home = {}
    for c in tree.clusters:
        for fid in c.psi:
            home[fid] = c.variable

    # Euler-tour intervals for O(1) ancestor tests
    kids = tree.children()
    enter = [0] * n
    leave = [0] * n
    clock = 0
    for root in tree.roots:
        stack = [(root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                leave[x] = clock
                clock += 1
                continue
            enter[x] = clock
            clock += 1
            stack.append((x, True))
            for c in reversed(kids[x]):
                stack.append((c, False))

    incident: list[list[int]] = [[] for _ in range(n)]
    for f in model.functions:
        if f.id in home:
            for v in f.scope:
                incident[v].append(f.id)

    out = []
    for x in range(n):
        cands = set()
        for v in tree.clusters[x].chi:
            for fid in incident[v]:
                h = home[fid]
                if enter[h] <= enter[x] and leave[x] <= leave[h]:
                    cands.add(fid)
        out.append(sorted(cands))
    return out


def hwb(
    tree: BucketTree, model: GraphicalModel, include_ancestors: bool = True
) -> tuple[int, list[ClusterBound]]:
    domains = model.domains
    funcs = model.functions
    cands = _candidate_lists(tree, model, include_ancestors)
    per_cluster = []
    for x in range(model.n):
        cluster = tree.clusters[x]
        cov = greedy_covering(cluster, (funcs[j] for j in cands[x]), domains)
        per_cluster.append(
            ClusterBound(x, cluster_twb(cluster, domains), covering_term(cov, funcs, domains), cov)
        )
    return sum(c.hwb for c in per_cluster), per_cluster


def evaluate_tree(
    tree: BucketTree, model: GraphicalModel, include_ancestors: bool = True
) -> BoundReport:
    w = tree_width(tree)
    total_h, per_cluster = hwb(tree, model, include_ancestors)
    total_t = sum(c.twb for c in per_cluster)
    return BoundReport(
        ordering_seed=tree.ordering.seed,
        width=w,
        asymptotic=asymptotic_bound(model, w),
        twb=total_t,
        hwb=total_h,
        per_cluster=per_cluster,
        ordering=tree.ordering,
    )


def tree_for_ordering(model: GraphicalModel, ordering: Ordering, graph=None) -> BucketTree:
    graph = graph if graph is not None else build_primal_graph(model)
    filled, _ = triangulate(graph, ordering)
    return build_bucket_tree(model, filled, ordering)


def evaluate_ordering(
    model: GraphicalModel, ordering: Ordering, include_ancestors: bool = True, graph=None
) -> BoundReport:
    return evaluate_tree(tree_for_ordering(model, ordering, graph), model, include_ancestors)


@dataclass
class BestBounds:
    best: BoundReport
    reports: list[BoundReport]

    @property
    def min_width(self) -> int:
        return min(r.width for r in self.reports)

    @property
    def min_asymptotic(self) -> int:
        return min(r.asymptotic for r in self.reports)

    @property
    def min_twb(self) -> int:
        return min(r.twb for r in self.reports)

    @property
    def min_hwb(self) -> int:
        return min(r.hwb for r in self.reports)


def ordering_seed(base_seed: int, index: int) -> int:
    """Seed of the ``index``-th ordering in a sweep."""
    return base_seed + index


def best_bounds(
    model: GraphicalModel,
    num_orderings: int = 100,
    base_seed: int = 0,
    include_ancestors: bool = True,
) -> BestBounds:
    """Evaluate ``num_orderings`` minfill orderings and pick the best one.

    The best report minimizes hwb, then twb, then the ordering index.
    """
    if num_orderings < 1:
        raise ValueError("num_orderings must be >= 1")
    graph = build_primal_graph(model)
    reports = []
    for i in range(num_orderings):
        order = minfill_ordering(graph, ordering_seed(base_seed, i))
        reports.append(evaluate_ordering(model, order, include_ancestors, graph))
    best = min(range(num_orderings), key=lambda i: (reports[i].hwb, reports[i].twb, i))
    return BestBounds(reports[best], reports)
