"""Exact AND-node counts of the context-minimal AND/OR search graph.

Only consistent AND nodes are counted: a value whose own bucket functions
evaluate to zero is pruned without being counted.  OR nodes are never
counted.  Constant (empty-scope) functions are ignored, as everywhere else
in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .decomposition import BucketTree
from .model import GraphicalModel


class NodeLimitExceeded(RuntimeError):
    def __init__(self, limit: int, partial: int):
        self.limit = limit
        self.partial = partial
        super().__init__(
            f"intractable at configured limit: more than {limit} context cache entries "
            f"(partial count {partial})"
        )


class BruteForceCapExceeded(RuntimeError):
    pass


DEFAULT_NODE_LIMIT = 10**8
DEFAULT_BRUTE_FORCE_CAP = 10**6


@dataclass(frozen=True)
class PseudoTree:
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def roots(self) -> list[int]:
        return [x for x, p in enumerate(self.parent) if p is None]

    def path(self, x: int) -> list[int]:
        """Variables from the root down to ``x`` inclusive."""
        out = [x]
        p = self.parent[x]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        out.reverse()
        return out


def build_pseudo_tree(tree: BucketTree) -> PseudoTree:
    parent = tuple(c.parent for c in tree.clusters)
    return PseudoTree(parent, tuple(tuple(k) for k in tree.children()))


@dataclass
class CountResult:
    total: int
    per_layer: list[int]
    cache_entries: int


class _Layer:
    """Precomputed evaluation data for one variable's search layer."""

    __slots__ = ("var", "context", "domain", "checks", "children")

    def __init__(self, var, context, domain, checks, children):
        self.var = var
        self.context = context
        self.domain = domain
        self.checks = checks
        self.children = children


def count_context_minimal(
    model: GraphicalModel, tree: BucketTree, node_limit: int = DEFAULT_NODE_LIMIT
) -> CountResult:
    """Depth-first AND/OR traversal with full context caching.

    The cache is keyed by ``(variable, assignment to its context)`` and
    stores the number of consistent values found on first expansion; the
    stored numbers sum to the returned total.
    """
    pt = build_pseudo_tree(tree)
    domains = model.domains
    eps = model.zero_epsilon
    layers = []
    for x in range(model.n):
        cluster = tree.clusters[x]
        context = tuple(sorted(cluster.chi - {x}))
        checks = []
        for fid in sorted(cluster.psi):
            f = model.functions[fid]
            shape = tuple(domains[v] for v in f.scope)
            checks.append((f.scope, f.values.reshape(shape) if shape else f.values))
        layers.append(_Layer(x, context, domains[x], checks, pt.children[x]))

    cache: dict[tuple[int, tuple[int, ...]], int] = {}
    per_layer = [0] * model.n
    total = 0
    stack: list[tuple[int, tuple[int, ...]]] = [(r, ()) for r in reversed(pt.roots)]
    while stack:
        x, ctx = stack.pop()
        key = (x, ctx)
        if key in cache:
            continue
        if len(cache) >= node_limit:
            raise NodeLimitExceeded(node_limit, total)
        layer = layers[x]
        assignment = dict(zip(layer.context, ctx))
        consistent = 0
        for val in range(layer.domain):
            assignment[x] = val
            ok = True
            for scope, table in layer.checks:
                if table[tuple(assignment[v] for v in scope)] <= eps:
                    ok = False
                    break
            if not ok:
                continue
            consistent += 1
            for c in reversed(layer.children):
                stack.append((c, tuple(assignment[v] for v in layers[c].context)))
        cache[key] = consistent
        per_layer[x] += consistent
        total += consistent
    return CountResult(total, per_layer, len(cache))


def brute_force_count(
    model: GraphicalModel, tree: BucketTree, cap: int = DEFAULT_BRUTE_FORCE_CAP
) -> CountResult:
    """Count by exhaustive enumeration of every root-to-variable path assignment.

    For each variable ``x`` all assignments to its pseudo-tree path are
    enumerated; those satisfying every bucket function on the path are
    projected onto ``chi(x)`` and the distinct projections are counted.
    """
    pt = build_pseudo_tree(tree)
    domains = model.domains
    for x in range(model.n):
        size = math.prod(domains[v] for v in pt.path(x))
        if size > cap:
            raise BruteForceCapExceeded(
                f"path to variable {x} has {size} assignments, cap is {cap}"
            )

    per_layer = []
    for x in range(model.n):
        path = pt.path(x)
        funcs = [model.functions[f] for v in path for f in tree.clusters[v].psi]
        chi = sorted(tree.clusters[x].chi)
        seen = set()
        for values in product(*(range(domains[v]) for v in path)):
            a = dict(zip(path, values))
            if all(_entry(model, f, a) > model.zero_epsilon for f in funcs):
                seen.add(tuple(a[v] for v in chi))
        per_layer.append(len(seen))
    return CountResult(sum(per_layer), per_layer, 0)


def _entry(model: GraphicalModel, f, a: dict[int, int]) -> float:
    # flat index with the last scope variable fastest, computed independently of numpy reshape
    idx = 0
    for v in f.scope:
        idx = idx * model.variables[v].domain_size + a[v]
    return float(np.asarray(f.values)[idx])
