"""Random instance generators for property checks and benchmarks."""

from __future__ import annotations

import math

import numpy as np

from .model import GraphicalModel, Kind, make_model


def random_model(
    rng: np.random.Generator,
    n_vars: tuple[int, int] = (3, 10),
    domains: tuple[int, int] = (2, 4),
    arity: tuple[int, int] = (1, 3),
    zero_density: float = 0.3,
    n_functions: tuple[int, int] | None = None,
) -> GraphicalModel:
    """Markov model with random scopes; each entry is zero with probability ``zero_density``.

    Ranges are inclusive.
    """
    n = int(rng.integers(n_vars[0], n_vars[1] + 1))
    doms = [int(d) for d in rng.integers(domains[0], domains[1] + 1, size=n)]
    lo, hi = n_functions if n_functions else (max(1, n // 2), n + 2)
    m = int(rng.integers(lo, hi + 1))
    tables = []
    for _ in range(m):
        a = int(rng.integers(arity[0], min(arity[1], n) + 1))
        scope = [int(v) for v in rng.choice(n, size=a, replace=False)]
        size = math.prod(doms[v] for v in scope)
        vals = rng.uniform(0.05, 1.0, size=size)
        vals[rng.random(size) < zero_density] = 0.0
        tables.append((scope, vals))
    return make_model(doms, tables)


def partial_ktree_network(
    rng: np.random.Generator,
    n: int = 50,
    k: int = 16,
    parents: tuple[int, int] = (4, 5),
    forced_fraction: float = 0.5,
    forced_zeros: float = 0.75,
    free_zeros: float = 0.05,
) -> GraphicalModel:
    """Binary network over a random partial k-tree with forced determinism.

    Vertices after the initial ``(k+1)``-clique attach to a random k-clique of
    the k-tree built so far.  Each variable gets one function over itself and
    a random subset of its attaching clique (``parents`` is an inclusive size
    range), so the primal graph is a subgraph of the k-tree.  A
    ``forced_fraction`` of the tables is forced deterministic with about
    ``forced_zeros`` zero entries; the others get ``free_zeros``.  The
    defaults give about 40% zeros overall.
    """
    base = list(range(min(k + 1, n)))
    cliques = [[u for u in base if u != drop] for drop in base] if len(base) == k + 1 else []
    families = []
    for v in base:
        pool = base[:v]
        a = min(len(pool), int(rng.integers(parents[0], parents[1] + 1)))
        families.append(sorted(int(u) for u in rng.choice(pool, size=a, replace=False)) if a else [])
    for v in range(len(base), n):
        clique = cliques[int(rng.integers(len(cliques)))]
        for drop in clique:
            cliques.append([u for u in clique if u != drop] + [v])
        a = min(len(clique), int(rng.integers(parents[0], parents[1] + 1)))
        families.append(sorted(int(u) for u in rng.choice(clique, size=a, replace=False)))

    tables = []
    for v in range(n):
        scope = families[v] + [v]
        size = 2 ** len(scope)
        vals = rng.uniform(0.05, 1.0, size=size)
        density = forced_zeros if rng.random() < forced_fraction else free_zeros
        vals[rng.random(size) < density] = 0.0
        tables.append((scope, vals))
    return make_model([2] * n, tables, kind=Kind.MARKOV)


def replicate(model: GraphicalModel, copies: int) -> GraphicalModel:
    """Disjoint union of ``copies`` relabelled copies of ``model``."""
    doms = model.domains * copies
    tables = []
    for c in range(copies):
        off = c * model.n
        for f in model.functions:
            tables.append(([v + off for v in f.scope], f.values))
    return make_model(doms, tables, model.kind, model.zero_epsilon)


def grid_model(rng: np.random.Generator, side: int, zero_density: float = 0.4) -> GraphicalModel:
    """Binary pairwise grid with unary potentials; used for scaling checks."""
    n = side * side
    tables = []
    for i in range(side):
        for j in range(side):
            v = i * side + j
            tables.append(([v], rng.uniform(0.1, 1.0, size=2)))
            for u in ((v + 1) if j + 1 < side else None, (v + side) if i + 1 < side else None):
                if u is None:
                    continue
                vals = rng.uniform(0.1, 1.0, size=4)
                vals[rng.random(4) < zero_density] = 0.0
                tables.append(([v, u], vals))
    return make_model([2] * n, tables)
