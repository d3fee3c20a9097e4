"""Primal graph, minfill elimination orderings and triangulation.

Orientation convention used throughout the package: an :class:`Ordering`
lists variables in the order search instantiates them (position 0 first).
Elimination, and therefore triangulation, runs from the last position to
the first.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .model import GraphicalModel


class OrderingError(ValueError):
    pass


@dataclass(frozen=True)
class PrimalGraph:
    n: int
    adjacency: tuple[frozenset[int], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "PrimalGraph":
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                continue
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(a) for a in adj))

    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v}

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


@dataclass(frozen=True)
class Ordering:
    sequence: tuple[int, ...]
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(int(v) for v in self.sequence))

    def __len__(self):
        return len(self.sequence)

    def positions(self) -> list[int]:
        pos = [0] * len(self.sequence)
        for i, v in enumerate(self.sequence):
            pos[v] = i
        return pos

    def validate(self, n: int) -> None:
        if sorted(self.sequence) != list(range(n)):
            raise OrderingError(f"ordering is not a permutation of 0..{n - 1}")


def build_primal_graph(model: GraphicalModel) -> PrimalGraph:
    """Each function scope becomes a clique; empty and unary scopes add no edges."""
    adj = [set() for _ in range(model.n)]
    for f in model.functions:
        for u, v in combinations(f.scope, 2):
            adj[u].add(v)
            adj[v].add(u)
    return PrimalGraph(model.n, tuple(frozenset(a) for a in adj))


def _fill(adj: list[set[int]], v: int) -> int:
    nb = adj[v]
    missing = 0
    for a in nb:
        # each missing pair is seen twice
        missing += len(nb) - 1 - len(adj[a] & nb)
    return missing // 2


def minfill_ordering(graph: PrimalGraph, seed: int = 0) -> Ordering:
    """Greedy minfill ordering with uniform random tie-breaking.

    Ties are broken by ``random.Random(seed)`` (Mersenne Twister, identical
    across platforms) drawing ``randrange`` over the tied vertices sorted
    by id.  Returns the search ordering, i.e. the elimination sequence
    reversed.
    """
    rng = random.Random(seed)
    adj = [set(a) for a in graph.adjacency]
    fill = [_fill(adj, v) for v in range(graph.n)]
    buckets: dict[int, set[int]] = {}
    for v, f in enumerate(fill):
        buckets.setdefault(f, set()).add(v)
    keys = list(buckets)
    heapq.heapify(keys)
    alive = [True] * graph.n

    def move(v: int, new: int) -> None:
        old = fill[v]
        if old == new:
            return
        buckets[old].discard(v)
        fill[v] = new
        if new not in buckets or not buckets[new]:
            buckets.setdefault(new, set())
            heapq.heappush(keys, new)
        buckets[new].add(v)

    elimination = []
    for _ in range(graph.n):
        while not buckets.get(keys[0]):
            buckets.pop(heapq.heappop(keys), None)
        tied = buckets[keys[0]]
        if len(tied) == 1:
            v = next(iter(tied))
        else:
            v = sorted(tied)[rng.randrange(len(tied))]
        tied.discard(v)
        alive[v] = False
        elimination.append(v)

        nb = adj[v]
        affected = set(nb)
        for a, b in combinations(sorted(nb), 2):
            if b not in adj[a]:
                affected |= adj[a] & adj[b]
                adj[a].add(b)
                adj[b].add(a)
        for u in nb:
            adj[u].discard(v)
        adj[v] = set()
        for u in affected:
            if alive[u]:
                move(u, _fill(adj, u))

    return Ordering(tuple(reversed(elimination)), seed)


def triangulate(graph: PrimalGraph, ordering: Ordering) -> tuple[PrimalGraph, int]:
    """Eliminate along ``ordering`` from last to first.

    Returns the filled graph and the induced width, the largest number of
    earlier neighbours any vertex has in the filled graph.
    """
    ordering.validate(graph.n)
    pos = ordering.positions()
    adj = [set(a) for a in graph.adjacency]
    width = 0
    for v in reversed(ordering.sequence):
        earlier = [u for u in adj[v] if pos[u] < pos[v]]
        width = max(width, len(earlier))
        for a, b in combinations(earlier, 2):
            adj[a].add(b)
            adj[b].add(a)
    return PrimalGraph(graph.n, tuple(frozenset(a) for a in adj)), width


def is_perfect_elimination_ordering(graph: PrimalGraph, ordering: Sequence[int]) -> bool:
    """True when every vertex's earlier neighbours already form a clique."""
    pos = {v: i for i, v in enumerate(ordering)}
    for v in ordering:
        earlier = [u for u in graph.adjacency[v] if pos[u] < pos[v]]
        for a, b in combinations(earlier, 2):
            if b not in graph.adjacency[a]:
                return False
    return True


def parse_ordering(text: str) -> Ordering:
    try:
        seq = tuple(int(tok) for tok in text.split())
    except ValueError as exc:
        raise OrderingError(f"ordering file: {exc}") from None
    return Ordering(seq)


def format_ordering(ordering: Ordering) -> str:
    return " ".join(str(v) for v in ordering.sequence) + "\n"
