"""Bucket tree decompositions built along a variable ordering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Ordering, PrimalGraph
from .model import GraphicalModel


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Cluster:
    variable: int
    chi: frozenset[int]
    psi: frozenset[int]
    parent: int | None


@dataclass(frozen=True)
class BucketTree:
    clusters: tuple[Cluster, ...]
    ordering: Ordering

    @property
    def roots(self) -> list[int]:
        return [c.variable for c in self.clusters if c.parent is None]

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.clusters]
        # ordering position keeps children lists deterministic
        for x in self.ordering.sequence:
            p = self.clusters[x].parent
            if p is not None:
                kids[p].append(x)
        return kids

    def ancestors(self, x: int) -> list[int]:
        """Proper ancestors of ``x``, nearest first."""
        out = []
        p = self.clusters[x].parent
        while p is not None:
            out.append(p)
            p = self.clusters[p].parent
        return out

    def export(self) -> str:
        """One line per cluster: ``var | chi | psi | parent`` (parent ``-1`` for roots)."""
        lines = []
        for x in self.ordering.sequence:
            c = self.clusters[x]
            chi = " ".join(str(v) for v in sorted(c.chi))
            psi = " ".join(str(f) for f in sorted(c.psi))
            parent = -1 if c.parent is None else c.parent
            lines.append(f"{x} | {chi} | {psi} | {parent}")
        return "\n".join(lines) + "\n"


def build_bucket_tree(
    model: GraphicalModel, filled: PrimalGraph, ordering: Ordering
) -> BucketTree:
    ordering.validate(model.n)
    pos = ordering.positions()
    psi: list[set[int]] = [set() for _ in range(model.n)]
    chis = []
    parents: list[int | None] = []
    for x in range(model.n):
        earlier = [u for u in filled.adjacency[x] if pos[u] < pos[x]]
        chis.append(frozenset(earlier) | {x})
        parents.append(max(earlier, key=pos.__getitem__) if earlier else None)

    for f in model.functions:
        if not f.scope:
            continue
        home = max(f.scope, key=pos.__getitem__)
        if not set(f.scope) <= chis[home]:
            raise DecompositionError(
                f"function {f.id} scope {sorted(f.scope)} not contained in bucket "
                f"of variable {home}; filled graph does not match the ordering"
            )
        psi[home].add(f.id)

    clusters = tuple(
        Cluster(x, chis[x], frozenset(psi[x]), parents[x]) for x in range(model.n)
    )
    return BucketTree(clusters, ordering)


def verify_tree_decomposition(tree: BucketTree, model: GraphicalModel) -> tuple[bool, list[str]]:
    """Check placement, containment and running intersection; collect all violations.

    Constant (empty-scope) functions are exempt from placement.
    """
    violations = []
    placed: dict[int, list[int]] = {}
    for c in tree.clusters:
        for fid in c.psi:
            placed.setdefault(fid, []).append(c.variable)

    for f in model.functions:
        if not f.scope:
            continue
        homes = placed.get(f.id)
        if not homes:
            violations.append(f"condition 1: function {f.id} is not placed in any cluster")
            continue
        for x in homes:
            missing = set(f.scope) - tree.clusters[x].chi
            if missing:
                violations.append(
                    f"condition 2: function {f.id} in cluster {x} has scope variables "
                    f"{sorted(missing)} outside chi"
                )

    for v in range(model.n):
        members = {c.variable for c in tree.clusters if v in c.chi}
        if not members:
            violations.append(f"condition 3: variable {v} appears in no cluster")
            continue
        tops = [x for x in members if tree.clusters[x].parent not in members]
        if len(tops) != 1:
            violations.append(
                f"condition 3: clusters containing variable {v} form "
                f"{len(tops)} disconnected pieces"
            )
    return not violations, violations


def tree_width(tree: BucketTree) -> int:
    return max((len(c.chi) for c in tree.clusters), default=0) - 1


def check_hypertree_condition(
    tree: BucketTree, model: GraphicalModel
) -> tuple[bool, int | None]:
    """Strict hypertree test: each chi covered by the scopes of its own psi.

    Returns ``(holds, max |psi|)``; the width is ``None`` when the test fails.
    """
    for c in tree.clusters:
        covered: set[int] = set()
        for fid in c.psi:
            covered.update(model.functions[fid].scope)
        if not c.chi <= covered:
            return False, None
    return True, max((len(c.psi) for c in tree.clusters), default=0)


def replace_cluster(tree: BucketTree, cluster: Cluster) -> BucketTree:
    """Copy of ``tree`` with one cluster swapped out; used to build corrupted trees in checks."""
    clusters: Sequence[Cluster] = list(tree.clusters)
    clusters[cluster.variable] = cluster
    return BucketTree(tuple(clusters), tree.ordering)
