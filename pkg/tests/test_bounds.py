import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from aobound.bounds import (
    asymptotic_bound,
    best_bounds,
    covering_term,
    evaluate_ordering,
    greedy_covering,
    hwb,
    log10_int,
    tree_for_ordering,
    twb,
)
from aobound.decomposition import Cluster
from aobound.graph import Ordering
from aobound.model import FunctionTable, make_model
from aobound.oracle import count_context_minimal
from aobound.synthetic import random_model
from aobound.report import format_log10

X, Y, Z = 0, 1, 2


def table_with_tightness(size: int, t: int) -> list[float]:
    return [0.5] * t + [0.0] * (size - t)


def xyz_cluster():
    return make_model(
        [4, 4, 3],
        [([X, Y], table_with_tightness(16, 9)), ([Y, Z], table_with_tightness(12, 11))],
    )


def fig5_reference(chi, funcs, domains):
    """Direct transcription of the greedy loop with Fraction ratios, for cross-checking."""
    uncov = set(chi)
    cover = []
    while uncov:
        ratios = []
        for f in funcs:
            inter = uncov & set(f.scope)
            if inter:
                ratios.append((Fraction(f.tightness, math.prod(domains[v] for v in inter)), f.id))
        if not ratios:
            break
        r, j = min(ratios)
        if r >= 1:
            break
        cover.append(j)
        uncov -= set(next(f for f in funcs if f.id == j).scope)
    return cover, uncov


def test_xyz_cluster():
    m = xyz_cluster()
    cluster = Cluster(Y, frozenset({X, Y, Z}), frozenset({0, 1}), None)
    f1, f2 = m.functions
    assert (f1.tightness, f2.tightness) == (9, 11)
    assert Fraction(9, 16) < Fraction(11, 12)
    cov = greedy_covering(cluster, m.functions, m.domains)
    assert cov.chosen == (0,)
    assert cov.uncovered == {Z}
    assert cov.covered == {X, Y}
    # second round ratio of f2 is 11 / 3 >= 1
    assert Fraction(11, 3) >= 1
    assert math.prod(m.domains) == 48
    assert covering_term(cov, m.functions, m.domains) == 9 * 3 == 27


def test_xyz_through_tree():
    m = xyz_cluster()
    rep = evaluate_ordering(m, Ordering((X, Z, Y)))
    by_var = {c.variable: c for c in rep.per_cluster}
    assert (by_var[Y].twb, by_var[Y].hwb) == (48, 27)
    # remaining clusters {X} and {X, Z} have no functions
    assert rep.twb == 48 + 4 + 12
    assert rep.hwb == 27 + 4 + 12


def test_full_table_never_added():
    m = make_model([2, 3], [([0, 1], [0.2] * 6)])
    cluster = Cluster(1, frozenset({0, 1}), frozenset({0}), None)
    cov = greedy_covering(cluster, m.functions, m.domains)
    assert cov.chosen == ()
    assert cov.uncovered == {0, 1}


def test_disjoint_tight_functions_both_chosen():
    m = make_model([2] * 4, [([0, 1], table_with_tightness(4, 1)), ([2, 3], table_with_tightness(4, 1))])
    chi = frozenset(range(4))
    cov = greedy_covering(Cluster(3, chi, frozenset({0, 1}), None), m.functions, m.domains)
    assert set(cov.chosen) == {0, 1}
    assert cov.uncovered == frozenset()
    # every selection order reaches the same best term 1 * 1 = 1; single picks give 4
    terms = {}
    for k in range(3):
        for order in permutations(range(2), k):
            uncov = set(chi)
            for j in order:
                uncov -= set(m.functions[j].scope)
            terms[order] = math.prod(m.functions[j].tightness for j in order) * 2 ** len(uncov)
    assert min(terms.values()) == 1 == covering_term(cov, m.functions, m.domains)
    assert terms[(0,)] == terms[(1,)] == 4


def test_ties_go_to_lowest_id():
    m = make_model([2, 2], [([1], [1, 0]), ([0], [1, 0])])
    cov = greedy_covering(Cluster(1, frozenset({0, 1}), frozenset(), None), m.functions, m.domains)
    assert cov.chosen == (0, 1)
    m = make_model([2, 2], [([0, 1], [1, 0, 0, 0]), ([0, 1], [0, 1, 0, 0])])
    cov = greedy_covering(Cluster(1, frozenset({0, 1}), frozenset(), None), m.functions, m.domains)
    assert cov.chosen == (0,)


def test_zero_tightness_empties_cluster():
    m = make_model([2, 2], [([0, 1], [0, 0, 0, 0])])
    cov = greedy_covering(Cluster(1, frozenset({0, 1}), frozenset({0}), None), m.functions, m.domains)
    assert cov.chosen == (0,)
    assert covering_term(cov, m.functions, m.domains) == 0


def test_greedy_matches_fraction_reference(rng):
    for _ in range(300):
        nv = int(rng.integers(1, 6))
        doms = [int(d) for d in rng.integers(1, 5, nv)]
        funcs = []
        for j in range(int(rng.integers(0, 6))):
            a = int(rng.integers(1, nv + 1))
            scope = tuple(int(v) for v in rng.choice(nv, a, replace=False))
            size = math.prod(doms[v] for v in scope)
            funcs.append(FunctionTable(j, scope, table_with_tightness(size, int(rng.integers(0, size + 1)))))
        chi = frozenset(range(nv))
        cov = greedy_covering(Cluster(0, chi, frozenset(), None), funcs, doms)
        ref_cover, ref_uncov = fig5_reference(chi, funcs, doms)
        assert list(cov.chosen) == ref_cover
        assert cov.uncovered == ref_uncov
        assert len(set(cov.chosen)) == len(cov.chosen) <= len(chi)
        assert cov.covered | cov.uncovered == chi and not cov.covered & cov.uncovered
        assert covering_term(cov, funcs, doms) <= math.prod(doms)


def test_ancestor_functions_tighten_descendants():
    # f(A, B) has a single relevant tuple and lives in bucket B; g(B, C) is dense
    m = make_model([2, 2, 2], [([0, 1], [0, 0, 1, 0]), ([1, 2], [1, 1, 1, 1])])
    tree = tree_for_ordering(m, Ordering((0, 1, 2)))
    assert tree.clusters[1].psi == {0} and tree.clusters[2].psi == {1}
    plain, plain_terms = hwb(tree, m, include_ancestors=False)
    anc, anc_terms = hwb(tree, m, include_ancestors=True)
    # clusters {A}, {A,B}, {B,C}: 2 + 1 + 4 without, 2 + 1 + 1*2 with
    assert [c.hwb for c in plain_terms] == [2, 1, 4]
    assert [c.hwb for c in anc_terms] == [2, 1, 2]
    assert (plain, anc) == (7, 5)
    assert anc_terms[2].covering.chosen == (0,)
    assert count_context_minimal(m, tree).total == 5


def test_twb_chain():
    m = make_model([2, 2, 2], [([0, 1], [1] * 4), ([1, 2], [1] * 4)])
    total, terms = twb(tree_for_ordering(m, Ordering((0, 1, 2))), m)
    assert terms == [2, 4, 4] and total == 10


def test_dense_model_hwb_equals_twb(rng):
    for _ in range(30):
        m = random_model(rng, zero_density=0.0)
        rep = best_bounds(m, 3, int(rng.integers(100))).best
        assert rep.hwb == rep.twb


def test_asymptotic_values():
    m100 = make_model([2] * 100, [])
    assert asymptotic_bound(m100, 9) == 102_400
    assert format_log10(102_400) == "5.01"
    m54 = make_model([2] * 54, [])
    assert asymptotic_bound(m54, 12) == 442_368
    assert format_log10(442_368) == "5.65"
    assert asymptotic_bound(make_model([1], []), 7) == 1


def test_log10_of_huge_integers():
    assert log10_int(10**400) == pytest.approx(400.0, abs=1e-9)
    assert log10_int(3 * 10**30) == pytest.approx(math.log10(3) + 30)
    assert log10_int(0) == float("-inf")
    assert format_log10(0) == "-inf"


def test_bound_chain_per_cluster(rng):
    for _ in range(50):
        m = random_model(rng, zero_density=float(rng.uniform(0, 0.6)))
        for rep in best_bounds(m, 3, int(rng.integers(1000))).reports:
            assert all(c.hwb <= c.twb for c in rep.per_cluster)
            assert rep.twb == sum(c.twb for c in rep.per_cluster)
            assert rep.hwb == sum(c.hwb for c in rep.per_cluster)
            assert rep.hwb <= rep.twb <= rep.asymptotic


def test_best_bounds_single_ordering(rng):
    m = random_model(rng)
    result = best_bounds(m, 1, 5)
    assert result.reports == [result.best]
    assert result.best.ordering_seed == 5


def test_best_bounds_path_all_identical():
    # binary path with identical dense tables: every minfill ordering gives the same numbers
    m = make_model([2] * 5, [([i, i + 1], [0.5] * 4) for i in range(4)])
    result = best_bounds(m, 8, 0)
    assert len({r.ordering.sequence for r in result.reports}) > 1
    assert len({(r.width, r.twb, r.hwb) for r in result.reports}) == 1


def test_more_orderings_never_worse(rng):
    m = random_model(rng, n_vars=(10, 10), zero_density=0.4)
    ten = best_bounds(m, 10, 3)
    hundred = best_bounds(m, 100, 3)
    assert hundred.reports[:10] == ten.reports
    assert hundred.best.hwb <= ten.best.hwb
    assert hundred.min_twb <= ten.min_twb
    assert hundred.min_width <= ten.min_width


def test_best_selection_rule(rng):
    m = random_model(rng, n_vars=(9, 9), zero_density=0.5)
    result = best_bounds(m, 20, 0)
    keys = [(r.hwb, r.twb, i) for i, r in enumerate(result.reports)]
    assert result.best is result.reports[min(keys)[2]]
    assert result.min_hwb == result.best.hwb


def test_fixed_covering_monotone_under_extra_zeros():
    # lowering tightness cannot raise the term of an unchanged covering
    m = xyz_cluster()
    cluster = Cluster(Y, frozenset({X, Y, Z}), frozenset({0, 1}), None)
    cov = greedy_covering(cluster, m.functions, m.domains)
    tighter = make_model([4, 4, 3], [([X, Y], table_with_tightness(16, 5)), ([Y, Z], table_with_tightness(12, 11))])
    assert covering_term(cov, tighter.functions, tighter.domains) <= covering_term(cov, m.functions, m.domains)


def test_greedy_is_not_monotone_in_tightness():
    # pinned counterexample: one fewer relevant tuple changes the greedy pick and raises the term
    doms = [3, 2]
    def funcs(t1):
        return [
            FunctionTable(0, (1, 0), table_with_tightness(6, 6)),
            FunctionTable(1, (0, 1), table_with_tightness(6, t1)),
            FunctionTable(2, (1,), table_with_tightness(2, 1)),
            FunctionTable(3, (0,), table_with_tightness(3, 2)),
        ]
    cluster = Cluster(0, frozenset({0, 1}), frozenset(), None)
    before = greedy_covering(cluster, funcs(4), doms)
    after = greedy_covering(cluster, funcs(3), doms)
    assert covering_term(before, funcs(4), doms) == 2
    assert covering_term(after, funcs(3), doms) == 3


def test_report_json_is_exact():
    m = xyz_cluster()
    d = evaluate_ordering(m, Ordering((X, Z, Y))).to_dict()
    assert d["twb"] == 64 and d["hwb"] == 43
    assert d["log10"]["twb"] == pytest.approx(math.log10(64))


def test_numpy_domain_sizes_stay_exact():
    # 40 variables of domain 8 in one clique: 8**40 overflows int64
    doms = np.full(40, 8, dtype=np.int64)
    m = make_model(doms, [])
    assert asymptotic_bound(m, 39) == 40 * 8**40
    assert all(type(d) is int for d in m.domains)
