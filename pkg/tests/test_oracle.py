import itertools
from fractions import Fraction

import pytest

from heightlab.errors import BudgetExceeded
from heightlab.heights import HOM, LIP, HeightFunction, extremal_functions, is_valid, make_bc
from heightlab.oracle import (Distribution, count_functions, enumerate_functions,
                              exact_distribution, exact_probability,
                              parse_statistic, raw_enumerate,
                              stat_even_zero_fraction, stat_height_at,
                              stat_range)
from heightlab.torus import build_torus


def naive_enumerate(bc, model):
    """Independent oracle: filter the full value grid (tiny instances)."""
    t = bc.torus
    lo, hi = extremal_functions(bc, model)
    ranges = [range(a, b + 1) for a, b in zip(lo.values, hi.values)]
    out = []
    for vals in itertools.product(*ranges):
        f = HeightFunction(t, vals, model)
        if is_valid(f, bc):
            out.append(vals)
    return sorted(out)


def test_counts_frozen():
    assert count_functions(make_bc(build_torus([6]), "one-point"), HOM) == 20
    assert count_functions(make_bc(build_torus([2, 2]), "one-point"), HOM) == 6


def test_backtracking_matches_naive():
    for dims, kind, model in [([6], "one-point", HOM), ([2, 2], "one-point", HOM),
                              ([2, 2], "one-point", LIP), ([2, 4], "one-point", HOM)]:
        bc = make_bc(build_torus(dims), kind)
        got = sorted(raw_enumerate(bc, model))
        assert got == naive_enumerate(bc, model)


def test_zero_one_enumeration_matches_naive():
    bc = make_bc(build_torus([2, 2]), "zero-one")
    got = sorted(raw_enumerate(bc, LIP))
    assert got == naive_enumerate(bc, LIP)
    assert all(all(vals[b] in (0, 1) for b in bc.B) for vals in got)


def test_emission_lexicographic_and_deterministic():
    bc = make_bc(build_torus([6]), "one-point")
    first = [f.values for f in enumerate_functions(bc, HOM)]
    second = [f.values for f in enumerate_functions(bc, HOM)]
    assert first == second == sorted(first)


def test_exact_distribution_examples():
    bc = make_bc(build_torus([6]), "one-point")
    d = exact_distribution(bc, HOM, stat_height_at((3,)))
    assert d.support == {-3: 1, -1: 9, 1: 9, 3: 1} and d.total == 20
    bc22 = make_bc(build_torus([2, 2]), "one-point")
    d2 = exact_distribution(bc22, HOM, stat_range())
    assert d2.support == {2: 2, 3: 4}


def test_zero_mu_negation_symmetry():
    for dims, kind in [([6], "one-point"), ([4, 4], "zero")]:
        bc = make_bc(build_torus(dims), kind)
        for x in [0, bc.torus.vertex_count // 2 + 1]:
            d = exact_distribution(bc, HOM, stat_height_at(x))
            assert d == d.negated()


def test_exact_probability_examples():
    bc = make_bc(build_torus([6]), "one-point")
    assert exact_probability(bc, HOM, lambda f: True) == 1
    assert exact_probability(bc, HOM, lambda f: f[(3,)] == 3) == Fraction(1, 20)
    bc22 = make_bc(build_torus([2, 2]), "one-point")
    from heightlab.heights import range_of
    assert exact_probability(bc22, HOM, lambda f: range_of(f) == 2) == Fraction(1, 3)


def test_budget_exceeded():
    bc = make_bc(build_torus([4, 4]), "one-point")
    with pytest.raises(BudgetExceeded):
        list(raw_enumerate(bc, HOM, budget=5))


def test_distribution_arithmetic():
    d = Distribution()
    d.add(1, 3)
    d.add(2, 1)
    assert d.probability(1) == Fraction(3, 4)
    merged = d.merge(d)
    assert merged.total == 8 and merged.support[1] == 6


def test_statistic_parsing():
    assert parse_statistic("range").name == "range"
    assert parse_statistic("height@1,1").name == "height@1,1"
    assert parse_statistic("levelset@0,0").name == "levelset@0,0"
    assert parse_statistic("evenzero").name == "evenzero"
    with pytest.raises(ValueError):
        parse_statistic("entropy")


def test_even_zero_fraction_stat():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 1, 2, 1, 0, -1), HOM)
    assert stat_even_zero_fraction()(f, bc) == Fraction(1, 3)


def test_conditional_consistency_given_level_set():
    """Conditionally on the level set, the interior law is uniform."""
    from heightlab.cutsets import level_set
    from heightlab.graphs import induced_subgraph, torus_graph
    from heightlab.oracle import search_graph

    for dims, x in [([6], (3,)), ([2, 4], (1, 2))]:
        t = build_torus(dims)
        bc = make_bc(t, "one-point")
        groups = {}
        for f in enumerate_functions(bc, HOM):
            gamma = level_set(f, x, bc)
            if gamma is None:
                continue
            key = tuple(gamma.sorted_edges())
            groups.setdefault(key, (gamma, []))[1].append(f)
        assert groups
        for gamma, members in groups.values():
            inside = sorted(gamma.interior)
            restrictions = {}
            for f in members:
                key = tuple(f.values[v] for v in inside)
                restrictions[key] = restrictions.get(key, 0) + 1
            # uniform conditional law
            assert len(set(restrictions.values())) == 1
            # support equals Hom on the interior with boundary fixed at 1;
            # induced_subgraph maps sorted(inside)[i] -> i, so restriction
            # tuples in `inside` order line up with subgraph value tuples
            sub, remap = induced_subgraph(torus_graph(t), inside)
            fixed = {remap[v]: 1 for v in gamma.E1}
            diam = t.vertex_count
            lo = [-diam] * sub.n
            hi = [diam] * sub.n
            want = set(search_graph(sub, fixed, lo, hi, HOM))
            assert set(restrictions) == want


def test_level_set_length_statistic_distribution():
    from heightlab.oracle import stat_level_set_length
    bc = make_bc(build_torus([6]), "one-point")
    d = exact_distribution(bc, HOM, stat_level_set_length((3,)))
    # 10 functions keep the antipode at height >= 1, one more walls it off
    # behind the trivial cutset around the base; a cycle only has 2-edge cuts
    assert d.support == {0: 9, 2: 11} and d.total == 20


def test_statistic_list_parsing_with_coordinates():
    from heightlab.oracle import parse_statistic_list
    names = [s.name for s in parse_statistic_list("range,height@0,3,walls")]
    assert names == ["range", "height@0,3", "walls"]
    names = [s.name for s in parse_statistic_list("levelset@1,1,evenzero")]
    assert names == ["levelset@1,1", "evenzero"]
