import itertools

import pytest

from heightlab.errors import BudgetExceeded, PositiveBoundary, RetriesExhausted
from heightlab.heights import HOM, HeightFunction, make_bc
from heightlab.oracle import enumerate_functions
from heightlab.cutsets import (boundary_dominating_sets,
                               cutset_profile, dominating_violations,
                               enumerate_omcut, enumerate_omcut_bruteforce,
                               gamma_adjacency, interior_approximation,
                               level_set, level_set_at_height,
                               min_odd_cutset_size, omcut_violations, subcut,
                               trivial_cutset)
from heightlab.sampler import RandomSource
from heightlab.torus import ball, build_torus


def parity_function(t):
    return HeightFunction(t, tuple(t.parity(v) for v in t.vertices()), HOM)


def test_level_set_parity_function_is_trivial_around_b():
    t = build_torus([4, 4])
    bc = make_bc(t, "one-point", base=(0, 0))
    ls = level_set(parity_function(t), (2, 2), bc)
    assert ls is not None and len(ls.edges) == 4
    assert ls.is_trivial()
    assert ls.E0 == {t.index((0, 0))}


def test_level_set_empty_when_x_in_outer_region():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    f = parity_function(t)
    for b in bc.B:
        assert level_set(f, b, bc) is None


def test_level_set_requires_nonpositive_mu():
    t = build_torus([4, 4])
    bc = make_bc(t, "explicit", B=[(0, 0)], mu={(0, 0): 2})
    with pytest.raises(PositiveBoundary):
        level_set(parity_function(t), (2, 2), bc)


def test_level_sets_exhaustive_z6():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    sizes = set()
    for f in enumerate_functions(bc, HOM):
        ls = level_set(f, (3,), bc)
        if ls is None:
            continue
        sizes.add(len(ls.edges))
        assert not omcut_violations(ls)
    assert sizes == {2}  # only trivial cutsets exist in a cycle


def test_level_set_at_height():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    for f in enumerate_functions(bc, HOM):
        ls1 = level_set(f, (3,), bc)
        ls1b = level_set_at_height(f, (3,), bc, 1)
        assert (ls1 is None) == (ls1b is None)
        if ls1 is not None:
            assert ls1.edges == ls1b.edges
        # f(x) = t forces LS_i non-empty for 1 <= i <= t
        fx = f[(3,)]
        for i in range(1, fx + 1):
            assert level_set_at_height(f, (3,), bc, i) is not None


def test_three_nested_level_sets_of_extreme_function():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 1, 2, 3, 2, 1), HOM)
    cuts = [level_set_at_height(f, (3,), bc, i) for i in (1, 2, 3)]
    assert all(c is not None and len(c.edges) == 2 for c in cuts)
    e1, e2, e3 = (c.edges for c in cuts)
    assert not (e1 & e2) and not (e1 & e3) and not (e2 & e3)


def test_level_set_depends_only_on_nonpositive_mask():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    x = t.index((1, 1))
    by_mask = {}
    for f in enumerate_functions(bc, HOM):
        mask = tuple(v <= 0 for v in f.values)
        ls = level_set(f, x, bc)
        key = None if ls is None else tuple(ls.sorted_edges())
        if mask in by_mask:
            assert by_mask[mask] == key
        else:
            by_mask[mask] = key


def test_level_sets_disjoint_or_identical():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    for f in itertools.islice(enumerate_functions(bc, HOM), 60):
        cuts = []
        for x in t.vertices():
            ls = level_set(f, x, bc)
            if ls is not None:
                cuts.append(ls.edges)
        for a, b in itertools.combinations(cuts, 2):
            assert a == b or not (a & b)


def test_cutset_profile_trivial():
    t = build_torus([4, 4])
    b = t.index((0, 0))
    x = t.index((2, 2))
    gamma = trivial_cutset(t, b, sources=(x,), targets=(b,))
    prof = cutset_profile(gamma)
    assert prof.direction_counts == (1, 1, 1, 1)
    assert prof.trivial
    # from the x side, every boundary vertex has P = 1
    assert prof.r_total == 4
    x_triv = trivial_cutset(t, t.index((2, 1)), sources=(t.index((2, 1)),),
                            targets=(b,))
    assert cutset_profile(x_triv).r_total == 0  # E_1 = {x}, min(P, deg-P) = 0


def test_neighbor_plaquette_inequality_over_enumeration():
    t = build_torus([2, 2, 4])
    x, b = t.index((0, 0, 0)), t.index((0, 0, 2))
    deg = t.degree
    for gamma in enumerate_omcut(t, x, b):
        for v, w in gamma.edges:
            assert gamma.P(v) + gamma.P(w) >= deg
        prof = cutset_profile(gamma)
        assert len(set(prof.direction_counts)) == 1


def test_subcut_properties():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    x = t.index((1, 1))
    seen = 0
    for f in enumerate_functions(bc, HOM):
        gamma = level_set(f, x, bc)
        if gamma is None:
            continue
        seen += 1
        sx = subcut(gamma, x)
        assert sx.edges <= gamma.edges
        assert not omcut_violations(sx)
        # same component gives the identical subcut
        other = next(iter(gamma.interior - {x}), None)
        if other is not None:
            assert subcut(gamma, other).edges == sx.edges
        # subcuts of target-side vertices are disjoint or identical
        subs = [subcut(gamma, b).edges for b in gamma.targets]
        for a, b2 in itertools.combinations(subs, 2):
            assert a == b2 or not (a & b2)
    assert seen


def test_gamma_adjacency_degenerate_and_bound():
    t = build_torus([2, 4])
    x, b = t.index((0, 1)), t.index((0, 0))
    deg = t.degree
    for gamma in enumerate_omcut(t, x, b):
        for v in t.vertices():
            p = gamma.P(v)
            nbrs = gamma_adjacency(gamma, v)
            if p == 0 or p == deg:
                assert nbrs == []
            else:
                bound = p * (deg - p) - min(p, deg - p)
                assert len(nbrs) >= bound


def test_trivial_iff_full_plaquette():
    t = build_torus([2, 2, 4])
    x, b = t.index((0, 0, 1)), t.index((0, 0, 0))  # x odd, b even
    deg = t.degree
    sizes = []
    for gamma in enumerate_omcut(t, x, b):
        full = any(gamma.P(v) == deg for v in t.vertices())
        assert gamma.is_trivial() == full
        if gamma.is_trivial():
            assert len(gamma.edges) == deg
        else:
            sizes.append(len(gamma.edges))
    assert sizes and min(sizes) >= deg * deg / 2


def test_enumerate_omcut_matches_bruteforce():
    cases = [([6], (0,), (3,)), ([2, 2], (0, 1), (0, 0)), ([2, 4], (0, 1), (0, 0))]
    for dims, x, b in cases:
        t = build_torus(dims)
        a = sorted(g.sorted_edges() for g in enumerate_omcut(t, x, b))
        c = sorted(g.sorted_edges() for g in enumerate_omcut_bruteforce(t, x, b))
        assert a == c and a


def test_enumerate_omcut_max_edges_below_degree():
    t = build_torus([2, 4])
    assert list(enumerate_omcut(t, (0, 1), (0, 0), max_edges=t.degree - 1)) == []


def test_omcut_22_one_point_both_trivial():
    t = build_torus([2, 2])
    x, b = t.index((0, 1)), t.index((0, 0))  # x odd, b even
    got = list(enumerate_omcut(t, x, b))
    assert sorted(len(g.edges) for g in got) == [2, 2]
    assert all(g.is_trivial() for g in got)
    assert {g.edges for g in got} == {
        trivial_cutset(t, x, (x,), (b,)).edges,
        trivial_cutset(t, b, (x,), (b,)).edges,
    }


def test_enumerate_omcut_budget():
    t = build_torus([4, 4, 4])
    with pytest.raises(BudgetExceeded):
        list(enumerate_omcut(t, 0, 32, budget=1000))


def test_min_odd_cutset_size():
    t = build_torus([2, 4])
    assert min_odd_cutset_size(t, (0, 1), (0, 0)) == t.degree
    assert min_odd_cutset_size(t, (0, 0), (0, 0)) is None  # X meets Y


def test_isoperimetry_oracle_full_projection():
    # I_0(E) >= s_0 for a full-projection set E
    t = build_torus([2, 4, 4])
    e = [v for v in t.vertices() if t.coords(v)[2] == 0]
    y = t.index((0, 0, 2))
    b0 = ball(t, y, 0)
    best = None
    for first, second in ((e, b0), (b0, e)):
        m = min_odd_cutset_size(t, set(first), set(second))
        if m is not None and (best is None or m < best):
            best = m
    s0 = t.degree
    assert best is not None and best >= s0


def test_dominating_sets_on_trivial_rejected():
    t = build_torus([4, 4])
    b = t.index((0, 0))
    gamma = trivial_cutset(t, b, (t.index((2, 2)),), (b,))
    with pytest.raises(ValueError):
        boundary_dominating_sets(gamma, RandomSource(1))


def test_dominating_sets_properties_and_saturation():
    # d = 2: inclusion probabilities clamp to 1, so E^s = E and the
    # verifier passes on the first draw
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    x = t.index((1, 1))
    found = 0
    for f in enumerate_functions(bc, HOM):
        gamma = level_set(f, x, bc)
        if gamma is None or gamma.is_trivial():
            continue
        ds = boundary_dominating_sets(gamma, RandomSource(5, found))
        assert ds.draws == 1
        assert ds.e0t == gamma.E0 and ds.e1t == gamma.E1
        assert dominating_violations(gamma, ds) == []
        found += 1
        if found >= 10:
            break
    assert found


def test_interior_approximation_empty_inputs():
    t = build_torus([2, 2, 4])
    assert interior_approximation(t, [], [], {}, {}) == frozenset()


def test_interior_approximation_containment_small():
    t = build_torus([2, 2, 4])
    x, b = t.index((0, 0, 0)), t.index((0, 0, 2))
    ok = failures = 0
    for i, gamma in enumerate(enumerate_omcut(t, x, b)):
        if gamma.is_trivial():
            continue
        try:
            ds = boundary_dominating_sets(gamma, RandomSource(7, i))
        except RetriesExhausted:
            failures += 1
            continue
        n0 = {v: gamma.n_vector(v) for v in ds.e0t}
        n1 = {v: gamma.n_vector(v) for v in ds.e1t}
        approx = interior_approximation(t, ds.e0t, ds.e1t, n0, n1)
        assert gamma.E1 - gamma.exposed <= approx <= gamma.interior
        ok += 1
    assert ok > 0


def test_exposed_and_e11_bookkeeping():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    x = t.index((1, 1))
    for f in enumerate_functions(bc, HOM):
        gamma = level_set(f, x, bc)
        if gamma is None:
            continue
        deg, d = t.degree, t.d
        for v in gamma.E1:
            assert ((deg - gamma.P(v)) ** 2 <= d) == (v in gamma.exposed)
        assert len(gamma.E11(0)) == len(gamma.edges) // deg
        assert len(gamma.E11(1)) == len(gamma.edges) // deg


def test_regularity_zero_iff_point_boundary():
    t = build_torus([2, 2, 4])
    x, b = t.index((0, 0, 1)), t.index((0, 0, 0))
    for gamma in enumerate_omcut(t, x, b):
        prof = cutset_profile(gamma)
        assert (prof.r_total == 0) == (gamma.E1 == {x})


def test_diamond_components_or_full_projection():
    """The source boundary is diamond-connected, or every component has
    full projection in some direction."""
    from heightlab.heights import full_projection_axes
    from heightlab.torus import aux_adjacency

    multi = 0
    for dims, xc, bv in [([2, 8], (0, 0), (0, 4)), ([4, 6], (0, 0), (0, 3)),
                         ([2, 2, 6], (0, 0, 0), (0, 0, 3))]:
        t = build_torus(dims)
        x, b = t.index(xc), t.index(bv)
        for gamma in enumerate_omcut(t, x, b):
            e1 = gamma.E1
            # diamond components of E_1
            seen = set()
            comps = []
            for start in e1:
                if start in seen:
                    continue
                comp = {start}
                stack = [start]
                while stack:
                    v = stack.pop()
                    for w in aux_adjacency(t, v, "diamond"):
                        if w in e1 and w not in comp:
                            comp.add(w)
                            stack.append(w)
                seen |= comp
                comps.append(comp)
            if len(comps) > 1:
                multi += 1
                for comp in comps:
                    assert full_projection_axes(t, comp)
    assert multi > 0  # the wrap-around case is actually exercised
