from fractions import Fraction

import pytest

from heightlab.bijections import (Coloring, NotLifted, enumerate_colorings,
                                  even_zero_fraction, is_proper, lift_bc,
                                  lift_torus, lift_vertex, lift_zero_one_bc,
                                  mod3_check_box, mod3_check_torus,
                                  to_coloring, yadin_forward, yadin_inverse)
from heightlab.graphs import box_graph, torus_graph
from heightlab.heights import (HOM, LIP, HeightFunction, extremal_functions,
                               is_valid, make_bc, range_of)
from heightlab.errors import InfeasibleBC
from heightlab.oracle import (count_functions, enumerate_functions,
                              exact_distribution, raw_enumerate, stat_range)
from heightlab.torus import build_torus


def test_lifted_torus_layers_are_bipartition_classes():
    base = build_torus([4, 4])
    lifted = lift_torus(base)
    for v in base.vertices():
        assert lifted.parity(lift_vertex(base, lifted, v, 0)) == 0
        assert lifted.parity(lift_vertex(base, lifted, v, 1)) == 1
    # vertical edges and cross edges both present
    for v in base.vertices():
        a = lift_vertex(base, lifted, v, 0)
        b = lift_vertex(base, lifted, v, 1)
        assert b in lifted.neighbors(a)
        for w in base.neighbors(v):
            c = lift_vertex(base, lifted, w, 1)
            assert c in lifted.neighbors(a)


def test_yadin_constant_example():
    base = build_torus([2, 2])
    g = HeightFunction(base, (0,) * 4, LIP)
    f = yadin_inverse(g)
    lifted = f.torus
    for v in base.vertices():
        assert f.values[lift_vertex(base, lifted, v, 0)] == 0
        assert f.values[lift_vertex(base, lifted, v, 1)] == -1
    assert yadin_forward(f, base).values == g.values
    assert range_of(f) - 1 == range_of(g)


def test_yadin_checkerboard():
    base = build_torus([2, 2])
    g = HeightFunction(base, tuple(base.parity(v) for v in base.vertices()), LIP)
    f = yadin_inverse(g)
    bc2 = lift_bc(make_bc(base, "one-point"))
    assert not [e for e in f.torus.edges()
                if abs(f.values[e[0]] - f.values[e[1]]) != 1]
    for v in base.vertices():
        layer = g.values[v] % 2
        assert f.values[lift_vertex(base, f.torus, v, layer)] == g.values[v]


def test_yadin_roundtrip_both_orders():
    base = build_torus([4])
    bc = make_bc(base, "one-point")
    bc2 = lift_bc(bc)
    # hom -> lip -> hom
    for f in enumerate_functions(bc2, HOM):
        g = yadin_forward(f, base)
        assert is_valid(g, bc)
        assert yadin_inverse(g).values == f.values
        assert range_of(g) == range_of(f) - 1
        assert max(f.values) == max(g.values)
        assert min(f.values) == min(g.values) - 1
    # lip -> hom -> lip
    for g in enumerate_functions(bc, LIP):
        f = yadin_inverse(g)
        assert is_valid(f, bc2)
        assert yadin_forward(f, base).values == g.values


def test_yadin_counts_match():
    for dims in ([2, 2], [4]):
        base = build_torus(dims)
        bc = make_bc(base, "one-point")
        assert count_functions(bc, LIP) == count_functions(lift_bc(bc), HOM)


def test_yadin_zero_one_family():
    base = build_torus([2, 2])
    bc = make_bc(base, "zero-one")       # B is the full box boundary
    bc2 = lift_zero_one_bc(bc)
    lip_set = {g.values for g in enumerate_functions(bc, LIP)}
    image = set()
    for f in enumerate_functions(bc2, HOM):
        g = yadin_forward(f, base)
        assert range_of(g) == range_of(f) - 1
        image.add(g.values)
    assert image == lip_set
    assert count_functions(bc2, HOM) == len(lip_set)


def test_yadin_legality_equivalence():
    base = build_torus([2, 2])
    good = make_bc(base, "explicit", B=[(0, 0), (1, 1)],
                   mu={(0, 0): 0, (1, 1): 0})
    extremal_functions(good, LIP)
    extremal_functions(lift_bc(good), HOM)
    bad = make_bc(base, "explicit", B=[(0, 0), (1, 1)],
                  mu={(0, 0): 0, (1, 1): 5})
    with pytest.raises(InfeasibleBC):
        extremal_functions(bad, LIP)
    with pytest.raises(InfeasibleBC):
        extremal_functions(lift_bc(bad), HOM)


def test_yadin_one_point_range_distribution():
    # uniform Lipschitz range law equals the lifted one-point range law - 1
    for dims in ([4], [2, 2]):
        base = build_torus(dims)
        lifted = lift_torus(base)
        d_lip = exact_distribution(make_bc(base, "one-point"), LIP, stat_range())
        d_hom = exact_distribution(make_bc(lifted, "one-point"), HOM, stat_range())
        shifted = {k - 1: Fraction(c, d_hom.total) for k, c in d_hom.support.items()}
        probs = {k: Fraction(c, d_lip.total) for k, c in d_lip.support.items()}
        assert shifted == probs


def test_not_lifted_guard():
    base = build_torus([4, 4])
    f = HeightFunction(base, tuple(base.parity(v) for v in base.vertices()), HOM)
    with pytest.raises(NotLifted):
        yadin_forward(f, base)


def test_to_coloring():
    t = build_torus([2, 2])
    f = HeightFunction(t, (-1, 0, 1, 2), LIP)
    assert to_coloring(f).colors == (2, 0, 1, 2)
    bc = make_bc(t, "one-point")
    graph = torus_graph(t)
    for g in enumerate_functions(bc, HOM):
        assert is_proper(to_coloring(g), graph)


def test_mod3_box_bijection():
    report = mod3_check_box([3, 3])
    assert report.bijective
    assert report.hom_count == report.col_count


def test_mod3_z6_not_surjective():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    report = mod3_check_torus(bc)
    assert report.injective and not report.surjective
    # the rotationally-colored cycle has no height-function preimage
    image = {tuple(v % 3 for v in vals) for vals in raw_enumerate(bc, HOM)}
    colorings = set(enumerate_colorings(torus_graph(t), {0: 0}))
    assert (0, 1, 2, 0, 1, 2) in colorings
    assert (0, 1, 2, 0, 1, 2) not in image


def test_mod3_zero_bc_bijection_44():
    t = build_torus([4, 4])
    bc = make_bc(t, "zero")
    report = mod3_check_torus(bc)
    assert report.bijective


def test_mod3_always_injective():
    for dims, kind in [([6], "one-point"), ([2, 4], "one-point"), ([4, 4], "zero")]:
        bc = make_bc(build_torus(dims), kind)
        assert mod3_check_torus(bc).injective


def test_even_zero_fraction_examples():
    t = build_torus([4, 4])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, tuple(t.parity(v) for v in t.vertices()), HOM)
    assert even_zero_fraction(f.values, bc.even_class()) == 0
    t6 = build_torus([6])
    walk = (0, 1, 2, 1, 0, -1)
    evens = [v for v in t6.vertices() if t6.parity(v) == 0]
    assert even_zero_fraction(walk, evens) == Fraction(1, 3)


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring((0, 1, 3))
    g = box_graph([2, 2])
    assert is_proper(Coloring((0, 1, 1, 0)), g)
    assert not is_proper(Coloring((0, 0, 1, 2)), g)
