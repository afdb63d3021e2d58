import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heightlab.errors import NoAllowedValue
from heightlab.heights import HOM, LIP, HeightFunction, is_valid, make_bc
from heightlab.oracle import (enumerate_functions, exact_distribution,
                              stat_even_zero_fraction, stat_height_at,
                              stat_range)
from heightlab.sampler import (RandomSource, allowed_values, batch_statistics,
                               cftp_sample, cftp_sample_info, heat_bath_step,
                               mcmc_sample, tv_distance)
from heightlab.torus import build_torus


def test_heat_bath_binary_choice():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 1, 0, 1, 0, 1), HOM)
    # neighbours of vertex 1 both equal 0: allowed {-1, 1}
    assert allowed_values(f, bc, 1) == [-1, 1]
    assert heat_bath_step(f, bc, 1, 0.9)[1] == 1
    assert heat_bath_step(f, bc, 1, 0.1)[1] == -1


def test_heat_bath_forced_value():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 1, 2, 1, 0, 1), HOM)
    # neighbours of vertex 1 take 0 and 2: forced to 1
    assert allowed_values(f, bc, 1) == [1]
    for u in (0.0, 0.3, 0.99):
        assert heat_bath_step(f, bc, 1, u)[1] == 1


def test_heat_bath_lip_interval():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 0, 1, 1, 1, 0), LIP)
    # neighbours of vertex 1 are 0 and 1: allowed {0, 1}
    assert allowed_values(f, bc, 1) == [0, 1]
    assert heat_bath_step(f, bc, 1, 0.95)[1] == 1


def test_heat_bath_rejects_frozen_vertex():
    t = build_torus([6])
    bc = make_bc(t, "one-point")
    f = HeightFunction(t, (0, 1, 0, 1, 0, 1), HOM)
    with pytest.raises(ValueError):
        heat_bath_step(f, bc, 0, 0.5)


def test_heat_bath_no_allowed_value():
    t = build_torus([4, 4])
    bc = make_bc(t, "one-point")
    bad = HeightFunction(t, tuple(range(16)), HOM)
    with pytest.raises(NoAllowedValue):
        heat_bath_step(bad, bc, (1, 1), 0.5)


def test_monotone_update_exhaustive_pairs():
    """f <= g pointwise and shared (v, u) preserve the order (CFTP core)."""
    t = build_torus([2, 4])
    bc = make_bc(t, "one-point")
    fns = list(enumerate_functions(bc, HOM))
    us = [0.01, 0.25, 0.5, 0.75, 0.99]
    pairs = [(f, g) for f in fns for g in fns
             if all(a <= b for a, b in zip(f.values, g.values))]
    assert pairs
    for f, g in pairs:
        for v in range(1, t.vertex_count):
            for u in us:
                fv = heat_bath_step(f, bc, v, u)
                gv = heat_bath_step(g, bc, v, u)
                assert all(a <= b for a, b in zip(fv.values, gv.values))


def test_monotone_update_lip_zero_one():
    t = build_torus([2, 2])
    bc = make_bc(t, "zero-one")
    fns = list(enumerate_functions(bc, LIP))
    for f, g in itertools.product(fns, fns):
        if not all(a <= b for a, b in zip(f.values, g.values)):
            continue
        for v in range(t.vertex_count):
            for u in (0.1, 0.5, 0.9):
                fv = heat_bath_step(f, bc, v, u)
                gv = heat_bath_step(g, bc, v, u)
                assert all(a <= b for a, b in zip(fv.values, gv.values))


def test_detailed_balance_single_site():
    """Configurations differing at one site have equal transition rates."""
    t = build_torus([2, 4])
    bc = make_bc(t, "one-point")
    fns = list(enumerate_functions(bc, HOM))
    for f, g in itertools.combinations(fns, 2):
        diff = [v for v in t.vertices() if f.values[v] != g.values[v]]
        if len(diff) != 1:
            continue
        v = diff[0]
        af, ag = allowed_values(f, bc, v), allowed_values(g, bc, v)
        assert af == ag  # same neighbours, so same allowed set
        assert g.values[v] in af and f.values[v] in ag
        assert Fraction(1, len(af)) == Fraction(1, len(ag))


def test_cftp_frozen_bc_returns_immediately():
    t = build_torus([2, 2])
    fixed = {v: t.parity(v) for v in t.vertices()}
    bc = make_bc(t, "explicit", B=list(fixed), mu=fixed)
    res = cftp_sample_info(bc, HOM, RandomSource(1))
    assert res.schedule.epochs == (1,)
    assert res.function.values == tuple(fixed[v] for v in t.vertices())


def test_cftp_matches_oracle_z6():
    bc = make_bc(build_torus([6]), "one-point")
    exact = exact_distribution(bc, HOM, stat_height_at((3,)))
    emp = batch_statistics(bc, HOM, RandomSource(7), 4000, [stat_height_at((3,))])
    assert tv_distance(emp["height@3"], exact) < 0.05


def test_cftp_matches_oracle_22_range():
    bc = make_bc(build_torus([2, 2]), "one-point")
    exact = exact_distribution(bc, HOM, stat_range())
    emp = batch_statistics(bc, HOM, RandomSource(11), 4000, [stat_range()])
    assert tv_distance(emp["range"], exact) < 0.05


def test_cftp_lip_zero_one():
    bc = make_bc(build_torus([2, 2]), "zero-one")
    exact = exact_distribution(bc, LIP, stat_range())
    emp = batch_statistics(bc, LIP, RandomSource(13), 4000, [stat_range()],
                           method="cftp")
    assert tv_distance(emp["range"], exact) < 0.05


def test_lip_via_yadin_matches_oracle():
    bc = make_bc(build_torus([2, 2]), "one-point")
    exact = exact_distribution(bc, LIP, stat_range())
    emp = batch_statistics(bc, LIP, RandomSource(17), 4000, [stat_range()],
                           via_yadin=True)
    assert tv_distance(emp["range"], exact) < 0.05


def test_reproducibility_golden():
    bc = make_bc(build_torus([6]), "one-point")
    f = cftp_sample(bc, HOM, RandomSource(42))
    g = cftp_sample(bc, HOM, RandomSource(42))
    assert f.values == g.values == (0, -1, -2, -1, 0, 1)


def test_mcmc_rejects_zero_sweeps():
    bc = make_bc(build_torus([6]), "one-point")
    with pytest.raises(ValueError):
        mcmc_sample(bc, HOM, RandomSource(1), 0)


def test_mcmc_monotone_pair_stays_ordered():
    from heightlab import kernels
    from heightlab.sampler import chain_setup
    bc = make_bc(build_torus([4, 4]), "zero")
    setup = chain_setup(bc, HOM)
    lo, hi = setup.fmin.copy(), setup.fmax.copy()
    for time in range(50):
        kernels.sweep_pair(lo, hi, setup.nbrs, setup.frozen, setup.clamp_lo,
                           setup.clamp_hi, setup.model_lip, 3, 0, time)
        assert (lo <= hi).all()


def test_mcmc_close_to_oracle():
    bc = make_bc(build_torus([6]), "one-point")
    exact = exact_distribution(bc, HOM, stat_height_at((3,)))
    emp = batch_statistics(bc, HOM, RandomSource(19), 3000,
                           [stat_height_at((3,))], method="mcmc", sweeps=200)
    assert tv_distance(emp["height@3"], exact) < 0.05


def test_batch_single_sample():
    bc = make_bc(build_torus([6]), "one-point")
    emp = batch_statistics(bc, HOM, RandomSource(3), 1, [stat_range()])
    assert emp["range"].total == 1 and sum(emp["range"].counts.values()) == 1


def test_batch_even_zero_fraction_vs_exact():
    bc = make_bc(build_torus([4, 4]), "zero")
    exact = exact_distribution(bc, HOM, stat_even_zero_fraction())
    exact_mean = sum(float(v) * c for v, c in exact.support.items()) / exact.total
    emp = batch_statistics(bc, HOM, RandomSource(23), 800,
                           [stat_even_zero_fraction()])
    assert abs(emp["evenzero"].mean() - exact_mean) < 0.05


def test_clopper_pearson_intervals_cover_point():
    bc = make_bc(build_torus([6]), "one-point")
    emp = batch_statistics(bc, HOM, RandomSource(29), 500, [stat_range()])
    e = emp["range"]
    for v in e.counts:
        lo, hi = e.intervals[v]
        assert 0.0 <= lo <= e.frequency(v) <= hi <= 1.0
        assert e.radius(v) > 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 40))
def test_mcmc_always_valid(seed, sweeps):
    bc = make_bc(build_torus([2, 4]), "one-point")
    f = mcmc_sample(bc, HOM, RandomSource(seed), sweeps)
    assert is_valid(f, bc)
