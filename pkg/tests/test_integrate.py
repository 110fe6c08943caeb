from fractions import Fraction

import pytest

from linvariants import linv
from linvariants.integrate import default_base_point, default_depth_precision
from linvariants.pipeline import build_setup

from conftest import config


def log_oracle(x: Fraction, terms=80) -> Fraction:
    """log(1 + x), Mercator series in exact rationals."""
    return sum(Fraction((-1) ** (n + 1)) * x**n / n for n in range(1, terms))


def tate_ell(setup, ctx, basis, depth=8):
    integ = setup.integrator(ctx, depth=depth)
    c = basis[0]
    ell, _, _ = linv.solve_lt(ctx, ctx.kappa_sch(c), integ.kappa_col(c))
    return ell


def test_total_mass_vanishes(rank2_ctx, rank2_setup):
    ctx, basis = rank2_ctx
    integ = rank2_setup.integrator(ctx, depth=5)
    for c in basis:
        for row in integ.total_moments(c):
            assert all(x.known_valuation() >= 15 for x in row)


def test_residue_round_trip(rank2_ctx, rank2_setup, rank2_w4_ctx):
    S4, ctx4, basis4 = rank2_w4_ctx
    for S, ctx, basis in ((rank2_setup, *rank2_ctx), (S4, ctx4, basis4)):
        integ = S.integrator(ctx, depth=3)
        for c in basis:
            for k in range(ctx.n_edges):
                r = integ.residue(c, ctx.unfold.lift_edge(k))
                assert all((x - y).known_valuation() >= 6 for x, y in zip(r.data, c[k].data))


def test_tate_l_invariant_against_log_series(tate_setup, tate_ctx):
    ctx, basis = tate_ctx
    ell = tate_ell(tate_setup, ctx, basis)
    oracle = ctx.L(log_oracle(Fraction(5)) / 2)
    assert (ell - oracle).known_valuation() >= 7


def test_branch_shifts_tate_invariant(tate_ctx):
    # with log(p) = b the Tate period contributes log(q)/v(q) + b
    cfg = config("tate_w2.json", branch="(3) + O(p^20)")
    S = build_setup(cfg)
    ctx = S.context(S.components[0])
    basis = ctx.harmonic_basis()
    ell = tate_ell(S, ctx, basis)
    oracle = ctx.L(log_oracle(Fraction(5)) / 2 + 3)
    assert (ell - oracle).known_valuation() >= 7


def test_transformation_law_weight_two(rank2_ctx, rank2_setup):
    from linvariants.btree import mobius

    ctx, basis = rank2_ctx
    integ = rank2_setup.integrator(ctx, depth=6)
    L = ctx.L
    z = integ.z0 * L(2) + L(3)
    for i in (1, 2):
        g = tuple(ctx.module.sigma(0, x) for x in ctx.G.generators[i - 1])
        a, b, c_, d = g
        for c in basis:
            lhs = integ.g_eval(c, mobius(g, z))[0]
            rhs = ((c_ * z + d) ** 2 / (a * d - b * c_)) * integ.g_eval(c, z)[0]
            assert (lhs - rhs).known_valuation() - rhs.valuation() >= default_depth_precision(6, 2, 5)


def test_base_point_lies_outside_the_base_field(tate_setup):
    z0 = default_base_point(tate_setup.L, tate_setup.K)
    assert z0.valuation() == 0
    assert z0.residue()[1] != 0


def test_covering_of_rank_one_limit_set(tate_setup, tate_ctx):
    ctx, _ = tate_ctx
    assert len(tate_setup.integrator(ctx, depth=8).balls()) == 2


@pytest.mark.parametrize("depth,k,expected", [(8, 2, 6), (8, 4, 6), (10, 6, 7), (8, 26, 4), (8, 25, 5)])
def test_depth_error_model(depth, k, expected):
    assert default_depth_precision(depth, k, 5) == expected
