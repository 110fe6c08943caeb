import random

import pytest
from hypothesis import given, settings, strategies as st

from linvariants.btree import det, matmul
from linvariants.coeff import CoeffModule, WeightData
from linvariants.padic import PadicField

K = PadicField(5, 1, 20)
K2 = PadicField(5, 2, 16)
L2 = PadicField(5, 4, 16)


def rand_mat(F, rng):
    while True:
        g = tuple(F.from_coeffs([rng.randrange(-30, 30) for _ in range(F.d)]) for _ in range(4))
        if not det(g).is_zero() and det(g).valuation() < 3:
            return g


@given(st.integers(0, 10**6), st.sampled_from([(2, 2), (4, 4), (6, 4), (3, 5)]))
@settings(max_examples=30)
def test_action_is_multiplicative(seed, kw):
    rng = random.Random(seed)
    k, w = kw
    M = CoeffModule(WeightData.from_kw((k,), w), K)
    g, h = rand_mat(K, rng), rand_mat(K, rng)
    P = M.random(rng)
    assert M.act(matmul(g, h), P) == M.act(g, M.act(h, P))
    if w % 2 and (det(g).valuation() % 2 or det(h).valuation() % 2):
        with pytest.raises(ValueError):
            M.star_act(g if det(g).valuation() % 2 else h, P)
        return
    assert M.star_act(matmul(g, h), P) == M.star_act(g, M.star_act(h, P))


@given(st.integers(0, 10**6))
@settings(max_examples=15)
def test_action_over_quadratic_field(seed):
    rng = random.Random(seed)
    M = CoeffModule(WeightData.from_kw((4, 2), 4), K2, L2)
    assert M.dim == 3
    g, h = rand_mat(K2, rng), rand_mat(K2, rng)
    P = M.random(rng)
    assert M.act(matmul(g, h), P) == M.act(g, M.act(h, P))


def test_dual_action_is_adjoint():
    rng = random.Random(1)
    M = CoeffModule(WeightData.from_kw((4,), 4), K)
    for _ in range(5):
        g = rand_mat(K, rng)
        P, Q = M.random(rng), M.random(rng)
        assert M.dual_pair(M.dual_act(Q, g), P) == M.dual_pair(Q, M.act(g, P))


def test_parity_is_enforced():
    with pytest.raises(ValueError):
        WeightData.from_kw((3,), 4)
    with pytest.raises(ValueError):
        WeightData.from_kw((1,), 1)
    assert WeightData.from_kw((4, 2), 6).v == (1, 2)


def test_dimension_is_product():
    assert WeightData.from_kw((4, 6), 6).dim == 3 * 5


def test_phi_q_squares_to_scalar_in_weight_two_factor():
    M = CoeffModule(WeightData.from_kw((4,), 4), K)
    P = M.from_list([1, 2, 3])
    # X^j Y^{m-j} -> p^{m-j} Y^j X^{m-j}; applied twice gives p^m
    assert M.phi_q(M.phi_q(P)) == P.scale(K(25))
