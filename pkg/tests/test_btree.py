import random

from hypothesis import given, settings, strategies as st

from linvariants.btree import BruhatTitsTree, TreeEdge, adjugate, det, matmul
from linvariants.padic import PadicField

K = PadicField(5, 1, 30)
T = BruhatTitsTree(K)
K2 = PadicField(3, 2, 20)
T2 = BruhatTitsTree(K2)


def random_matrix(F, rng):
    while True:
        g = tuple(F(rng.randrange(-200, 200)) * F.p_power(rng.randrange(0, 3)) for _ in range(4))
        if not det(g).is_zero():
            return g


def lattice_distance(g, h):
    # d([g], [h]) = v(det M) - 2 min v(M_ij) for M = g^-1 h, computed with the adjugate
    M = matmul(adjugate(g), h)
    return det(M).valuation() - 2 * min(x.valuation() for x in M if not x.is_zero())


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_distance_matches_elementary_divisors(seed):
    rng = random.Random(seed)
    g, h = random_matrix(K, rng), random_matrix(K, rng)
    v, w = T.vertex_from_matrix(g), T.vertex_from_matrix(h)
    assert T.distance(v, w) == lattice_distance(g, h)


@given(st.integers(0, 10**6))
@settings(max_examples=30)
def test_action_is_a_group_action_and_isometry(seed):
    rng = random.Random(seed)
    g, h = random_matrix(K, rng), random_matrix(K, rng)
    v = T.vertex_from_matrix(random_matrix(K, rng))
    w = T.vertex_from_matrix(random_matrix(K, rng))
    assert T.act(matmul(g, h), v) == T.act(g, T.act(h, v))
    assert T.distance(T.act(g, v), T.act(g, w)) == T.distance(v, w)


def test_valency_is_q_plus_one():
    for tree in (T, T2):
        v = tree.base
        for _ in range(3):
            nb = tree.neighbors(v)
            assert len(set(nb)) == tree.q + 1
            assert all(tree.distance(v, w) == 1 for w in nb)
            v = nb[-1]


def test_covering_sizes_and_disjoint_balls():
    for depth in range(3):
        cov = T.covering(depth)
        assert len(cov) == 6 * 5**depth
        balls = [T.edge_ball(e) for e in cov]
        for i, a in enumerate(balls):
            for b in balls[i + 1:]:
                assert T.balls_disjoint(a, b)


def test_edge_ball_of_reverse_is_complement():
    e = T.covering(1)[3]
    a, b = T.edge_ball(e), T.edge_ball(e.reverse)
    assert a.complement != b.complement
    assert a.center == b.center


def test_geodesic_is_a_path():
    rng = random.Random(2)
    v = T.vertex_from_matrix(random_matrix(K, rng))
    w = T.vertex_from_matrix(random_matrix(K, rng))
    path = T.geodesic(v, w)
    assert len(path) == T.distance(v, w)
    for e, f in zip(path, path[1:]):
        assert e.terminus == f.origin
    assert all(T.adjacent(e.origin, e.terminus) for e in path)


def test_edge_rep_maps_standard_edge():
    rng = random.Random(5)
    e0 = TreeEdge(T.base, T.parent(T.base))
    for e in T.covering(2)[:10]:
        g = T.edge_rep(e)
        assert T.act_edge(g, e0) == e
    assert rng  # deterministic
