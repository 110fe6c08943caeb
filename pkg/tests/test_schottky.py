import copy

import pytest
from hypothesis import given, strategies as st

from linvariants.btree import BruhatTitsTree
from linvariants.padic import PadicField
from linvariants.schottky import (
    SchottkyError,
    fixture_from_json,
    hyperbolic_data,
    inverse_word,
    quotient_graph,
    reduce_word,
    verify_schottky,
)

from conftest import fixture_json

K = PadicField(5, 1, 40)
T = BruhatTitsTree(K)


def mat(*xs):
    return tuple(K(x) for x in xs)


words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


@given(words)
def test_word_reduction(w):
    r = reduce_word(w)
    assert reduce_word(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))
    assert reduce_word(tuple(w) + inverse_word(w)) == ()


@pytest.mark.parametrize("mult,length", [(150, 2), (30, 1), (5**3 * 7, 3)])
def test_rank_one_quotient_is_a_cycle_of_translation_length(mult, length):
    G = verify_schottky(T, [mat(mult, 0, 0, 1)])
    assert hyperbolic_data(G.generators[0], K).length == length
    Q = quotient_graph(G)
    assert len(Q.vertices) == length
    assert len(Q.edges) == 2 * length
    assert all(Q.valency(i) == 2 for i in range(length))


def test_rank_two_euler_characteristic():
    G = verify_schottky(T, [mat(150, 0, 0, 1), mat(138, -137, -137, 138)])
    Q = quotient_graph(G)
    assert Q.euler_characteristic() == 1 - 2


@pytest.mark.parametrize(
    "gens,msg",
    [
        ([mat(0, -1, 1, 0)], "not hyperbolic"),
        ([mat(1, 1, 0, 1)], "not hyperbolic"),
        ([mat(150, 0, 0, 1), mat(25, 0, 0, 1)], "overlap"),
        ([mat(1, 0, 0, 0)], "singular"),
    ],
)
def test_non_schottky_input_is_rejected(gens, msg):
    with pytest.raises(SchottkyError, match=msg):
        verify_schottky(T, gens)


def test_fixture_round_trip():
    obj = fixture_json("schottky_rank2.json")
    K2, tree, comps, _ = fixture_from_json(obj, N=40)
    G = comps[0].group
    assert quotient_graph(G) == comps[0].graph


def test_corrupted_involution_names_the_edge():
    obj = copy.deepcopy(fixture_json("tate_rank1.json"))
    obj["edges"][0]["reverse"] = obj["edges"][0]["id"] if obj["edges"][0]["reverse"] != 0 else 2
    with pytest.raises(SchottkyError, match=r"edge \d+"):
        fixture_from_json(obj, N=40)
