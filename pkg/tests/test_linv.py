import random

import pytest
from hypothesis import given, settings, strategies as st

from linvariants import linalg
from linvariants.linv import (
    LInvariantError,
    MonodromyModule,
    check_module,
    compare,
    eigencocycles,
    fm_decompose,
    l_fm,
    module_ok,
)
from linvariants.padic import PadicField

F = PadicField(5, 2, 30)
q = 5


def synthetic(s, r, lam, beta):
    """Module with N e2 = r e1, phi = beta/q on e1 and beta on e2 - s e1, Fil = <e2 + lam e1>.

    Then x = e2 - s e1 spans D2 and x - L N x lies in Fil exactly for L = -(s + lam) / r.
    """
    z = F.zero()
    lo = beta / F(q)
    phi = [[lo, -s * beta + s * lo], [z, beta]]
    return MonodromyModule(F, phi, [[z, r], [z, z]], [lam, F.one()], 1, q)


units = st.integers(1, 10**8).filter(lambda n: n % 5)


@given(st.integers(-10**8, 10**8), units, st.integers(-10**6, 10**6), st.integers(0, 3))
@settings(max_examples=40)
def test_l_fm_matches_closed_form(s, r, lam, k):
    D = synthetic(F(s), F(r), F(lam), F(q) ** k)
    expected = -(F(s) + F(lam)) / F(r)
    assert (l_fm(D) - expected).known_valuation() >= 20
    assert all(module_ok(check_module(D), 20).values())


def test_module_checks_catch_broken_axioms():
    D = synthetic(F(3), F(1), F(0), F(5))
    D.N = [[F(1), F(1)], [F.zero(), F.zero()]]
    ok = module_ok(check_module(D), 10)
    assert not ok["N_squared_zero"]
    D = synthetic(F(3), F(1), F(0), F(5))
    D.fil = [F.one(), F.zero()]  # Fil = ker N
    assert not module_ok(check_module(D), 10)["fil_transverse"]


def test_orientation_ambiguity_aborts():
    D = synthetic(F(3), F(1), F(0), F(5))
    D.phi = [[F(2), F.zero()], [F.zero(), F(2)]]
    with pytest.raises(LInvariantError):
        fm_decompose(D)


def test_json_round_trip():
    D = synthetic(F(7), F(2), F(1), F(25))
    E = MonodromyModule.from_json(D.to_json(), F)
    assert E.phi == D.phi and E.N == D.N and E.fil == D.fil and E.q == D.q


def test_eigencocycles_of_known_matrix():
    rng = random.Random(4)
    P = [[F(rng.randrange(1, 50)) for _ in range(3)] for _ in range(3)]
    while linalg.rank(P) < 3:
        P = [[F(rng.randrange(1, 50)) for _ in range(3)] for _ in range(3)]
    eig = [F(1), F(6), F(5 * 7)]
    Dg = [[eig[i] if i == j else F.zero() for j in range(3)] for i in range(3)]
    # M = P D P^-1, the inverse column by column
    Pinv = [linalg.solve(P, [F.one() if i == j else F.zero() for i in range(3)])[0] for j in range(3)]
    Pinv = linalg.transpose(Pinv)
    M = linalg.matmul(linalg.matmul(P, Dg), Pinv)
    found = eigencocycles(M, 15)
    assert len(found) == 3
    for root, vec in found:
        assert max((root - e).known_valuation() for e in eig) >= 12
        Mv = linalg.matvec(M, vec)
        assert all((a - root * b).known_valuation() >= 12 for a, b in zip(Mv, vec))


def test_compare_uses_known_digits():
    a = F(1).add_bigoh(3)
    b = F(1 + 5**5)
    assert compare(a, b, 3).passed
    assert not compare(a, b, 4).passed
