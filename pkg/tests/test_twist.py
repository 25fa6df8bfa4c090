import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import alt, cartan, pairing
from oracles import phi_matrix_oracle
from qmpg.qpair import MINUS, PLUS, BorelElt, degree, twisted_pair
from qmpg.rootsys import Lattice
from qmpg.scalars import ONE, evec, qpow
from qmpg.twist import (Bicharacter, BicharacterError, DeformedPairing, PTable, cocycle_class,
                        twist_factor, twist_mul_borel, verify_hopf_twist)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


def _w(xs):
    return tuple(Fraction(x) for x in xs)


def _sample(c, side):
    return [BorelElt.gen(c, side, 0), BorelElt.gen(c, side, 1), BorelElt.k(c, side, c.varpi(0)),
            BorelElt.monomial(c, side, torus=c.alpha(1), word=(0, 1))]


def test_rejects_non_alternating():
    c = cartan("A2")
    with pytest.raises(BicharacterError):
        Bicharacter(c, [[1, 0], [0, 0]])
    with pytest.raises(BicharacterError):
        Bicharacter(c, [[0, 1], [1, 0]])


@settings(max_examples=40, deadline=None)
@given(fracs, small, small, small)
def test_bicharacter_laws(x, a, b, d):
    c = cartan("A2")
    pt = Bicharacter(c, alt(2, [x]))
    la, mu, nu = _w(a), _w(b), _w(d)
    s = tuple(p + q for p, q in zip(la, mu))
    assert pt.p(la, la) == ONE
    assert pt.p(s, nu) == pt.p(la, nu) * pt.p(mu, nu)
    assert pt.p(la, mu) * pt.p(mu, la) == ONE
    assert pt.u(la, mu) == pt.phi_pair(la, mu)


@pytest.mark.parametrize("name,lat", [("A2", "weight"), ("B2", "root"), ("G2", "weight")])
def test_phi_matches_sympy_oracle(name, lat):
    c = cartan(name)
    L = getattr(Lattice, lat)(c)
    x = Fraction(3, 7)
    pt = Bicharacter(c, alt(2, [x]), L)
    # the oracle takes u on the weight basis
    binv = sympy.Matrix(L.matrix).inv()
    ut = binv.T * sympy.Matrix(alt(2, [x])) * binv
    want = phi_matrix_oracle(name, ut.tolist())
    got = sympy.Matrix(2, 2, lambda i, j: sympy.Rational(str(evec(pt.phi[i][j])[0]) if pt.phi[i][j] else 0))
    assert got == want


def test_hopf_twist_random_bicharacters():
    c = cartan("A2")
    rng = random.Random(11)
    for _ in range(5):
        x = Fraction(rng.randint(-6, 6) or 1, rng.randint(1, 5))
        pt = Bicharacter(c, alt(2, [x]))
        for side in (PLUS, MINUS):
            assert verify_hopf_twist(_sample(c, side), pt).ok


def test_hopf_twist_negative_controls():
    c = cartan("A2")
    # not multiplicative: the coproduct breaks
    rep = verify_hopf_twist(_sample(c, PLUS), PTable(lambda l, m: l[0] * l[0] * m[1]))
    assert not rep.ok and rep.failed == "coproduct"
    # multiplicative but p(l, l) != 1: the antipode breaks
    rep = verify_hopf_twist(_sample(c, MINUS), PTable(lambda l, m: l[0] * m[1]))
    assert not rep.ok and rep.failed == "antipode"


def test_twist_then_untwist():
    c = cartan("B2")
    pt = Bicharacter(c, alt(2, [Fraction(5, 3)]))
    inv = pt.inverse()
    for side in (PLUS, MINUS):
        s = _sample(c, side)
        for x in s:
            for y in s:
                (m1, _), = x.terms.items()
                (m2, _), = y.terms.items()
                f = twist_factor(inv, degree(c, side, m1), degree(c, side, m2))
                assert twist_mul_borel(pt, x, y).scale(qpow(f)) == x * y


def test_twisted_multiplication_associative():
    c = cartan("A2")
    pt = Bicharacter(c, alt(2, [Fraction(2, 5)]))
    s = _sample(c, PLUS)
    for x in s:
        for y in s:
            for z in s:
                assert twist_mul_borel(pt, twist_mul_borel(pt, x, y), z) == \
                    twist_mul_borel(pt, x, twist_mul_borel(pt, y, z))


@pytest.mark.parametrize("inverse", [False, True])
def test_deformed_pairing_axioms(inverse):
    c = cartan("A2")
    P = pairing("A2")
    rng = random.Random(5)
    for _ in range(3):
        pt = Bicharacter(c, alt(2, [Fraction(rng.randint(-4, 4), rng.randint(1, 3))]))
        D = DeformedPairing(P, pt, inverse)
        ps, ms = _sample(c, PLUS), _sample(c, MINUS)
        for _ in range(25):
            assert D.check_axioms(rng.choice(ps), rng.choice(ps), rng.choice(ms), rng.choice(ms)) == []


def test_twisted_pair_closed_form():
    c = cartan("A2")
    P = pairing("A2")
    pt = Bicharacter(c, alt(2, [Fraction(1, 2)]))
    for lam in (c.varpi(0), c.alpha(1), c.zero()):
        for mu in (c.varpi(1), c.alpha(0)):
            for x, y in (((0,), (0,)), ((0, 1), (1, 0)), ((), ())):
                X = BorelElt.monomial(c, PLUS, word=x)
                Y = BorelElt.monomial(c, MINUS, word=y)
                v = twisted_pair(P, pt, X, lam, Y, mu)
                assert v == qpow(pt.phi_minus_pair(lam, mu)) * P.pair(X, Y)


def test_formal_irrational_bicharacter():
    c = cartan("A2")
    pt = Bicharacter(c, [[0, (0, 1)], [(0, -1), 0]], names=("alpha",))
    assert pt.render_matrix(pt.U) == [["0", "alpha"], ["-alpha", "0"]]
    assert verify_hopf_twist(_sample(c, PLUS), pt).ok
    assert pt.p(c.varpi(0), c.varpi(1)) == qpow((0, Fraction(1, 2)))


def test_cocycle_class():
    c = cartan("A2")
    pt = Bicharacter(c, alt(2, [3]))
    g = cocycle_class(pt)
    assert g[0][1] == qpow(3) and g[1][0] == qpow(-3) and g[0][0] == ONE
