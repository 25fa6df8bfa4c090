import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import alt, cartan, pairing
from qmpg.double import (DoubleElt, character_check, derived_relations, double_mul, engine,
                         quotient_to_uqg_check, set_default_pairing, to_uqg, twist_mul_double,
                         twisted_double_check)
from qmpg.qpair import MINUS, PLUS
from qmpg.rootsys import wscale
from qmpg.scalars import ZERO, qhat, qpow
from qmpg.twist import Bicharacter


@pytest.fixture(autouse=True)
def _default_pairings():
    for name in ("A1", "A2", "B2"):
        set_default_pairing(pairing(name))


def _k(x):
    return tuple(Fraction(v) for v in x)


@pytest.mark.parametrize("name", ["A1", "A2", "B2"])
def test_cross_relation(name):
    c = cartan(name)
    e, f = DoubleElt.e, DoubleElt.f
    for i in range(c.n):
        for j in range(c.n):
            lhs = e(c, i) * f(c, j) - f(c, j) * e(c, i)
            if i != j:
                assert lhs.is_zero()
            else:
                a = c.alpha(i)
                want = (DoubleElt.s(c, a) - DoubleElt.t(c, wscale(a, -1))).scale(qhat(c.d[i]))
                assert lhs == want


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_torus_relations(name):
    c = cartan(name)
    s, t = DoubleElt.s, DoubleElt.t
    for lam in [c.varpi(0), c.alpha(c.n - 1)]:
        neg = wscale(lam, -1)
        for j in range(c.n):
            x = qpow(c.inner(lam, c.alpha(j)))
            assert s(c, lam) * DoubleElt.e(c, j) * s(c, neg) == DoubleElt.e(c, j).scale(x)
            assert t(c, lam) * DoubleElt.e(c, j) * t(c, neg) == DoubleElt.e(c, j).scale(x)
            assert s(c, lam) * DoubleElt.f(c, j) * s(c, neg) == DoubleElt.f(c, j).scale(x.inv())
            assert t(c, lam) * DoubleElt.f(c, j) * t(c, neg) == DoubleElt.f(c, j).scale(x.inv())
        for mu in [c.varpi(c.n - 1)]:
            assert s(c, lam) * t(c, mu) == t(c, mu) * s(c, lam)
            assert s(c, lam) * s(c, mu) == s(c, tuple(a + b for a, b in zip(lam, mu)))


@pytest.mark.parametrize("name", ["A1", "A2", "B2"])
def test_derived_relations_and_quotient(name):
    ok, lines = derived_relations(pairing(name))
    assert ok, lines
    rep = quotient_to_uqg_check(pairing(name))
    assert rep.ok, rep.failure


def test_quotient_identifies_s_and_t():
    c = cartan("A2")
    lam = c.varpi(0)
    assert to_uqg(DoubleElt.s(c, lam)) == to_uqg(DoubleElt.t(c, lam))


def _rmon(rng, c):
    lam = tuple(Fraction(rng.randint(-1, 1)) for _ in range(c.n))
    w = tuple(rng.randrange(c.n) for _ in range(rng.randint(0, 3)))
    return lam, w


def test_straightening_orders_agree():
    c = cartan("A2")
    eng = engine(pairing("A2"))
    rng = random.Random(3)
    for _ in range(12):
        u, a = _rmon(rng, c), _rmon(rng, c)
        r1 = eng.straighten(u, a, "left")
        assert r1 == eng.straighten(u, a, "right")
        assert r1 == eng.straighten_direct(u, a)


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_associativity(rng):
    c = cartan("A2")

    def rd():
        return DoubleElt(c, {(_rmon(rng, c), _rmon(rng, c)): 1})
    x, y, z = rd(), rd(), rd()
    assert (x * y) * z == x * (y * z)


def test_character_check():
    c = cartan("A2")
    z = c.zero()
    pairs = [((z, (j,)), (z, (i,))) for i in range(2) for j in range(2)]
    pairs.append(((c.varpi(0), ()), (c.varpi(1), ())))
    assert character_check(pairing("A2"), pairs)


@pytest.mark.parametrize("name", ["A1", "A2"])
def test_twisted_double(name):
    c = cartan(name)
    rng = random.Random(7)
    z = c.zero()
    pairs = [((z, (j,)), (z, (i,))) for i in range(c.n) for j in range(c.n)]
    pairs += [(_rmon(rng, c), _rmon(rng, c)) for _ in range(4)]
    for _ in range(2):
        U = alt(c.n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3))]) if c.n > 1 else [[0]]
        assert twisted_double_check(pairing(name), Bicharacter(c, U), pairs).ok


def test_twisted_double_product_associative():
    c = cartan("A2")
    pt = Bicharacter(c, alt(2, [Fraction(1, 3)]))
    e, f, s = DoubleElt.e(c, 0), DoubleElt.f(c, 1), DoubleElt.s(c, c.varpi(1))
    for x, y, z in [(e, f, s), (f, e, e), (s, f, e)]:
        assert twist_mul_double(pt, twist_mul_double(pt, x, y), z) == \
            twist_mul_double(pt, x, twist_mul_double(pt, y, z))


def test_twisted_double_negative_control():
    from qmpg.twist import PTable
    c = cartan("A2")
    z = c.zero()
    pairs = [((z, (j,)), (z, (i,))) for i in range(2) for j in range(2)] + [((z, (0, 1)), (z, (1, 0)))]
    for table in (lambda l, m: l[0] * l[0] * m[1], lambda l, m: l[0] * m[1]):
        assert not twisted_double_check(pairing("A2"), PTable(table), pairs).ok
