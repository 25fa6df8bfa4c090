from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cartan
from oracles import WEYL_ORDER, freudenthal, positive_roots, weyl_dim_oracle
from qmpg.rootsys import CartanData, CartanError, Lattice, WeylGroup

TYPES = ["A1", "A2", "A3", "B2", "C2", "G2"]


@pytest.mark.parametrize("name", TYPES)
def test_weyl_group_order(name):
    assert len(WeylGroup(cartan(name))) == WEYL_ORDER[name]


@pytest.mark.parametrize("name", TYPES)
def test_positive_roots_match_oracle(name):
    c = cartan(name)
    got = sorted(tuple(int(x) for x in c.root_coords(r)) for r in c.positive_roots())
    assert got == positive_roots(name)


@pytest.mark.parametrize("name", TYPES)
def test_length_equals_inversions(name):
    w = cartan(name).weyl()
    for e in w.elements:
        assert e.length == w.inversions(e)
    assert w.longest.length == len(cartan(name).positive_roots())


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "A3"])
def test_weyl_dimension_matches_freudenthal(name):
    c = cartan(name)
    for lam in product(range(3), repeat=c.n):
        assert c.weyl_dimension(lam) == weyl_dim_oracle(name, lam)


def test_symmetrizers():
    assert cartan("B2").d == (2, 1)
    assert cartan("G2").d == (1, 3)
    for name in TYPES:
        c = cartan(name)
        for i in range(c.n):
            for j in range(c.n):
                assert c.inner(c.alpha(i), c.alpha(j)) == c.d[i] * c.A[i][j]
                assert c.inner(c.varpi(i), c.alpha(j)) == c.d[j] * (i == j)


def test_rejects_bad_matrices():
    with pytest.raises(CartanError):
        CartanData([[2, -1], [-1, 3]])
    with pytest.raises(CartanError):
        CartanData([[2, 1], [1, 2]])
    with pytest.raises(CartanError):
        CartanData([[2, -2], [-2, 2]])  # affine


def test_lattices():
    c = cartan("A2")
    P, Q = Lattice.weight(c), Lattice.root(c)
    assert P.contains(c.varpi(0)) and not Q.contains(c.varpi(0))
    assert Q.contains(c.alpha(0))
    with pytest.raises(CartanError):
        Lattice(c, [[3, 0], [0, 3]])
    assert len(Q.box(1)) == 9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2"]), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_weyl_action_is_isometric(name, coords):
    c = cartan(name)
    lam = tuple(Fraction(x) for x in coords)
    dom, w = c.dominant_orbit(lam)
    assert c.is_dominant(dom)
    assert w.act(lam) == dom
    for e in c.weyl().elements:
        assert c.inner(e.act(lam), e.act(lam)) == c.inner(lam, lam)


def test_weyl_parse():
    w = cartan("A2").weyl()
    assert w.parse("e") is w.identity
    assert w.parse("s1,s2,s1") == w.longest
    with pytest.raises(ValueError):
        w.parse("s3")


def test_norm_criterion_on_dual_weights():
    from qmpg.repfun import HWModule
    c = cartan("B2")
    for lam in [(1, 0), (0, 1), (1, 1)]:
        m = HWModule(c, tuple(Fraction(x) for x in lam))
        ok, _ = c.norm_criterion(m.big_lambda, [tuple(-x for x in w) for w in m.weights])
        assert ok
    # in A2, (-w1, -2 w2) = (w1, w1): two distinct weights attain the norm
    a2 = cartan("A2")
    f = lambda *xs: tuple(Fraction(x) for x in xs)
    ok, info = a2.norm_criterion(f(1, 0), [f(-1, 0), f(0, -2)])
    assert not ok and info["mu"] != info["mu_prime"]


def test_freudenthal_multiplicities_of_modules():
    from qmpg.repfun import HWModule
    for name, lam in [("A2", (1, 1)), ("B2", (1, 1)), ("A2", (2, 1))]:
        c = cartan(name)
        m = HWModule(c, tuple(Fraction(x) for x in lam))
        want = freudenthal(name, lam)
        got = {}
        for w in m.distinct_weights():
            beta = tuple(int(x) for x in c.root_coords(tuple(a - b for a, b in zip(m.big_lambda, w))))
            got[beta] = len(m.indices_of_weight(w))
        assert got == want
