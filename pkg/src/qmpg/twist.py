"""Antisymmetric bicharacters p(l, m) = q^{u(l, m)/2} and the cocycle twist.

Values of u are exponent tuples, so a formal irrational entry such as
``sqrt2`` is just another coordinate of the q-exponent.  All matrices that
carry u (U on the lattice basis, Utilde and Phi in weight coordinates) have
exponent tuples as entries and act on rational weight vectors.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .rootsys import Lattice
from .scalars import ONE, ZERO, Scalar, eadd, eneg, escale, evec, qpow

__all__ = [
    "Bicharacter", "bichar_from_u", "twist_factor", "twist_mul", "twist_mul_borel",
    "deformed_pair", "DeformedPairing", "rescale_action", "twisted_action_factor",
    "verify_hopf_twist", "HopfTwistReport", "PTable", "cocycle_class", "BicharacterError",
]


class BicharacterError(ValueError):
    pass


def _ecomb(pairs):
    """sum c_k * e_k for rationals c_k and exponent tuples e_k."""
    out = ()
    for c, e in pairs:
        if c and e:
            out = eadd(out, escale(e, Fraction(c)))
    return out


class Bicharacter:
    """p(l, m) = q^{u(l, m)/2} for an alternating form u on the lattice L.

    ``U[i][j] = u(omega_i, omega_j)`` on the lattice basis.  ``names`` labels
    the formal symbols occupying exponent coordinates 1, 2, ...
    """

    def __init__(self, cartan, U, lattice=None, names=()):
        self.cartan = cartan
        self.lattice = lattice or Lattice.weight(cartan)
        self.names = tuple(names)
        n = cartan.n
        self.U = tuple(tuple(evec(x) for x in row) for row in U)
        if len(self.U) != n or any(len(r) != n for r in self.U):
            raise BicharacterError("U must be %dx%d" % (n, n))
        for i in range(n):
            if self.U[i][i]:
                raise BicharacterError("U is not antisymmetric: U[%d][%d] != 0" % (i + 1, i + 1))
            for j in range(n):
                if self.U[i][j] != eneg(self.U[j][i]):
                    raise BicharacterError("U is not antisymmetric at (%d,%d)" % (i + 1, j + 1))
        # Utilde = B^-T U B^-1 in weight coordinates
        binv = linalg.inverse(self.lattice.matrix)
        self.Ut = tuple(tuple(
            _ecomb((binv[a][i] * binv[b][j], self.U[a][b]) for a in range(n) for b in range(n))
            for j in range(n)) for i in range(n))
        # u(l, m) = (Phi l, m) = l^T Phi^T G m, so Phi = G^-1 Utilde^T
        ginv = linalg.inverse([list(r) for r in cartan.gramFW])
        self.phi = tuple(tuple(
            _ecomb((ginv[i][k], self.Ut[j][k]) for k in range(n))
            for j in range(n)) for i in range(n))
        for i in range(n):
            for j in range(n):
                wi, wj = self.lattice.cols[i], self.lattice.cols[j]
                if self.u(wi, wj) != self.phi_pair(wi, wj):
                    raise AssertionError("Phi does not represent u at (%d,%d)" % (i + 1, j + 1))

    @classmethod
    def zero(cls, cartan, lattice=None):
        n = cartan.n
        return cls(cartan, [[0] * n for _ in range(n)], lattice)

    def is_trivial(self):
        return not any(e for row in self.U for e in row)

    def inverse(self):
        return Bicharacter(self.cartan, [[eneg(e) for e in row] for row in self.U], self.lattice, self.names)

    def u(self, lam, mu):
        n = self.cartan.n
        return _ecomb((lam[i] * mu[j], self.Ut[i][j]) for i in range(n) for j in range(n))

    def p_exp(self, lam, mu):
        return escale(self.u(lam, mu), Fraction(1, 2))

    def p(self, lam, mu):
        return qpow(self.p_exp(lam, mu))

    def phi_apply(self, lam):
        """Phi lam as a vector of exponent tuples."""
        n = self.cartan.n
        return tuple(_ecomb((lam[j], self.phi[i][j]) for j in range(n)) for i in range(n))

    def phi_pair(self, lam, mu):
        """(Phi lam, mu) computed through the matrix Phi."""
        v = self.phi_apply(lam)
        g = self.cartan.gramFW
        n = self.cartan.n
        return _ecomb((g[i][j] * mu[j], v[i]) for i in range(n) for j in range(n))

    def phi_plus_pair(self, lam, mu):
        return eadd(self.u(lam, mu), evec(self.cartan.inner(lam, mu)))

    def phi_minus_pair(self, lam, mu):
        return eadd(self.u(lam, mu), evec(-self.cartan.inner(lam, mu)))

    def render_matrix(self, m=None):
        m = self.phi if m is None else m
        from .scalars import render_exponent
        return [[render_exponent(e, self.names) for e in row] for row in m]

    def __eq__(self, other):
        return (isinstance(other, Bicharacter) and self.cartan.key == other.cartan.key
                and self.Ut == other.Ut)

    def __hash__(self):
        return hash((self.cartan.key, self.Ut))

    def __repr__(self):
        return "Bicharacter(U=%s)" % self.render_matrix(self.U)


def bichar_from_u(U, cartan, lattice=None, names=()):
    return Bicharacter(cartan, U, lattice, names)


class PTable:
    """An arbitrary table of exponents, used as a negative control.

    ``fn(l, m)`` returns the exponent of q; nothing forces it to be a
    bicharacter.
    """

    def __init__(self, fn):
        self.fn = fn

    def p_exp(self, lam, mu):
        return evec(self.fn(lam, mu))

    def p(self, lam, mu):
        return qpow(self.p_exp(lam, mu))


def twist_factor(pt, d1, d2, inverse=False):
    """p(l, l') p(m, m')^-1 for degrees d1 = (l, m) and d2 = (l', m')."""
    e = eadd(pt.p_exp(d1[0], d2[0]), eneg(pt.p_exp(d1[1], d2[1])))
    return eneg(e) if inverse else e


# -------------------------------------------------------------- Borel twist

def twist_mul_mon(pt, cartan, side, m1, m2, inverse=False, op=False):
    """Twisted product of two Borel monomials; ``op`` multiplies as m2*m1."""
    from .qpair import degree, mul_monomials
    f = twist_factor(pt, degree(cartan, side, m1), degree(cartan, side, m2), inverse)
    e, m = mul_monomials(cartan, side, *((m2, m1) if op else (m1, m2)))
    return eadd(evec(e), f), m


def twist_mul_borel(pt, a, b, inverse=False, op=False):
    from .qpair import BorelElt
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            e, m = twist_mul_mon(pt, a.cartan, a.side, m1, m2, inverse, op)
            v = out.get(m, ZERO) + c1 * c2 * qpow(e)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return BorelElt(a.cartan, a.side, out)


def twist_mul(a, b, pt, inverse=False):
    """m_p on Borel or double elements, extended bilinearly over homogeneous parts."""
    from .qpair import BorelElt
    if isinstance(a, BorelElt):
        return twist_mul_borel(pt, a, b, inverse)
    from .double import DoubleElt, twist_mul_double
    if isinstance(a, DoubleElt):
        return twist_mul_double(pt, a, b, inverse)
    raise TypeError("cannot grade %r" % type(a).__name__)


def _tensor_twist_mul(pt, cartan, side, t1, t2, inverse=False):
    out = {}
    for legs1, c1 in t1.items():
        for legs2, c2 in t2.items():
            e = ()
            legs = []
            for x, y in zip(legs1, legs2):
                ex, m = twist_mul_mon(pt, cartan, side, x, y, inverse)
                e = eadd(e, ex)
                legs.append(m)
            key = tuple(legs)
            v = out.get(key, ZERO) + c1 * c2 * qpow(e)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


# ----------------------------------------------------------- deformed pairing

def deformed_pair(pairing, pt, a, y, inverse=False):
    """<a|u>_p = p(l, g)^-1 p(m, d)^-1 <a|u>; with ``inverse`` the pairing for p^-1."""
    from .qpair import MINUS, PLUS, degree
    cartan = pairing.cartan
    total = ZERO
    for m1, c1 in a.terms.items():
        lam, mu = degree(cartan, PLUS, m1)
        for m2, c2 in y.terms.items():
            v = pairing.pair_monomials(m1, m2)
            if not v:
                continue
            gam, dlt = degree(cartan, MINUS, m2)
            e = eadd(pt.p_exp(lam, gam), pt.p_exp(mu, dlt))
            total = total + c1 * c2 * v * qpow(e if inverse else eneg(e))
    return total


class DeformedPairing:
    """The Hopf pairing between A_{p^-1} = U(b+)^op twisted and U(b-) twisted by p.

    With ``inverse`` the roles of p and p^-1 are exchanged.
    """

    def __init__(self, pairing, pt, inverse=False):
        self.base = pairing
        self.pt = pt
        self.inverse = inverse
        self.cartan = pairing.cartan

    def pair(self, a, y):
        return deformed_pair(self.base, self.pt, a, y, self.inverse)

    def mul_plus(self, a, b):
        # A is U(b+)^op, twisted by p^-1 (or p when inverse)
        return twist_mul_borel(self.pt, a, b, inverse=not self.inverse, op=True)

    def mul_minus(self, a, b):
        return twist_mul_borel(self.pt, a, b, inverse=self.inverse)

    def check_axioms(self, a1, a2, u1, u2):
        """The four dual-pair axioms on the given elements; returns failed axiom numbers."""
        from .qpair import BorelElt, MINUS, PLUS, antipode, coproduct
        c = self.cartan
        bad = []
        one_p = BorelElt.monomial(c, PLUS)
        one_m = BorelElt.monomial(c, MINUS)
        if self.pair(a1, one_m) != a1.counit() or self.pair(one_p, u1) != u1.counit():
            bad.append(1)
        lhs = self.pair(a1, self.mul_minus(u1, u2))
        rhs = ZERO
        for (m1, m2), cc in coproduct(a1).items():
            x = self.pair(BorelElt(c, PLUS, {m1: cc}), u1)
            if x:
                rhs = rhs + x * self.pair(BorelElt(c, PLUS, {m2: ONE}), u2)
        if lhs != rhs:
            bad.append(2)
        lhs = self.pair(self.mul_plus(a1, a2), u1)
        rhs = ZERO
        for (m1, m2), cc in coproduct(u1).items():
            x = self.pair(a1, BorelElt(c, MINUS, {m1: cc}))
            if x:
                rhs = rhs + x * self.pair(a2, BorelElt(c, MINUS, {m2: ONE}))
        if lhs != rhs:
            bad.append(3)
        # A carries the antipode S^-1 of U(b+); <S^-1 a|u> = <a|S u> iff <S a|S u> = <a|u>
        if self.pair(antipode(a1), antipode(u1)) != self.pair(a1, u1):
            bad.append(4)
        return bad


# ------------------------------------------------------------------ actions

def rescale_action(pt, deg, lam):
    """Exponent of p(l, g - d) p(g, d) relating the twisted and plain actions."""
    from .rootsys import wsub
    g, d = deg
    return eadd(pt.p_exp(lam, wsub(g, d)), pt.p_exp(g, d))


def twisted_action_factor(pt, deg, lam):
    """Exponent of p(l, d - g) p(d, g): the action of D_{q,p^-1} on M of weight l."""
    from .rootsys import wsub
    g, d = deg
    return eadd(pt.p_exp(lam, wsub(d, g)), pt.p_exp(d, g))


# ------------------------------------------------------------- Hopf checks

@dataclass
class HopfTwistReport:
    ok: bool
    checked: int
    failed: str = ""
    detail: str = ""


def verify_hopf_twist(sample, pt):
    """Check counit, coproduct and antipode axioms of A_p on a sample of Borel elements.

    ``sample`` is a list of BorelElt (all on the same side).
    """
    from .qpair import BorelElt, antipode, coproduct
    checked = 0
    for x in sample:
        c, side = x.cartan, x.side
        for y in sample:
            if y.side != side:
                continue
            xy = twist_mul_borel(pt, x, y)
            checked += 1
            if xy.counit() != x.counit() * y.counit():
                return HopfTwistReport(False, checked, "counit", "%r * %r" % (x, y))
            lhs = coproduct(xy)
            rhs = _tensor_twist_mul(pt, c, side, coproduct(x), coproduct(y))
            if lhs != rhs:
                return HopfTwistReport(False, checked, "coproduct", "%r * %r" % (x, y))
        left = BorelElt(c, side)
        right = BorelElt(c, side)
        for (m1, m2), cc in coproduct(x).items():
            a = BorelElt(c, side, {m1: cc})
            b = BorelElt(c, side, {m2: ONE})
            left = left + twist_mul_borel(pt, antipode(a), b)
            right = right + twist_mul_borel(pt, a, antipode(b))
        eps = BorelElt.monomial(c, side, coeff=x.counit())
        checked += 1
        if left != eps or right != eps:
            return HopfTwistReport(False, checked, "antipode", repr(x))
    return HopfTwistReport(True, checked)


def cocycle_class(bichar):
    """gamma_ij = p(w_i, w_j) / p(w_j, w_i) = q^{u(w_i, w_j)} on the lattice basis."""
    return [[qpow(e) for e in row] for row in bichar.U]
