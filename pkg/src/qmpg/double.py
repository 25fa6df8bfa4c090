"""The Drinfeld double D = U(b+) ⋈ U(b-) in normal-ordered form.

A double monomial is a pair (a, u) of Borel monomials standing for the
product a*u, plus side on the left.  Products u*a are rewritten with the
cross relation

    y x = sum <x(1) | S(y(1))> <x(3) | y(3)> x(2) y(2)

either in one shot on whole monomials (``straighten_direct``) or one pair of
generators at a time (``straighten``).  Letters of a word are ('s', lam),
('e', i) on the A side and ('t', mu), ('f', j) on the U side.
"""

from dataclasses import dataclass, field
import threading

from .qpair import (MINUS, PLUS, BorelElt, antipode, coproduct, degree,
                    mul_monomials, render_mon, word_weight)
from .rootsys import wadd, wsub
from .scalars import ONE, ZERO, Scalar, eadd, evec, qhat, qpow

DEFAULT_DEGREE_CAP = 6


class DegreeCapExceeded(ValueError):
    pass


class DoubleElt:
    """Finite sum of normal-ordered monomials a*u with Scalar coefficients."""

    __slots__ = ("cartan", "terms")

    def __init__(self, cartan, terms=None):
        self.cartan = cartan
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    self.terms[m] = c

    # generators
    @classmethod
    def one(cls, cartan):
        z = cartan.zero()
        return cls(cartan, {((z, ()), (z, ())): ONE})

    @classmethod
    def from_parts(cls, cartan, a=None, u=None, coeff=ONE):
        z = cartan.zero()
        return cls(cartan, {(a or (z, ()), u or (z, ())): coeff})

    @classmethod
    def s(cls, cartan, lam):
        return cls.from_parts(cartan, a=(tuple(lam), ()))

    @classmethod
    def t(cls, cartan, lam):
        return cls.from_parts(cartan, u=(tuple(lam), ()))

    @classmethod
    def e(cls, cartan, i):
        return cls.from_parts(cartan, a=(cartan.zero(), (i,)))

    @classmethod
    def f(cls, cartan, j):
        return cls.from_parts(cartan, u=(cartan.zero(), (j,)))

    @classmethod
    def from_letters(cls, cartan, letters, coeff=ONE):
        """Product of letters in the given order, normal-ordered."""
        out = cls(cartan, {((cartan.zero(), ()), (cartan.zero(), ())): coeff})
        for x in letters:
            out = out * cls.letter(cartan, x)
        return out

    @classmethod
    def letter(cls, cartan, x):
        kind, v = x
        return {"s": cls.s, "t": cls.t, "e": cls.e, "f": cls.f}[kind](cartan, v)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return DoubleElt(self.cartan, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Scalar.coerce(c)
        return DoubleElt(self.cartan, {m: v * c for m, v in self.terms.items()} if c else {})

    def __mul__(self, other):
        if isinstance(other, DoubleElt):
            return double_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, DoubleElt) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "DoubleElt(%s)" % render_double(self)

    def degrees(self):
        return {double_degree(self.cartan, m) for m in self.terms}


def double_degree(cartan, mon):
    """Bidegree of a*u: A part (l, m) and U part (g, d) give (l - g, m - d)."""
    a, u = mon
    la, ma = degree(cartan, PLUS, a)
    lu, mu = degree(cartan, MINUS, u)
    return wsub(la, lu), wsub(ma, mu)


def render_double(x, names=None):
    if not x.terms:
        return "0"
    out = []
    for (a, u), c in sorted(x.terms.items(), key=lambda t: _mon_key(t[0])):
        parts = [p for p in (_render_side("s", "e", a), _render_side("t", "f", u)) if p]
        body = "*".join(parts) if parts else "1"
        out.append("(%s)*%s" % (c.render(names), body))
    return " + ".join(out)


def _render_side(k, g, mon):
    lam, word = mon
    parts = []
    if any(lam):
        parts.append("%s(%s)" % (k, ",".join(str(x) for x in lam)))
    parts.extend("%s%d" % (g, i + 1) for i in word)
    return "*".join(parts)


def _mon_key(mon):
    (la, wa), (lu, wu) = mon
    return (len(wa) + len(wu), wa, wu, la, lu)


# ------------------------------------------------------------ straightening

class DoubleAlgebra:
    """Straightening engine for one Cartan datum and one pairing on monomials.

    ``pair_mon(a_mon, u_mon)`` is the pairing used in the cross relation; the
    plain double uses the Rosso-Tanisaki pairing, the twisted double of
    the compatibility check uses its deformation.
    """

    def __init__(self, pairing, pair_mon=None, degree_cap=DEFAULT_DEGREE_CAP, check_homogeneous=True):
        self.pairing = pairing
        self.cartan = pairing.cartan
        self.pair_mon = pair_mon or pairing.pair_monomials
        self.degree_cap = degree_cap
        self.check_homogeneous = check_homogeneous
        self.memo = {}
        self._lock = threading.Lock()
        self.steps = 0

    # one-shot formula on whole monomials
    def straighten_direct(self, umon, amon):
        c = self.cartan
        if len(umon[1]) + len(amon[1]) > 2 * self.degree_cap:
            raise DegreeCapExceeded("word lengths exceed cap %d" % self.degree_cap)
        x = BorelElt(c, PLUS, {amon: ONE})
        y = BorelElt(c, MINUS, {umon: ONE})
        cx = coproduct(x, 3)
        cy = coproduct(y, 3)
        sy = {}
        for (y1, y2, y3), cc in cy.items():
            if y1 not in sy:
                sy[y1] = antipode(BorelElt(c, MINUS, {y1: ONE}))
        out = {}
        for (x1, x2, x3), c1 in cx.items():
            for (y1, y2, y3), c2 in cy.items():
                right = self.pair_mon(x3, y3)
                if not right:
                    continue
                left = ZERO
                for m, cs in sy[y1].terms.items():
                    v = self.pair_mon(x1, m)
                    if v:
                        left = left + cs * v
                if not left:
                    continue
                key = (x2, y2)
                v = out.get(key, ZERO) + c1 * c2 * left * right
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        res = DoubleElt(c, out)
        if self.check_homogeneous:
            self._check_degree(umon, amon, res)
        return res

    def _check_degree(self, umon, amon, res):
        c = self.cartan
        z = c.zero()
        dy = double_degree(c, ((z, ()), umon))
        dx = double_degree(c, (amon, (z, ())))
        want = (wadd(dy[0], dx[0]), wadd(dy[1], dx[1]))
        for m in res.terms:
            if double_degree(c, m) != want:
                raise AssertionError("straightening step is not homogeneous: %r" % (m,))

    def generator_pair(self, yl, xl):
        """y*x for single letters y (U side) and x (A side)."""
        key = ("gen", yl, xl)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        z = self.cartan.zero()
        umon = (tuple(yl[1]), ()) if yl[0] == "t" else (z, (yl[1],))
        amon = (tuple(xl[1]), ()) if xl[0] == "s" else (z, (xl[1],))
        res = self.straighten_direct(umon, amon)
        with self._lock:
            self.memo.setdefault(key, res)
        return res

    def straighten(self, umon, amon, order="left"):
        """u*a rewritten by elementary generator swaps.

        ``order`` picks which out-of-order adjacent pair is swapped first
        ("left" or "right"); the result does not depend on it.
        """
        key = ("mon", umon, amon, order)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        c = self.cartan
        if len(umon[1]) + len(amon[1]) > 2 * self.degree_cap:
            raise DegreeCapExceeded("word lengths exceed cap %d" % self.degree_cap)
        words = {tuple(_letters(MINUS, umon) + _letters(PLUS, amon)): ONE}
        done = DoubleElt(c)
        while words:
            word, coef = words.popitem()
            pos = _inversion(word, order)
            if pos is None:
                done = done + _word_to_double(c, word, coef)
                continue
            self.steps += 1
            swapped = self.generator_pair(word[pos], word[pos + 1])
            head, tail = word[:pos], word[pos + 2:]
            for (a, u), cc in swapped.terms.items():
                w = head + tuple(_letters(PLUS, a) + _letters(MINUS, u)) + tail
                v = words.get(w, ZERO) + coef * cc
                if v:
                    words[w] = v
                else:
                    words.pop(w, None)
        with self._lock:
            self.memo.setdefault(key, done)
        return done

    def mul(self, x, y, order="left"):
        c = self.cartan
        out = {}
        for (a1, u1), c1 in x.terms.items():
            for (a2, u2), c2 in y.terms.items():
                if not u1[1] and not any(u1[0]) or not a2[1] and not any(a2[0]):
                    mid = {(a2, u1): ONE}
                else:
                    mid = self.straighten(u1, a2, order).terms
                for (a, u), cm in mid.items():
                    ea, am = mul_monomials(c, PLUS, a1, a)
                    eu, um = mul_monomials(c, MINUS, u, u2)
                    key = (am, um)
                    v = out.get(key, ZERO) + c1 * c2 * cm * qpow(ea + eu)
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return DoubleElt(c, out)


def _letters(side, mon):
    lam, word = mon
    out = []
    if side == PLUS:
        if any(lam):
            out.append(("s", tuple(lam)))
        out.extend(("e", i) for i in word)
    else:
        if any(lam):
            out.append(("t", tuple(lam)))
        out.extend(("f", i) for i in word)
    return out


def _inversion(word, order):
    idx = range(len(word) - 1) if order == "left" else range(len(word) - 2, -1, -1)
    for k in idx:
        if word[k][0] in "tf" and word[k + 1][0] in "se":
            return k
    return None


def _word_to_double(cartan, word, coef):
    a = BorelElt.monomial(cartan, PLUS)
    u = BorelElt.monomial(cartan, MINUS)
    for kind, v in word:
        if kind == "s":
            a = a * BorelElt.k(cartan, PLUS, v)
        elif kind == "e":
            a = a * BorelElt.gen(cartan, PLUS, v)
        elif kind == "t":
            u = u * BorelElt.k(cartan, MINUS, v)
        else:
            u = u * BorelElt.gen(cartan, MINUS, v)
    (am, ca), = a.terms.items()
    (um, cu), = u.terms.items()
    return DoubleElt(cartan, {(am, um): coef * ca * cu})


_engines = {}


def engine(pairing):
    """Shared straightening engine for a pairing."""
    e = _engines.get(id(pairing))
    if e is None or e.pairing is not pairing:
        e = DoubleAlgebra(pairing)
        _engines[id(pairing)] = e
    return e


def straighten(pairing, umon, amon, order="left"):
    return engine(pairing).straighten(umon, amon, order)


def double_mul(x, y, pairing=None):
    if pairing is None:
        from .qpair import RTPairing
        pairing = _default_pairing(x.cartan)
    return engine(pairing).mul(x, y)


_default_pairings = {}


def _default_pairing(cartan):
    from .qpair import RTPairing
    p = _default_pairings.get(cartan.key)
    if p is None:
        p = _default_pairings[cartan.key] = RTPairing(cartan)
    return p


def set_default_pairing(pairing):
    """Route products of DoubleElt over this Cartan datum through ``pairing``."""
    _default_pairings[pairing.cartan.key] = pairing


def twist_mul_double(pt, x, y, inverse=False, pairing=None):
    """m_p on the double using the double bidegrees."""
    from .twist import twist_factor
    c = x.cartan
    out = DoubleElt(c)
    for m1, c1 in x.terms.items():
        d1 = double_degree(c, m1)
        for m2, c2 in y.terms.items():
            d2 = double_degree(c, m2)
            f = qpow(twist_factor(pt, d1, d2, inverse))
            prod = double_mul(DoubleElt(c, {m1: c1 * f}), DoubleElt(c, {m2: c2}), pairing)
            out = out + prod
    return out


# ------------------------------------------------------------------ checks

@dataclass
class CheckReport:
    ok: bool
    checked: int = 0
    lines: list = field(default_factory=list)
    failure: str = ""


def derived_relations(pairing):
    """The cross relations read off from straightening generator pairs.

    Returns (ok, lines): each line is a relation string and ok says every
    one matches the expected form.
    """
    c = pairing.cartan
    eng = engine(pairing)
    z = c.zero()
    lines = []
    ok = True
    for i in range(c.n):
        for j in range(c.n):
            got = eng.straighten((z, (j,)), (z, (i,)))
            ef = DoubleElt.from_parts(c, a=(z, (i,)), u=(z, (j,)))
            comm = ef - got  # e_i f_j - f_j e_i
            expect = DoubleElt(c)
            if i == j:
                a = c.alpha(i)
                expect = (DoubleElt.s(c, a) - DoubleElt.t(c, tuple(-x for x in a))).scale(qhat(c.d[i]))
            if comm != expect:
                ok = False
            lines.append("e%d f%d - f%d e%d = %s" % (i + 1, j + 1, j + 1, i + 1, render_double(comm)))
    # conjugation rules on a sample of torus elements
    for lam in [c.varpi(k) for k in range(c.n)] + [c.alpha(k) for k in range(c.n)]:
        neg = tuple(-x for x in lam)
        for j in range(c.n):
            aj = c.alpha(j)
            e = c.inner(lam, aj)
            checks = [
                (DoubleElt.s(c, lam) * DoubleElt.e(c, j) * DoubleElt.s(c, neg), DoubleElt.e(c, j).scale(qpow(e))),
                (DoubleElt.t(c, lam) * DoubleElt.e(c, j) * DoubleElt.t(c, neg), DoubleElt.e(c, j).scale(qpow(e))),
                (DoubleElt.s(c, lam) * DoubleElt.f(c, j) * DoubleElt.s(c, neg), DoubleElt.f(c, j).scale(qpow(-e))),
                (DoubleElt.t(c, lam) * DoubleElt.f(c, j) * DoubleElt.t(c, neg), DoubleElt.f(c, j).scale(qpow(-e))),
            ]
            for got, want in checks:
                if got != want:
                    ok = False
        for mu in [c.varpi(k) for k in range(c.n)]:
            if DoubleElt.s(c, lam) * DoubleElt.t(c, mu) != DoubleElt.t(c, mu) * DoubleElt.s(c, lam):
                ok = False
    lines.append("s(l) t(m) = t(m) s(l); s/t conjugation of e_j: q^(l,a_j); of f_j: q^-(l,a_j)")
    return ok, lines


def to_uqg(x):
    """Image in U_q(g) under s_l, t_l -> k_l, as {(torus, e-word, f-word): Scalar}."""
    c = x.cartan
    out = {}
    for ((la, ea), (lu, fu)), coef in x.terms.items():
        # k_la E k_lu F = q^{-(lu, wt E)} k_{la+lu} E F
        e = -c.inner(lu, word_weight(c, ea))
        key = (wadd(la, lu), ea, fu)
        v = out.get(key, ZERO) + coef * qpow(e)
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def quotient_to_uqg_check(pairing):
    c = pairing.cartan
    z = c.zero()
    eng = engine(pairing)
    ok = True
    lines = []
    for i in range(c.n):
        for j in range(c.n):
            ef = DoubleElt.from_parts(c, a=(z, (i,)), u=(z, (j,)))
            comm = to_uqg(ef - eng.straighten((z, (j,)), (z, (i,))))
            want = {}
            if i == j:
                a = c.alpha(i)
                h = qhat(c.d[i])
                want = {(a, (), ()): h, (tuple(-x for x in a), (), ()): -h}
            if comm != want:
                ok = False
            lines.append("e%d f%d - f%d e%d = %s" % (i + 1, j + 1, j + 1, i + 1, _render_uqg(comm)))
    for lam in [c.varpi(k) for k in range(c.n)]:
        for mu in [c.alpha(k) for k in range(c.n)]:
            prod = to_uqg(DoubleElt.s(c, lam) * DoubleElt.t(c, mu))
            if prod != {(wadd(lam, mu), (), ()): ONE}:
                ok = False
    return CheckReport(ok, c.n * c.n, lines)


def _render_uqg(d):
    if not d:
        return "0"
    parts = []
    for (lam, ew, fw), coef in sorted(d.items(), key=lambda t: (len(t[0][1]) + len(t[0][2]), t[0])):
        body = []
        if any(lam):
            body.append("k(%s)" % ",".join(str(x) for x in lam))
        body += ["e%d" % (i + 1) for i in ew] + ["f%d" % (i + 1) for i in fw]
        parts.append("(%s)*%s" % (coef.render(), "*".join(body) or "1"))
    return " + ".join(parts)


def character_value(cartan, mon):
    """Generic character h(s_l) = X^l, h(t_l) = X^-l, h(e) = h(f) = 0.

    X^l is encoded as q^(l_1 x_1 + ... + l_n x_n) with formal symbols x_k,
    so the check is generic in h.
    """
    (la, ea), (lu, fu) = mon
    if ea or fu:
        return ZERO
    lam = wsub(la, lu)
    return qpow((0,) + tuple(lam))


def character_check(pairing, pairs):
    """h(y) h(x) = h(y x) for each (u-monomial, a-monomial) pair, straightened."""
    c = pairing.cartan
    z = c.zero()
    eng = engine(pairing)
    for umon, amon in pairs:
        lhs = character_value(c, ((z, ()), umon)) * character_value(c, (amon, (z, ())))
        rhs = ZERO
        for m, coef in eng.straighten(umon, amon).terms.items():
            rhs = rhs + coef * character_value(c, m)
        if lhs != rhs:
            return False
    return True


def twisted_double_check(pairing, pt, pairs):
    """Compare y ._p x in the twisted double with y x in A_p ⋈ U_p.

    Left side: straighten y x untwisted, then rewrite every a_i u_i through
    the twisted product.  Right side: the cross relation with the pairing
    deformed by p.  Returns a CheckReport naming the first mismatch.
    """
    from .twist import deformed_pair, twist_factor
    c = pairing.cartan
    z = c.zero()
    plain = engine(pairing)

    def pmon(am, um):
        return deformed_pair(pairing, pt, BorelElt(c, PLUS, {am: ONE}), BorelElt(c, MINUS, {um: ONE}))

    twisted = DoubleAlgebra(pairing, pair_mon=pmon)
    checked = 0
    for umon, amon in pairs:
        dy = double_degree(c, ((z, ()), umon))
        dx = double_degree(c, (amon, (z, ())))
        pre = twist_factor(pt, dy, dx)
        lhs = {}
        for m, coef in plain.straighten_direct(umon, amon).terms.items():
            da = double_degree(c, (m[0], (z, ())))
            du = double_degree(c, ((z, ()), m[1]))
            e = eadd(pre, tuple(-v for v in twist_factor(pt, da, du)))
            lhs[m] = coef * qpow(e)
        lhs = DoubleElt(c, lhs)
        rhs = twisted.straighten_direct(umon, amon)
        checked += 1
        if lhs != rhs:
            return CheckReport(False, checked, [], "y=%s x=%s: %s != %s" % (
                render_mon(MINUS, umon), render_mon(PLUS, amon), render_double(lhs), render_double(rhs)))
    return CheckReport(True, checked)


def canonical_element(pairing, beta, max_height=None):
    from .qpair import canonical_element as _ce
    return _ce(pairing, beta, max_height)
