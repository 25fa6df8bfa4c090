"""Exact scalars: fractions of finite sums of formal powers of q.

An exponent is a tuple of rationals.  Coordinate 0 is the ordinary rational
exponent; coordinates 1..s belong to formal transcendental symbols.  Tuples
are kept with trailing zeros stripped, so ``()`` is the zero exponent and the
number of symbols never has to be fixed up front.
"""

from fractions import Fraction
from math import lcm

import flint


class ScalarZeroDivision(ZeroDivisionError):
    """Raised when inverting or dividing by the zero scalar."""


def evec(e):
    """Coerce an int, Fraction or sequence into a canonical exponent tuple."""
    if isinstance(e, tuple) and all(type(x) is Fraction for x in e):
        return _strip(e)
    if isinstance(e, (int, Fraction, str)):
        return _strip((Fraction(e),))
    return _strip(tuple(Fraction(x) for x in e))


def _strip(t):
    n = len(t)
    while n and not t[n - 1]:
        n -= 1
    return t if n == len(t) else t[:n]


def eadd(a, b):
    if not a:
        return b
    if not b:
        return a
    if len(a) == 1 and len(b) == 1:
        s = a[0] + b[0]
        return (s,) if s else ()
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, x in enumerate(b):
        r[i] += x
    return _strip(tuple(r))


def eneg(a):
    return tuple(-x for x in a)


def esub(a, b):
    return eadd(a, eneg(b))


def escale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


# ---------------------------------------------------------------- polynomials
# A QPoly is a plain dict {exponent tuple: nonzero Fraction}.

def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = eadd(ea, eb)
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def _padd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pshift(a, e, c=Fraction(1)):
    return {eadd(k, e): v * c for k, v in a.items()}


def _lead(a):
    e = max(a, key=padded_key(a))
    return e, a[e]


def padded_key(p):
    """Sort key giving lexicographic order on exponents of unequal length."""
    w = max((len(e) for e in p), default=0)
    zero = Fraction(0)
    return lambda e: e + (zero,) * (w - len(e))


def _to_flint(polys):
    """Map polynomials onto a common integer lattice for flint."""
    width = max(len(e) for p in polys for e in p)
    den = 1
    for p in polys:
        for e in p:
            for x in e:
                den = lcm(den, x.denominator)
    lows = []
    for i in range(width):
        lows.append(min((e[i] if i < len(e) else Fraction(0)) for p in polys for e in p))
    conv = []
    for p in polys:
        d = {}
        for e, c in p.items():
            k = tuple(int(((e[i] if i < len(e) else 0) - lows[i]) * den) for i in range(width))
            d[k] = c
        conv.append(d)
    if width == 1:
        out = []
        for d in conv:
            deg = max(k[0] for k in d)
            coeffs = [0] * (deg + 1)
            for k, c in d.items():
                coeffs[k[0]] = flint.fmpq(c.numerator, c.denominator)
            out.append(flint.fmpq_poly(coeffs))
        return out, den, lows, None
    ctx = flint.fmpq_mpoly_ctx.get(tuple("x%d" % i for i in range(width)))
    out = [ctx.from_dict({k: flint.fmpq(c.numerator, c.denominator) for k, c in d.items()}) for d in conv]
    return out, den, lows, ctx


def _from_flint(f, den, lows, ctx):
    out = {}
    if ctx is None:
        for j, c in enumerate(f.coeffs()):
            if c:
                e = _strip((Fraction(j, den) + lows[0],))
                out[e] = Fraction(int(c.p), int(c.q))
        return out
    for k, c in f.to_dict().items():
        c = flint.fmpq(c)
        if c:
            e = _strip(tuple(Fraction(int(k[i]), den) + lows[i] for i in range(len(k))))
            out[e] = Fraction(int(c.p), int(c.q))
    return out


def _reduce(num, den):
    (fn, fd), d, lows, ctx = _to_flint([num, den])
    g = fn.gcd(fd)
    if ctx is None:
        if g.degree() > 0:
            fn, fd = fn // g, fd // g
    elif not g.is_constant():
        fn, fd = fn // g, fd // g
    return _from_flint(fn, d, lows, ctx), _from_flint(fd, d, lows, ctx)


_ONE_POLY = {(): Fraction(1)}


class Scalar:
    """Element of the fraction field of the formal q-power algebra.

    Instances are immutable and always stored in reduced canonical form:
    the denominator is 1 or a non-monomial polynomial with leading
    coefficient 1 whose exponents are centred around zero in each coordinate.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = _ONE_POLY
        if not den:
            raise ScalarZeroDivision("zero denominator")
        if not _canonical:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers
    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return Scalar({(): x} if x else {}, _ONE_POLY, _canonical=True)
        raise TypeError("cannot coerce %r to Scalar" % (x,))

    def is_zero(self):
        return not self.num

    def is_laurent(self):
        return self.den is _ONE_POLY or self.den == _ONE_POLY

    def is_monomial(self):
        return self.is_laurent() and len(self.num) == 1

    def monomial(self):
        """Return (exponent, coefficient) of a monomial scalar."""
        if not self.is_monomial():
            raise ValueError("not a monomial: %s" % self)
        (e, c), = self.num.items()
        return e, c

    # arithmetic
    def __add__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = _padd(self.num, other.num)
            if self.den == _ONE_POLY:
                return Scalar(num, _ONE_POLY, _canonical=True)
            return Scalar(num, self.den)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar({e: -c for e, c in self.num.items()}, self.den, _canonical=True)

    def __sub__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        if self.den == _ONE_POLY and other.den == _ONE_POLY:
            return Scalar(_pmul(self.num, other.num), _ONE_POLY, _canonical=True)
        if len(other.num) == 1 and other.den == _ONE_POLY:
            (e, c), = other.num.items()
            return Scalar(_pshift(self.num, e, c), self.den, _canonical=True)
        if len(self.num) == 1 and self.den == _ONE_POLY:
            (e, c), = self.num.items()
            return Scalar(_pshift(other.num, e, c), other.den, _canonical=True)
        return Scalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise ScalarZeroDivision("inverse of zero scalar")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return _co(other) * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = _co(other)
        if other is NotImplemented:
            return False
        if self.den == other.den:
            return self.num == other.num
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return "Scalar(%s)" % self.render()

    def __str__(self):
        return self.render()

    def render(self, names=None):
        n = render_poly(self.num, names)
        if self.den == _ONE_POLY:
            return n
        if len(self.num) > 1:
            n = "(" + n + ")"
        return n + "/(" + render_poly(self.den, names) + ")"

    def to_json(self):
        return {"num": _poly_json(self.num), "den": _poly_json(self.den)}

    @staticmethod
    def from_json(obj):
        return Scalar(_poly_unjson(obj["num"]), _poly_unjson(obj["den"]))


def _co(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.coerce(x)
    return NotImplemented


def _poly_json(p):
    key = padded_key(p)
    return [[[str(x) for x in e], str(c)] for e, c in sorted(p.items(), key=lambda t: key(t[0]), reverse=True)]


def _poly_unjson(items):
    return {evec([Fraction(x) for x in e]): Fraction(c) for e, c in items}


def _normalize(num, den):
    if not num:
        return {}, _ONE_POLY
    if len(den) == 1:
        (e, c), = den.items()
        return _pshift(num, eneg(e), 1 / c), _ONE_POLY
    num, den = _reduce(num, den)
    if len(den) == 1:
        (e, c), = den.items()
        return _pshift(num, eneg(e), 1 / c), _ONE_POLY
    # unit normalisation: monic leading term, exponents centred per coordinate
    _, lc = _lead(den)
    width = max(len(e) for e in den)
    shift = []
    for i in range(width):
        xs = [e[i] if i < len(e) else Fraction(0) for e in den]
        shift.append(-(max(xs) + min(xs)) / 2)
    shift = _strip(tuple(shift))
    inv = 1 / lc
    return _pshift(num, shift, inv), _pshift(den, shift, inv)


ZERO = Scalar({}, _ONE_POLY, _canonical=True)
ONE = Scalar({(): Fraction(1)}, _ONE_POLY, _canonical=True)


# ------------------------------------------------------------------ rendering

def render_exponent(e, names=None):
    parts = []
    for i, x in enumerate(e):
        if not x:
            continue
        if i == 0:
            parts.append(str(x))
        else:
            name = names[i - 1] if names and i - 1 < len(names) else "a%d" % i
            if x == 1:
                parts.append(name)
            elif x == -1:
                parts.append("-" + name)
            else:
                parts.append("%s*%s" % (x, name))
    s = "+".join(parts).replace("+-", "-")
    return s or "0"


def _render_qpow(e, names):
    if not e:
        return ""
    if len(e) == 1 and e[0].denominator == 1:
        return "q" if e[0] == 1 else "q^%d" % e[0]
    return "q^(%s)" % render_exponent(e, names)


def render_poly(p, names=None):
    if not p:
        return "0"
    out = []
    for e in sorted(p, key=padded_key(p), reverse=True):
        c = p[e]
        mono = _render_qpow(e, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = "%s*%s" % (a, mono)
        out.append((sign, body))
    s = "".join(sg + b for sg, b in out)
    return s[1:] if s[0] == "+" else s


# ------------------------------------------------------------- constructors

def qpow(e):
    """The invertible monomial q^e."""
    return Scalar({evec(e): Fraction(1)}, _ONE_POLY, _canonical=True)


def qbracket(m, d=1):
    """Product (t - 1/t)(t^2 - 1/t^2)...(t^m - 1/t^m) with t = q^d."""
    if m < 0:
        raise ValueError("qbracket needs m >= 0")
    out = ONE
    for j in range(1, m + 1):
        out = out * (qpow(j * d) - qpow(-j * d))
    return out


def qbinom(m, k, d=1):
    """Gaussian binomial [m]/([k][m-k]) in t = q^d."""
    if not 0 <= k <= m:
        raise ValueError("qbinom needs 0 <= k <= m, got m=%d k=%d" % (m, k))
    return qbracket(m, d) / (qbracket(k, d) * qbracket(m - k, d))


def qhat(d):
    """(q^d - q^-d)^-1."""
    return (qpow(d) - qpow(-d)).inv()
