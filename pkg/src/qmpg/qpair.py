"""Quantum Borel algebras as free monomial spaces and the Rosso-Tanisaki pairing.

A monomial is a pair ``(torus, word)`` meaning k_torus * x_{w1} ... x_{wm}
where x is e on the plus side and f on the minus side.  The generators are
free: the quantum Serre relations are not imposed by rewriting but show up
as the radical of the pairing, graded by Q_+.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
import threading

from . import linalg
from .rootsys import wadd, wsub, wscale
from .scalars import ONE, ZERO, Scalar, qbinom, qhat, qpow

PLUS = "+"
MINUS = "-"


def word_weight(cartan, word):
    out = cartan.zero()
    for i in word:
        out = wadd(out, cartan.alpha(i))
    return out


def degree(cartan, side, mon):
    """L x L bidegree of a Borel monomial (torus, word)."""
    lam, word = mon
    beta = word_weight(cartan, word)
    if side == PLUS:
        return wscale(wadd(lam, beta), -1), tuple(lam)
    return wscale(lam, -1), wsub(lam, beta)


class BorelElt:
    """Finite linear combination of monomials on one side."""

    __slots__ = ("cartan", "side", "terms")

    def __init__(self, cartan, side, terms=None):
        self.cartan = cartan
        self.side = side
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    self.terms[m] = c

    @classmethod
    def monomial(cls, cartan, side, torus=None, word=(), coeff=ONE):
        torus = tuple(torus) if torus is not None else cartan.zero()
        return cls(cartan, side, {(torus, tuple(word)): coeff})

    @classmethod
    def gen(cls, cartan, side, i):
        return cls.monomial(cartan, side, word=(i,))

    @classmethod
    def k(cls, cartan, side, lam):
        return cls.monomial(cartan, side, torus=lam)

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
        return BorelElt(self.cartan, self.side, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Scalar.coerce(c)
        if not c:
            return BorelElt(self.cartan, self.side)
        return BorelElt(self.cartan, self.side, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BorelElt):
            return self.scale(other)
        if other.side != self.side:
            raise ValueError("cannot multiply elements of different Borel sides")
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                e, m = mul_monomials(self.cartan, self.side, m1, m2)
                v = out.get(m, ZERO) + c1 * c2 * qpow(e)
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return BorelElt(self.cartan, self.side, out)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, BorelElt) and self.side == other.side and self.terms == other.terms

    def __repr__(self):
        return "BorelElt(%s)" % render_borel(self)

    def counit(self):
        return sum((c for (lam, w), c in self.terms.items() if not w), ZERO)


def mul_monomials(cartan, side, m1, m2):
    """Product of normal-ordered monomials as (q-exponent, monomial)."""
    (lam, w1), (mu, w2) = m1, m2
    beta = word_weight(cartan, w1)
    e = cartan.inner(mu, beta)
    if side == PLUS:
        e = -e
    return e, (wadd(lam, mu), w1 + w2)


def render_mon(side, mon, names=None):
    lam, word = mon
    parts = []
    if any(lam):
        parts.append("k(%s)" % ",".join(str(x) for x in lam))
    letter = "e" if side == PLUS else "f"
    parts.extend("%s%d" % (letter, i + 1) for i in word)
    return "*".join(parts) if parts else "1"


def render_borel(x, names=None):
    if not x.terms:
        return "0"
    items = sorted(x.terms.items(), key=lambda t: (len(t[0][1]), t[0][1], t[0][0]))
    return " + ".join("(%s)*%s" % (c.render(names), render_mon(x.side, m)) for m, c in items)


# ------------------------------------------------------------------ coproduct

_coprod_cache = {}
_coprod_lock = threading.Lock()


def coproduct_monomial(cartan, side, mon):
    """Delta of a monomial as {(mon1, mon2): Scalar}."""
    key = (cartan.key, side, mon)
    hit = _coprod_cache.get(key)
    if hit is not None:
        return hit
    lam, word = mon
    zero = cartan.zero()
    # states: (t1, w1, t2, w2) -> exponent multiset as dict of exps
    states = {(lam, (), lam, ()): {Fraction(0): 1}}
    for i in word:
        a = cartan.alpha(i)
        new = {}
        for (t1, w1, t2, w2), exps in states.items():
            if side == PLUS:
                # e_i (x) 1
                _acc(new, (t1, w1 + (i,), t2, w2), exps, Fraction(0))
                # k_i (x) e_i, moving k_i left past the e's of leg one
                shift = -cartan.inner(a, word_weight(cartan, w1))
                _acc(new, (wadd(t1, a), w1, t2, w2 + (i,)), exps, shift)
            else:
                # f_i (x) k_i^-1, moving k_i^-1 left past the f's of leg two
                shift = -cartan.inner(a, word_weight(cartan, w2))
                _acc(new, (t1, w1 + (i,), wsub(t2, a), w2), exps, shift)
                # 1 (x) f_i
                _acc(new, (t1, w1, t2, w2 + (i,)), exps, Fraction(0))
        states = new
    out = {}
    for (t1, w1, t2, w2), exps in states.items():
        c = ZERO
        for e, mult in exps.items():
            c = c + mult * qpow(e)
        if c:
            out[((t1, w1), (t2, w2))] = c
    with _coprod_lock:
        _coprod_cache[key] = out
    return out


def _acc(new, key, exps, shift):
    d = new.setdefault(key, {})
    for e, mult in exps.items():
        e2 = e + shift
        d[e2] = d.get(e2, 0) + mult


def coproduct(x, parts=2):
    """Delta (parts=2) or (Delta x 1)Delta (parts=3) as {tuple of monomials: Scalar}."""
    if parts not in (2, 3):
        raise ValueError("parts must be 2 or 3")
    out = {}
    for m, c in x.terms.items():
        for (m1, m2), c2 in coproduct_monomial(x.cartan, x.side, m).items():
            if parts == 2:
                _tacc(out, (m1, m2), c * c2)
            else:
                for (m11, m12), c3 in coproduct_monomial(x.cartan, x.side, m1).items():
                    _tacc(out, (m11, m12, m2), c * c2 * c3)
    return out


def coproduct_right(x):
    """(1 x Delta)Delta, for coassociativity checks."""
    out = {}
    for m, c in x.terms.items():
        for (m1, m2), c2 in coproduct_monomial(x.cartan, x.side, m).items():
            for (m21, m22), c3 in coproduct_monomial(x.cartan, x.side, m2).items():
                _tacc(out, (m1, m21, m22), c * c2 * c3)
    return out


def _tacc(out, key, c):
    v = out.get(key, ZERO) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def antipode(x):
    """S(k_l x_1..x_m) = S(x_m)..S(x_1) k_-l with S(e)=-k^-1 e and S(f)=-f k."""
    cartan, side = x.cartan, x.side
    out = BorelElt(cartan, side)
    for (lam, word), c in x.terms.items():
        acc = BorelElt.monomial(cartan, side, coeff=c)
        for i in reversed(word):
            acc = acc * antipode_gen(cartan, side, i)
        acc = acc * BorelElt.k(cartan, side, wscale(lam, -1))
        out = out + acc
    return out


def antipode_gen(cartan, side, i):
    a = cartan.alpha(i)
    if side == PLUS:
        return BorelElt.monomial(cartan, side, torus=wscale(a, -1), word=(i,), coeff=Scalar.coerce(-1))
    # -f_i k_i = -q^{(a_i, a_i)} k_i f_i
    return BorelElt.monomial(cartan, side, torus=a, word=(i,), coeff=-qpow(cartan.inner(a, a)))


def counit_monomial(mon):
    return ONE if not mon[1] else ZERO


# -------------------------------------------------------------------- pairing

class RTPairing:
    """The pairing <U_q(b+)^op | U_q(b-)> by recursion on word length.

    ``recursions`` counts word-pair values actually computed (memo misses).
    The memo is append-only and writes are idempotent, so sharing one
    instance across threads is safe.
    """

    def __init__(self, cartan, orientation="standard"):
        if orientation not in ("standard", "opposite"):
            raise ValueError("orientation must be 'standard' or 'opposite'")
        self.cartan = cartan
        self.orientation = orientation
        self.memo = {}
        self.recursions = 0
        self._lock = threading.Lock()
        self._qhat = [qhat(d) for d in cartan.d]

    def word_pair(self, ew, fw):
        ew, fw = tuple(ew), tuple(fw)
        if sorted(ew) != sorted(fw):
            return ZERO
        if not ew:
            return ONE
        key = (ew, fw)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        with self._lock:
            self.recursions += 1
        j, rest = fw[0], fw[1:]
        # axiom <a | u1 u2> = sum <a_(1) | u1><a_(2) | u2> with u1 = f_j
        total = ZERO
        for (m1, m2), c in coproduct_monomial(self.cartan, PLUS, (self.cartan.zero(), ew)).items():
            if self.orientation == "opposite":
                # coproduct read in the opposite coalgebra; rejected by the double relation
                m1, m2 = m2, m1
            if m1[1] != (j,):
                continue
            left = self.pair_monomials(m1, (self.cartan.zero(), (j,)))
            if not left:
                continue
            right = self.pair_monomials(m2, (self.cartan.zero(), rest))
            if right:
                total = total + c * left * right
        self.memo.setdefault(key, total)
        return total

    def generator_value(self, i):
        """<e_i | f_i> = -qhat_i."""
        return -self._qhat[i]

    def pair_monomials(self, am, um):
        """<k_l E | k_m F> = q^{-(l,m) + (l,b) - (b,m)} <E|F>, b the weight of E."""
        (lam, ew), (mu, fw) = am, um
        if sorted(ew) != sorted(fw):
            return ZERO
        c = self.cartan
        if len(ew) == 1:
            base = self.generator_value(ew[0]) if ew == fw else ZERO
        else:
            base = self.word_pair(ew, fw)
        if not base:
            return ZERO
        beta = word_weight(c, ew)
        e = -c.inner(lam, mu) + c.inner(lam, beta) - c.inner(beta, mu)
        return base * qpow(e) if e else base

    def pair(self, a, y):
        if a.side != PLUS or y.side != MINUS:
            raise ValueError("pair expects (plus element, minus element)")
        total = ZERO
        for m1, c1 in a.terms.items():
            for m2, c2 in y.terms.items():
                v = self.pair_monomials(m1, m2)
                if v:
                    total = total + c1 * c2 * v
        return total

    # persistence hooks used by the cli cache
    def export_memo(self):
        return dict(self.memo)

    def import_memo(self, entries):
        for k, v in entries.items():
            self.memo.setdefault(k, v)


def words_of_weight(root_coords):
    """All words with letter multiplicities given by root coordinates, lex order."""
    letters = []
    for i, m in enumerate(root_coords):
        letters.extend([i] * int(m))
    return sorted(set(permutations(letters)))


@dataclass
class GramBlock:
    beta: tuple
    rows: list
    cols: list
    matrix: list
    rank: int
    pivots: list
    radical: list = field(default_factory=list)

    def row_vector(self, x):
        """Coordinates of a plus element of weight beta on the row words."""
        index = {w: k for k, w in enumerate(self.rows)}
        vec = [ZERO] * len(self.rows)
        for (lam, w), c in x.terms.items():
            if any(lam):
                raise ValueError("torus part not allowed here")
            vec[index[w]] = vec[index[w]] + c
        return vec

    def annihilates(self, vec):
        for col in range(len(self.cols)):
            s = ZERO
            for r, x in enumerate(vec):
                if x:
                    s = s + x * self.matrix[r][col]
            if s:
                return False
        return True


class HeightCapExceeded(ValueError):
    pass


DEFAULT_CAPS = {"A1": 6, "A2": 5, "A3": 5, "B2": 5, "C2": 5, "G2": 4}


def default_height_cap(cartan):
    return DEFAULT_CAPS.get(cartan.name, 4)


def gram(pairing, beta, max_height=None):
    """Gram block of the pairing on U+_beta x U-_-beta (beta in root coordinates)."""
    cartan = pairing.cartan
    beta = tuple(int(x) for x in beta)
    cap = default_height_cap(cartan) if max_height is None else max_height
    if sum(beta) > cap:
        raise HeightCapExceeded("height %d exceeds cap %d" % (sum(beta), cap))
    words = words_of_weight(beta)
    mat = [[pairing.word_pair(r, c) if len(r) > 1 else pairing.pair_monomials((cartan.zero(), r), (cartan.zero(), c))
            for c in words] for r in words]
    pivots, relations = linalg.row_basis(mat)
    radical = linalg.left_kernel(mat)
    radical = [[Scalar.coerce(x) for x in v] for v in radical]
    return GramBlock(beta, list(words), list(words), mat, len(pivots), pivots, radical)


def serre_element(cartan, i, j):
    """sum_k (-1)^k [1-a_ij, k]_{q_i} e_i^{1-a_ij-k} e_j e_i^k."""
    m = 1 - cartan.A[i][j]
    out = BorelElt(cartan, PLUS)
    for k in range(m + 1):
        c = qbinom(m, k, cartan.d[i]) * (-1) ** k
        w = (i,) * (m - k) + (j,) + (i,) * k
        out = out + BorelElt.monomial(cartan, PLUS, word=w, coeff=c)
    return out


def serre_weight(cartan, i, j):
    m = 1 - cartan.A[i][j]
    c = [0] * cartan.n
    c[i] += m
    c[j] += 1
    return tuple(c)


def serre_in_radical(pairing, i=None, j=None, max_height=None):
    """True when the Serre element(s) lie in the Gram radical at their weight."""
    cartan = pairing.cartan
    pairs = [(i, j)] if i is not None else [(a, b) for a in range(cartan.n) for b in range(cartan.n) if a != b]
    for a, b in pairs:
        blk = gram(pairing, serre_weight(cartan, a, b), max_height=max_height if max_height else 99)
        if not blk.annihilates(blk.row_vector(serre_element(cartan, a, b))):
            return False
    return True


def kostant_count(cartan, beta):
    """Number of multisets of positive roots summing to beta (root coordinates)."""
    roots = [tuple(int(x) for x in cartan.root_coords(r)) for r in cartan.positive_roots()]
    beta = tuple(int(x) for x in beta)

    def count(target, start):
        if not any(target):
            return 1
        total = 0
        for k in range(start, len(roots)):
            r = roots[k]
            rest = tuple(t - x for t, x in zip(target, r))
            if all(x >= 0 for x in rest):
                total += count(rest, k)
        return total

    return count(beta, 0)


def canonical_element(pairing, beta, max_height=None, row_order=None):
    """C_beta = sum_{a,b} (G^-1)_{ba} x_a (x) y_b over a nonsingular pivot block.

    Returned as a DoubleElt (plus part on the left, minus part on the right).
    ``row_order`` optionally permutes the candidate words before pivoting,
    which changes the chosen basis but not the element.
    """
    from .double import DoubleElt

    cartan = pairing.cartan
    beta = tuple(int(x) for x in beta)
    zero = cartan.zero()
    if not any(beta):
        return DoubleElt(cartan, {((zero, ()), (zero, ())): ONE})
    blk = gram(pairing, beta, max_height)
    order = list(range(len(blk.rows))) if row_order is None else list(row_order)
    rows = [blk.matrix[k] for k in order]
    piv_rows, _ = linalg.row_basis(rows)
    piv_rows = [order[k] for k in piv_rows]
    sub = [blk.matrix[r] for r in piv_rows]
    piv_cols, _ = linalg.row_basis(linalg.transpose(sub))
    g = [[blk.matrix[r][c] for c in piv_cols] for r in piv_rows]
    ginv = linalg.inverse(g)
    terms = {}
    for a, r in enumerate(piv_rows):
        for b, c in enumerate(piv_cols):
            v = ginv[b][a]
            if v:
                terms[((zero, blk.rows[r]), (zero, blk.cols[c]))] = v
    return DoubleElt(cartan, terms)


def twisted_pair(pairing, bichar, x, lam, y, mu, check=True):
    """<x.k_lam | y.k_mu>_{p^-1} for x in U+, y in U- (no torus parts).

    Computed from the generic deformation rule applied to the twisted
    products; with ``check`` the closed form q^{(Phi_- lam, mu)} <x|y> is
    compared and a mismatch raises.
    """
    from .twist import twist_mul_borel, deformed_pair

    cartan = pairing.cartan
    xk = twist_mul_borel(bichar, x, BorelElt.k(cartan, PLUS, lam), inverse=True)
    yk = twist_mul_borel(bichar, y, BorelElt.k(cartan, MINUS, mu), inverse=True)
    value = deformed_pair(pairing, bichar, xk, yk, inverse=True)
    if check:
        closed = qpow(bichar.phi_minus_pair(lam, mu)) * pairing.pair(x, y)
        if value != closed:
            raise AssertionError("twisted pairing mismatch: %s vs %s" % (value, closed))
    return value
