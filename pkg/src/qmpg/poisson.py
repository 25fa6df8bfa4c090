"""Leaf and orbit dimensions, algebraicity and related rational linear algebra.

Entries of Phi may carry formal irrational symbols; these are handled by
sympy as independent transcendentals, so ranks are taken over Q(symbols).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import sympy
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .rootsys import Lattice, WeylGroup
from .scalars import evec

__all__ = [
    "PoissonContext", "LeafReport", "AlgebraicityReport", "sigma_w", "s_of_w", "leaf_dim",
    "orbit_rank", "leaf_table", "is_algebraic", "brute_force_m", "aperp", "atilde_dim",
    "rational_image_dim", "zw_data", "y_lambda_exponent", "NotAlgebraic",
]


class NotAlgebraic(ValueError):
    pass


class PoissonContext:
    def __init__(self, cartan, bichar, lattice=None):
        self.cartan = cartan
        self.bichar = bichar
        self.lattice = lattice or bichar.lattice or Lattice.weight(cartan)
        self.weyl = WeylGroup(cartan)
        names = list(bichar.names)
        width = max([len(e) for row in bichar.phi for e in row] + [1])
        while len(names) < width - 1:
            names.append("x%d" % (len(names) + 1))
        self.symbols = sympy.symbols(names) if names else ()
        if not isinstance(self.symbols, (tuple, list)):
            self.symbols = (self.symbols,)
        self.symbols = tuple(self.symbols)
        n = cartan.n
        self.phi = sympy.Matrix(n, n, lambda i, j: self._expr(bichar.phi[i][j]))
        self.gram = sympy.Matrix(n, n, lambda i, j: sympy.Rational(cartan.gramFW[i][j]))
        for i in range(n):
            for j in range(n):
                ei = sympy.eye(n)[:, i]
                ej = sympy.eye(n)[:, j]
                a = ((self.phi * ei).T * self.gram * ej)[0]
                b = ((self.phi * ej).T * self.gram * ei)[0]
                if sympy.expand(a + b) != 0:
                    raise AssertionError("Phi is not antisymmetric for the form")

    @property
    def n(self):
        return self.cartan.n

    def _expr(self, e):
        e = evec(e)
        out = sympy.Integer(0)
        for k, x in enumerate(e):
            if x:
                r = sympy.Rational(x.numerator, x.denominator)
                out += r if k == 0 else r * self.symbols[k - 1]
        return out

    def phi_plus(self):
        return self.phi + sympy.eye(self.n)

    def phi_minus(self):
        return self.phi - sympy.eye(self.n)

    def weyl_matrix(self, w):
        return sympy.Matrix(self.n, self.n, lambda i, j: sympy.Rational(w.mat[i][j]))

    def formal_components(self):
        """Phi = Phi_0 + sum_k x_k Phi_k, returned as [Phi_0, Phi_1, ...]."""
        n = self.n
        comps = [self.phi.applyfunc(lambda e: e.subs({s: 0 for s in self.symbols}))]
        for s in self.symbols:
            comps.append(self.phi.applyfunc(lambda e, s=s: sympy.expand(e).coeff(s)))
        return comps

    def rank(self, m):
        if m.rows == 0 or m.cols == 0:
            return 0
        dom = QQ.frac_field(*self.symbols) if self.symbols else QQ
        return DomainMatrix.from_Matrix(m).convert_to(dom).rank()


def _w_pair(w):
    return w if isinstance(w, tuple) else (w[0], w[1])


def sigma_w(ctx, w):
    """sigma(w) = Phi_- w_- Phi_+ - Phi_+ w_+ Phi_-."""
    wp, wm = _w_pair(w)
    p, m = ctx.phi_plus(), ctx.phi_minus()
    out = m * ctx.weyl_matrix(wm) * p - p * ctx.weyl_matrix(wp) * m
    return out.applyfunc(sympy.expand)


def s_of_w(ctx, w):
    return ctx.rank(sigma_w(ctx, w))


def leaf_dim(ctx, w):
    wp, wm = _w_pair(w)
    return wp.length + wm.length + s_of_w(ctx, w)


def orbit_rank(ctx, w):
    return ctx.n - s_of_w(ctx, w)


@dataclass
class LeafReport:
    w: tuple
    l: int
    s: int
    leafDim: int
    orbitRank: int
    zwDim: int
    latticeRank: object = None

    def label(self):
        return "%s|%s" % (self.w[0].label(), self.w[1].label())


def weyl_sorted(ctx):
    return sorted(ctx.weyl.elements, key=lambda e: (e.length, e.word))


def leaf_table(ctx):
    """One LeafReport per (w+, w-), in length-lex order of the reduced words."""
    alg = is_algebraic(ctx).algebraic
    rows = []
    ws = weyl_sorted(ctx)
    for wp in ws:
        for wm in ws:
            w = (wp, wm)
            s = s_of_w(ctx, w)
            l = wp.length + wm.length
            zw = zw_data(ctx, w) if alg else None
            rows.append(LeafReport(w, l, s, l + s, ctx.n - s,
                                   zw[0] if zw else ctx.n - s, zw[1] if zw else None))
    return rows


@dataclass
class AlgebraicityReport:
    algebraic: bool
    m: int = None
    offending: tuple = None
    via_values: bool = None


def is_algebraic(ctx):
    """Algebraic iff u is rational on P x P; then m is minimal with Phi(mP) in P."""
    ut = ctx.bichar.Ut
    n = ctx.n
    offending = None
    for i in range(n):
        for j in range(n):
            if any(ut[i][j][1:]):
                offending = (i, j)
                break
        if offending:
            break
    via_values = offending is None
    comps = ctx.formal_components()
    via_phi = all(c.is_zero_matrix for c in comps[1:])
    if via_values != via_phi:
        raise AssertionError("rationality of u and of Phi disagree")
    if not via_values:
        return AlgebraicityReport(False, None, offending, via_values)
    m = 1
    for e in comps[0]:
        m = lcm(m, int(sympy.Rational(e).q))
    return AlgebraicityReport(True, m, None, via_values)


def brute_force_m(ctx, bound=24):
    """Smallest m <= bound with m * Phi integral on the weight basis, or None."""
    comps = ctx.formal_components()
    if any(not c.is_zero_matrix for c in comps[1:]):
        return None
    for m in range(1, bound + 1):
        if all((m * e).is_integer for e in comps[0]):
            return m
    return None


def _stack(ctx):
    n = ctx.n
    comps = ctx.formal_components()
    rows = []
    top = comps[0] + sympy.eye(n)
    bot = comps[0] - sympy.eye(n)
    rows.append(top.row_join(bot))
    for c in comps[1:]:
        rows.append(c.row_join(c))
    out = rows[0]
    for r in rows[1:]:
        out = out.col_join(r)
    return out


def aperp(ctx):
    """Basis of {(l, m) in h*_Q x h*_Q : Phi_+ l + Phi_- m = 0} and its rank.

    Cross-checked against the space {v : Phi v rational} via
    v -> (-Phi_- v, Phi_+ v).
    """
    basis = _stack(ctx).nullspace()
    rank = len(basis)
    if rank != rational_image_dim(ctx):
        raise AssertionError("a_Q-perp rank differs from the rational-image space")
    return basis, rank


def rational_image_dim(ctx):
    """dim {v in h*_Q : Phi v in h*_Q} = dim of the common kernel of the formal parts."""
    comps = ctx.formal_components()[1:]
    n = ctx.n
    if not comps:
        return n
    stacked = comps[0]
    for c in comps[1:]:
        stacked = stacked.col_join(c)
    return n - stacked.rank()


def atilde_dim(ctx):
    return 2 * ctx.n - aperp(ctx)[1]


def zw_data(ctx, w):
    """(n - s(w), rank of the lattice ker sigma(w) cap L).

    The lattice rank is read off the Smith form of sigma(w) on the lattice
    basis; the non-algebraic case only returns the first entry.
    """
    s = s_of_w(ctx, w)
    dim = ctx.n - s
    if not is_algebraic(ctx).algebraic:
        return dim, None
    sig = sigma_w(ctx, w)
    b = sympy.Matrix(ctx.n, ctx.n, lambda i, j: sympy.Rational(ctx.lattice.matrix[i][j]))
    m = sig * b
    den = 1
    for e in m:
        den = lcm(den, int(sympy.Rational(e).q))
    mi = (m * den).applyfunc(sympy.Integer)
    snf = smith_normal_form(mi, domain=ZZ)
    nonzero = sum(1 for k in range(min(snf.shape)) if snf[k, k] != 0)
    lat = ctx.n - nonzero
    if lat != dim:
        raise AssertionError("lattice kernel rank %d differs from n - s(w) = %d" % (lat, dim))
    return dim, lat


def y_lambda_exponent(ctx, w, lam, eta):
    """(m sigma(w) lam, eta) for the minimal algebraicity witness m."""
    rep = is_algebraic(ctx)
    if not rep.algebraic:
        raise NotAlgebraic("u is not rational on P x P at %s" % (rep.offending,))
    v = sigma_w(ctx, w) * sympy.Matrix([sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in lam])
    eta_v = sympy.Matrix([sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in eta])
    val = rep.m * (v.T * ctx.gram * eta_v)[0]
    val = sympy.Rational(val)
    return Fraction(int(val.p), int(val.q))
