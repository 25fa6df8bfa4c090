"""Verification suites run by ``qmpg verify``.

Each suite returns a list of Check records.  Everything is deterministic:
random bicharacters come from a fixed seed.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .double import (DoubleElt, character_check, derived_relations, quotient_to_uqg_check,
                     twisted_double_check)
from .qpair import (MINUS, PLUS, BorelElt, RTPairing, coproduct, coproduct_monomial,
                    default_height_cap, gram, kostant_count, serre_element, serre_in_radical,
                    serre_weight, twisted_pair)
from .repfun import (Braiding, HWModule, ModuleError, TwistedModule, eigen_identity_check,
                     naturality_check, verify_cor310)
from .rootsys import wscale
from .scalars import ONE, ZERO, eneg, qpow
from .twist import (Bicharacter, DeformedPairing, twist_factor, twist_mul_borel,
                    verify_hopf_twist)


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    lines: list = field(default_factory=list)


class SuiteContext:
    def __init__(self, config, pairing):
        self.config = config
        self.cartan = config.cartan
        self.lattice = config.lattice
        self.bichar = config.bichar
        self.pairing = pairing
        self.names = config.symbols
        cap = config.caps.height
        self.height = int(cap) if cap else default_height_cap(self.cartan)

    def random_bichars(self, count, seed=0):
        """Seeded random rational bicharacters on the configured lattice."""
        rng = random.Random(seed)
        n = self.cartan.n
        out = []
        for _ in range(count):
            U = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    x = Fraction(rng.choice([-1, 1]) * rng.randint(1, 6), rng.randint(1, 4))
                    U[i][j], U[j][i] = x, -x
            out.append(Bicharacter(self.cartan, U, self.lattice))
        return out

    def bichars(self, extra=2):
        return [self.bichar] + (self.random_bichars(extra) if self.cartan.n > 1 else [])

    def sample(self, side):
        c = self.cartan
        out = [BorelElt.gen(c, side, i) for i in range(c.n)]
        out.append(BorelElt.k(c, side, self.lattice.cols[0]))
        word = (0, 1) if c.n > 1 else (0, 0)
        out.append(BorelElt.monomial(c, side, torus=self.lattice.cols[-1], word=word))
        return out

    def small_weights(self):
        """Nonzero dominant elements of L, smallest module first."""
        ws = [l for l in self.lattice.dominant_elements(2) if any(l)]
        return sorted(ws, key=lambda l: (self.cartan.weyl_dimension(l), l))


def _render(x, names=()):
    return x.render(names) if hasattr(x, "render") else str(x)


# -------------------------------------------------------------------- suites

def suite_hopf(ctx):
    c = ctx.cartan
    checks = []
    for side in (PLUS, MINUS):
        sample = ctx.sample(side)
        # coassociativity on monomials
        bad = None
        for x in sample:
            (mon, _), = x.terms.items()
            left, right = {}, {}
            for (m1, m2), cc in coproduct_monomial(c, side, mon).items():
                for (a, b), c1 in coproduct_monomial(c, side, m1).items():
                    k = (a, b, m2)
                    left[k] = left.get(k, ZERO) + cc * c1
                for (a, b), c2 in coproduct_monomial(c, side, m2).items():
                    k = (m1, a, b)
                    right[k] = right.get(k, ZERO) + cc * c2
            left = {k: v for k, v in left.items() if v}
            right = {k: v for k, v in right.items() if v}
            if left != right:
                bad = repr(x)
                break
        checks.append(Check("hopf", "coassociative U(b%s)" % side, bad is None,
                            [] if bad is None else ["counterexample: %s" % bad]))
        for k, pt in enumerate([Bicharacter.zero(c, ctx.lattice)] + ctx.bichars()):
            rep = verify_hopf_twist(sample, pt)
            label = "untwisted" if k == 0 else ("configured U" if k == 1 else "seeded U #%d" % (k - 1))
            lines = ["%d products checked" % rep.checked]
            if not rep.ok:
                lines.append("%s fails at %s" % (rep.failed, rep.detail))
            checks.append(Check("hopf", "twisted Hopf axioms U(b%s), %s" % (side, label), rep.ok, lines))
        ok = True
        for pt in ctx.bichars():
            inv = pt.inverse()
            for x in sample:
                for y in sample:
                    (m1, _), = x.terms.items()
                    (m2, _), = y.terms.items()
                    d1 = _bideg(c, side, m1)
                    d2 = _bideg(c, side, m2)
                    back = twist_mul_borel(pt, x, y).scale(qpow(twist_factor(inv, d1, d2)))
                    if back != x * y:
                        ok = False
        checks.append(Check("hopf", "twist then untwist U(b%s)" % side, ok))
    fs = orientation_failures(ctx.pairing)
    fo = orientation_failures(RTPairing(c, "opposite"))
    # in rank one every word is a power of e, and the two orientations coincide
    checks.append(Check("hopf", "pairing orientation", not fs and (bool(fo) or c.n == 1),
                        ["standard orientation failures: %s" % (sorted(fs) or "none"),
                         "opposite orientation failures: %s" % (sorted(fo) or "none")]))
    return checks


def orientation_failures(pairing, max_len=3):
    """Dual-pair axioms violated by the untwisted pairing on words of total length <= max_len."""
    from itertools import product
    c = pairing.cartan
    z = c.zero()
    D = DeformedPairing(pairing, Bicharacter.zero(c))
    words = [w for k in range(3) for w in product(range(c.n), repeat=k)]
    bad = set()
    for w1, w2, v1, v2 in product(words, repeat=4):
        if len(w1) + len(w2) > max_len or len(v1) + len(v2) > max_len:
            continue
        bad |= set(D.check_axioms(BorelElt(c, PLUS, {(z, w1): ONE}), BorelElt(c, PLUS, {(z, w2): ONE}),
                                  BorelElt(c, MINUS, {(z, v1): ONE}), BorelElt(c, MINUS, {(z, v2): ONE})))
    return bad


def _bideg(cartan, side, mon):
    from .qpair import degree
    return degree(cartan, side, mon)


def suite_pairing(ctx):
    c = ctx.cartan
    P = ctx.pairing
    lines = []
    ok = True
    basis = list(ctx.lattice.cols)
    for a, lam in enumerate(basis):
        for b, mu in enumerate(basis):
            got = P.pair(BorelElt.k(c, PLUS, lam), BorelElt.k(c, MINUS, mu))
            want = qpow(-c.inner(lam, mu))
            ok &= got == want
            lines.append("<k(L%d)|k(L%d)> = %s" % (a + 1, b + 1, got.render()))
    for i in range(c.n):
        for j in range(c.n):
            got = P.pair(BorelElt.gen(c, PLUS, i), BorelElt.gen(c, MINUS, j))
            want = P.generator_value(i) if i == j else ZERO
            ok &= got == want
            lines.append("<e%d|f%d> = %s" % (i + 1, j + 1, got.render()))
    zeros = True
    for i in range(c.n):
        for lam in basis:
            zeros &= not P.pair(BorelElt.k(c, PLUS, lam), BorelElt.gen(c, MINUS, i))
            zeros &= not P.pair(BorelElt.gen(c, PLUS, i), BorelElt.k(c, MINUS, lam))
    lines.append("<k|f> = <e|k> = 0: %s" % ("yes" if zeros else "no"))
    checks = [Check("pairing", "generator values", ok and zeros, lines)]
    for pt in ctx.bichars():
        for inverse in (False, True):
            D = DeformedPairing(P, pt, inverse)
            bad = set()
            ps, ms = ctx.sample(PLUS), ctx.sample(MINUS)
            for a1 in ps:
                for a2 in ps:
                    for u1 in ms:
                        for u2 in ms[:3]:
                            bad |= set(D.check_axioms(a1, a2, u1, u2))
            checks.append(Check("pairing", "deformed pairing axioms (U=%s, %s)" % (
                _urender(pt), "p" if inverse else "p^-1"), not bad,
                [] if not bad else ["failed axioms: %s" % sorted(bad)]))
    return checks


def _urender(pt):
    return ";".join(",".join(r) for r in pt.render_matrix(pt.U))


def suite_serre(ctx):
    c = ctx.cartan
    P = ctx.pairing
    checks = []
    for i in range(c.n):
        for j in range(c.n):
            if i == j:
                continue
            beta = serre_weight(c, i, j)
            ok = serre_in_radical(P, i, j)
            blk = gram(P, beta, max_height=99)
            lines = ["weight %s: rank %d of %d words" % (",".join(map(str, beta)), blk.rank, len(blk.rows))]
            lines.append("witness: %s" % serre_element(c, i, j))
            checks.append(Check("serre", "Serre element (%d,%d) in radical" % (i + 1, j + 1), ok, lines))
    ok = True
    lines = []
    for beta in c.qplus(ctx.height):
        blk = gram(P, beta, max_height=99)
        k = kostant_count(c, beta)
        if blk.rank != k:
            ok = False
            lines.append("beta %s: rank %d, Kostant %d" % (",".join(map(str, beta)), blk.rank, k))
    lines.append("all weights of height <= %d" % ctx.height)
    checks.append(Check("serre", "Gram rank equals Kostant count", ok, lines))
    return checks


def _generator_pairs(ctx):
    c = ctx.cartan
    z = c.zero()
    us = [(z, (j,)) for j in range(c.n)] + [(lam, ()) for lam in ctx.lattice.cols]
    as_ = [(z, (i,)) for i in range(c.n)] + [(lam, ()) for lam in ctx.lattice.cols]
    pairs = [(u, a) for u in us for a in as_]
    word = (0, 1) if c.n > 1 else (0, 0)
    pairs.append(((z, word), (z, word)))
    pairs.append(((ctx.lattice.cols[0], (0,)), (z, tuple(reversed(word)))))
    pairs.append(((z, (0, 0)), (ctx.lattice.cols[-1], (0,))))
    return pairs


def suite_double(ctx):
    ok, lines = derived_relations(ctx.pairing)
    checks = [Check("double", "derived cross relations", ok, lines)]
    rep = quotient_to_uqg_check(ctx.pairing)
    checks.append(Check("double", "quotient to U_q(g)", rep.ok, rep.lines))
    checks.append(Check("double", "generic characters", character_check(ctx.pairing, _generator_pairs(ctx))))
    return checks


def suite_twistdouble(ctx):
    checks = []
    pairs = _generator_pairs(ctx)
    for pt in ctx.bichars():
        rep = twisted_double_check(ctx.pairing, pt, pairs)
        lines = ["%d products compared" % rep.checked] + ([rep.failure] if rep.failure else [])
        checks.append(Check("twistdouble", "twisted double (U=%s)" % _urender(pt), rep.ok, lines))
    return checks


def suite_modules(ctx):
    c = ctx.cartan
    lines = []
    ok = True
    eig = True
    for lam in ctx.lattice.dominant_elements(1):
        try:
            m = HWModule(c, lam, ctx.lattice, ctx.config.caps.dimension)
        except ModuleError as exc:
            lines.append("L(%s): %s" % (_w(lam), exc))
            continue
        want = c.weyl_dimension(lam)
        ok &= m.dim == want
        for pt in ctx.bichars():
            eig &= eigen_identity_check(TwistedModule(m, pt))
        lines.append("L(%s): dim %d, Weyl formula %s" % (_w(lam), m.dim, want))
    return [Check("modules", "dimensions", ok, lines),
            Check("modules", "twisted torus eigenvalues", eig)]


def _w(lam):
    return ",".join(str(x) for x in lam)


def suite_braiding(ctx):
    c = ctx.cartan
    ws = ctx.small_weights()
    lam = ws[0]
    other = next((w for w in ws if w != lam), lam)
    M = HWModule(c, lam, ctx.lattice, ctx.config.caps.dimension)
    N = HWModule(c, other, ctx.lattice, ctx.config.caps.dimension)
    checks = []
    for pt in [None] + [ctx.bichar]:
        br = Braiding(ctx.pairing, M, N, pt)
        nat, where = naturality_check(br)
        label = "plain" if pt is None else "twisted"
        checks.append(Check("braiding", "naturality %s L(%s) x L(%s)" % (label, _w(lam), _w(other)), nat,
                            [] if nat else ["fails at %r" % (where,)]))
        if pt is not None:
            top = all(br({(0, j): ONE}) == {(j, 0): qpow(eneg(pt.phi_plus_pair(M.weights[0], N.weights[j])))}
                      for j in range(N.dim))
            checks.append(Check("braiding", "psi(v_L x v) = q^-(Phi+ L, g) v x v_L", top))
            same = all(br({(i, j): ONE}) == br.via_phi({(i, j): ONE})
                       for i in range(M.dim) for j in range(N.dim))
            checks.append(Check("braiding", "agrees with phi theta phi^-1", same))
    return checks


def suite_commutation(ctx):
    c = ctx.cartan
    lam = ctx.small_weights()[0]
    M = HWModule(c, lam, ctx.lattice, ctx.config.caps.dimension)
    grid = None
    if ctx.config.caps.grid:
        g = ctx.config.caps.grid
        grid = [(wscale(c.varpi(0), a), wscale(c.varpi(c.n - 1), b)) for a in range(g) for b in range(g)]
    rep = verify_cor310(ctx.pairing, ctx.bichar, M, M, grid=grid)
    lines = ["%d coefficient pairs, %d with correction terms" % (rep.checked, rep.with_correction)]
    if rep.failure:
        lines.append(rep.failure)
    return [Check("commutation", "commutation with c_{f, v_L}, L = %s" % _w(lam), rep.ok, lines)]


def suite_kprop(ctx):
    c = ctx.cartan
    checks = []
    for pt in ctx.bichars():
        seen = {}
        inj = True
        for lam in ctx.lattice.box(5):
            key = tuple(pt.phi_minus_pair(lam, w) for w in ctx.lattice.cols)
            if key in seen and seen[key] != lam:
                inj = False
            seen[key] = lam
        checks.append(Check("kprop", "l -> (Phi- l, .) injective on box 5 (U=%s)" % _urender(pt), inj))
        ok = True
        lam, mu = ctx.lattice.cols[0], ctx.lattice.cols[-1]
        for beta in c.qplus(min(ctx.height, 4)):
            blk = gram(ctx.pairing, beta, max_height=99)
            rows = [blk.rows[k] for k in blk.pivots]
            pc = linalg.row_basis(linalg.transpose([blk.matrix[k] for k in blk.pivots]))[0]
            cols = [blk.cols[k] for k in pc]
            mat = [[twisted_pair(ctx.pairing, pt, BorelElt.monomial(c, PLUS, word=r), lam,
                                 BorelElt.monomial(c, MINUS, word=w), mu) for w in cols] for r in rows]
            if linalg.rank(mat) != len(rows) or len(rows) != kostant_count(c, beta):
                ok = False
        checks.append(Check("kprop", "twisted pairing nondegenerate on graded blocks (U=%s)" % _urender(pt), ok))
    return checks


def suite_norms(ctx):
    c = ctx.cartan
    lines = []
    ok = True
    for lam in ctx.small_weights():
        try:
            m = HWModule(c, lam, ctx.lattice, ctx.config.caps.dimension)
        except ModuleError:
            continue
        good, info = c.norm_criterion(lam, [wscale(w, -1) for w in m.weights])
        ok &= good
        lines.append("L(%s)*: %s" % (_w(lam), "ok" if good else info))
    return [Check("norms", "norm criterion on dual weights", ok, lines)]


SUITE_FUNCS = {
    "hopf": suite_hopf,
    "pairing": suite_pairing,
    "serre": suite_serre,
    "double": suite_double,
    "twistdouble": suite_twistdouble,
    "modules": suite_modules,
    "braiding": suite_braiding,
    "commutation": suite_commutation,
    "kprop": suite_kprop,
    "norms": suite_norms,
}


def run_suite(name, ctx):
    try:
        return SUITE_FUNCS[name](ctx)
    except Exception as exc:  # a crash is reported as a failed check
        return [Check(name, "suite raised", False, ["%s: %s" % (type(exc).__name__, exc)])]
