"""Independent reference computations used by the tests.

None of these share code paths with the package beyond the Scalar type,
which is tested on its own.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product

import sympy

from qmpg.scalars import ONE, ZERO, qpow

# ------------------------------------------------------------ root systems

CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "C2": [[2, -2], [-1, 2]],
    "G2": [[2, -3], [-1, 2]],
}
SYMMETRIZER = {"A1": [1], "A2": [1, 1], "A3": [1, 1, 1], "B2": [2, 1], "C2": [1, 2], "G2": [1, 3]}
WEYL_ORDER = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "C2": 8, "G2": 12}


def root_form(name):
    """(alpha_i, alpha_j) = d_i a_ij."""
    a, d = CARTAN[name], SYMMETRIZER[name]
    n = len(a)
    return [[Fraction(d[i] * a[i][j]) for j in range(n)] for i in range(n)]


def positive_roots(name):
    """Positive roots in root coordinates, by closing the simple roots under reflections."""
    a = CARTAN[name]
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for r in frontier:
            for i in range(n):
                # s_i(r) = r - <r, alpha_i^vee> alpha_i
                pair = sum(r[j] * a[i][j] for j in range(n))
                s = tuple(r[j] - (pair if j == i else 0) for j in range(n))
                if all(x >= 0 for x in s) and any(s) and s not in roots:
                    roots.add(s)
                    new.append(s)
        frontier = new
    return sorted(roots)


def _inner_root(name, x, y):
    f = root_form(name)
    n = len(f)
    return sum(x[i] * f[i][j] * y[j] for i in range(n) for j in range(n))


def _to_root_coords(name, lam):
    """omega coordinates -> root coordinates (lam = A^T-solve)."""
    a = sympy.Matrix(CARTAN[name])
    # alpha_j = sum_i a_ij omega_i, so lam_omega = A c
    c = a.solve(sympy.Matrix([sympy.Rational(str(x)) for x in lam]))
    return tuple(Fraction(int(v.p), int(v.q)) for v in c)


def freudenthal(name, lam):
    """Weight multiplicities of L(lam) as {root-coordinate offset from top: mult}.

    Uses Freudenthal's formula over the poset below the highest weight.
    """
    pos = positive_roots(name)
    n = len(CARTAN[name])
    top = _to_root_coords(name, lam)
    rho = _to_root_coords(name, tuple([1] * n))
    lr = tuple(t + r for t, r in zip(top, rho))
    norm_top = _inner_root(name, lr, lr)
    mult = {tuple([0] * n): 1}
    # weights below top: top - beta, beta in Q+ with bounded height
    hmax = int(2 * sum(top)) + 1
    levels = sorted((b for b in product(range(hmax + 1), repeat=n) if sum(b) <= hmax), key=sum)
    for beta in levels:
        if not any(beta):
            continue
        mu = tuple(t - b for t, b in zip(top, beta))
        mr = tuple(m + r for m, r in zip(mu, rho))
        den = norm_top - _inner_root(name, mr, mr)
        if den == 0:
            continue
        total = Fraction(0)
        for a in pos:
            k = 1
            while True:
                nb = tuple(b - k * x for b, x in zip(beta, a))
                if any(x < 0 for x in nb):
                    break
                m = mult.get(nb, 0)
                if m:
                    nu = tuple(t - x for t, x in zip(top, nb))
                    total += m * _inner_root(name, nu, a)
                k += 1
        v = 2 * total / den
        if v:
            mult[beta] = int(v)
    return mult


def weyl_dim_oracle(name, lam):
    return sum(freudenthal(name, lam).values())


def kostant_oracle(name, beta):
    """Coefficient of x^beta in prod over positive roots of 1/(1 - x^a), by dynamic programming."""
    beta = tuple(int(b) for b in beta)
    table = {tuple([0] * len(beta)): 1}
    box = list(product(*[range(b + 1) for b in beta]))
    for a in positive_roots(name):
        new = dict(table)
        for v in sorted(box, key=sum):
            prev = tuple(x - y for x, y in zip(v, a))
            if all(x >= 0 for x in prev) and prev in new:
                new[v] = new.get(v, 0) + new[prev]
        table = new
    return table.get(beta, 0)


# ------------------------------------------------------------------ scalars

def qbinom_pascal(m, k, d=1):
    """[m choose k]_{q^d} from [m,k] = t^-k [m-1,k] + t^(m-k) [m-1,k-1] with t = q^d."""
    @lru_cache(None)
    def rec(m, k):
        if k < 0 or k > m:
            return {}
        if k == 0 or k == m:
            return {0: 1}
        out = {}
        for e, c in rec(m - 1, k).items():
            out[e - k] = out.get(e - k, 0) + c
        for e, c in rec(m - 1, k - 1).items():
            out[e + m - k] = out.get(e + m - k, 0) + c
        return {e: c for e, c in out.items() if c}
    s = ZERO
    for e, c in rec(m, k).items():
        s = s + qpow(e * d) * c
    return s


# ---------------------------------------------------------------- pairing

def oracle_pair(name, ew, fw):
    """<E|F> for words, recursing on the E side through Delta(F).

    Uses <a2 a1 | u> = sum <a1|u(1)> <a2|u(2)>, Delta(f) = f (x) k^-a + 1 (x) f,
    <e_i|f_i> = -1/(q^d_i - q^-d_i), and <E | k_m F> = q^{-(wt E, m)} <E|F>.
    """
    form = root_form(name)
    d = SYMMETRIZER[name]
    n = len(form)

    def alpha_dot(i, mu):
        return sum(form[i][j] * mu[j] for j in range(n))

    @lru_cache(None)
    def pair(ew, fw):
        if sorted(ew) != sorted(fw):
            return ZERO
        if not ew:
            return ONE
        if len(ew) == 1:
            i = ew[0]
            return -(qpow(d[i]) - qpow(-d[i])).inv()
        # E = e_i E' ; a2 = e_i, a1 = E'
        i, rest = ew[0], ew[1:]
        total = ZERO
        # Delta(F) leg 1 gets a subword, leg 2 the complement times torus
        m = len(fw)
        for mask in range(1 << m):
            leg1 = tuple(fw[k] for k in range(m) if mask >> k & 1)
            leg2 = [fw[k] for k in range(m) if not mask >> k & 1]
            if sorted(leg1) != sorted(rest) or leg2 != [i]:
                continue
            # leg2 of the product: for each position, k^-a_k if taken by leg1, else f
            # normal-order torus parts of leg 2 to the left: f_j k_mu = q^{(mu, a_j)} k_mu f_j
            e = Fraction(0)
            torus = [0] * n
            for k in reversed(range(m)):
                if mask >> k & 1:
                    torus[fw[k]] -= 1
                else:
                    # the f at position k is moved right past nothing; torus to its right
                    # came from later positions: f_j k_mu = q^{(mu, a_j)} k_mu f_j
                    e += alpha_dot(fw[k], torus)
            # leg 1: product of the chosen f's (tori 1), no reordering needed
            v1 = pair(rest, leg1)
            if not v1:
                continue
            # <e_i | k_mu f_i> = q^{-(a_i, mu)} <e_i|f_i>
            v2 = pair((i,), (i,)) * qpow(-alpha_dot(i, torus))
            total = total + v1 * v2 * qpow(e)
        return total

    return pair(tuple(ew), tuple(fw))


# ------------------------------------------------------------------ poisson

def phi_matrix_oracle(name, U):
    """Phi in omega coordinates from u(w_i, w_j) = (Phi w_i, w_j), via sympy."""
    a = sympy.Matrix(CARTAN[name])
    d = sympy.diag(*SYMMETRIZER[name])
    # (w_i, w_j) = d_i (A^-1)_ij
    g = d * a.inv()
    u = sympy.Matrix(U)
    # u_ij = sum_k Phi_ki g_kj  =>  u = Phi^T g  =>  Phi = (u g^-1)^T
    return (u * g.inv()).T


def brute_force_m(phi, bound=24):
    for m in range(1, bound + 1):
        if all((m * e).is_integer for e in phi):
            return m
    return None
