"""Cartan data, the lattices Q <= L <= P, the invariant form and the Weyl group.

Weights are tuples of Fractions in fundamental-weight coordinates.  The
simple root alpha_j has coordinates (a_1j, ..., a_nj), the j-th column of
the Cartan matrix, and <lambda, alpha_i^vee> is simply lambda_i.
"""

from collections import deque
from fractions import Fraction
from itertools import product

from . import linalg


class CartanError(ValueError):
    pass


def weight(*coords):
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = coords[0]
    return tuple(Fraction(c) for c in coords)


def wadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def wsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def wscale(a, c):
    return tuple(x * c for x in a)


def series_matrix(series, rank):
    """Cartan matrix a_ij = <alpha_i^vee, alpha_j> in Bourbaki numbering."""
    series = series.upper()
    n = rank
    if n < 1:
        raise CartanError("rank must be positive")
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    if series == "G":
        if n != 2:
            raise CartanError("G only exists in rank 2")
        return [[2, -3], [-1, 2]]
    if series == "F":
        if n != 4:
            raise CartanError("F only exists in rank 4")
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if series == "A":
        return a
    if series == "B":
        if n < 2:
            raise CartanError("B needs rank >= 2")
        a[n - 1][n - 2] = -2
        return a
    if series == "C":
        if n < 2:
            raise CartanError("C needs rank >= 2")
        a[n - 2][n - 1] = -2
        return a
    if series == "D":
        if n < 3:
            raise CartanError("D needs rank >= 3")
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    raise CartanError("unknown series %r" % series)


def _symmetrizer(a):
    n = len(a)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j == i or a[i][j] == 0:
                    continue
                if a[j][i] == 0:
                    raise CartanError("a_%d%d != 0 but a_%d%d == 0" % (i + 1, j + 1, j + 1, i + 1))
                dj = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = dj
                    queue.append(j)
                elif d[j] != dj:
                    raise CartanError("Cartan matrix is not symmetrizable")
    den = 1
    for x in d:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return tuple(x // g for x in ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class CartanData:
    """Finite-type Cartan datum with the invariant form in weight coordinates."""

    def __init__(self, matrix, name=None):
        a = [[int(x) for x in row] for row in matrix]
        n = len(a)
        if any(len(row) != n for row in a):
            raise CartanError("Cartan matrix must be square")
        for i in range(n):
            if a[i][i] != 2:
                raise CartanError("diagonal entry a_%d%d must be 2" % (i + 1, i + 1))
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise CartanError("off-diagonal entry a_%d%d must be <= 0" % (i + 1, j + 1))
        self.n = n
        self.A = tuple(tuple(r) for r in a)
        self.d = _symmetrizer(a)
        sym = [[self.d[i] * a[i][j] for j in range(n)] for i in range(n)]
        for k in range(1, n + 1):
            minor = linalg.determinant([[Fraction(x) for x in row[:k]] for row in sym[:k]])
            if minor <= 0:
                raise CartanError("matrix is not of finite type: [d_i a_ij] is not positive definite "
                                  "(leading minor %d is %s)" % (k, minor))
        ainv = linalg.inverse([[Fraction(x) for x in row] for row in a])
        self.gramFW = tuple(tuple(self.d[i] * ainv[i][j] for j in range(n)) for i in range(n))
        self.name = name or "matrix:" + ";".join(",".join(str(x) for x in r) for r in a)
        self.key = "%s|%s" % (";".join(",".join(str(x) for x in r) for r in a),
                              ",".join(str(x) for x in self.d))
        self._alpha = tuple(tuple(Fraction(a[i][j]) for i in range(n)) for j in range(n))
        self._weyl = None
        self._pos = None

    @classmethod
    def build(cls, series=None, rank=None, matrix=None):
        if matrix is not None:
            return cls(matrix)
        return cls(series_matrix(series, rank), name="%s%d" % (series.upper(), rank))

    def __repr__(self):
        return "CartanData(%s)" % self.name

    # form
    def alpha(self, i):
        return self._alpha[i]

    def varpi(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.n))

    def zero(self):
        return (Fraction(0),) * self.n

    def inner(self, lam, mu):
        g = self.gramFW
        s = Fraction(0)
        for i, x in enumerate(lam):
            if x:
                row = g[i]
                for j, y in enumerate(mu):
                    if y:
                        s += x * row[j] * y
        return s

    def inner_alpha(self, lam, j):
        """(lambda, alpha_j) = d_j * lambda_j."""
        return self.d[j] * lam[j]

    def root_coords(self, lam):
        """Coordinates of lambda in the simple-root basis."""
        inv = self.__dict__.get("_ainv")
        if inv is None:
            inv = linalg.inverse([[Fraction(x) for x in row] for row in self.A])
            self._ainv = inv
        return tuple(linalg.mat_vec(inv, list(lam)))

    def from_root_coords(self, c):
        out = self.zero()
        for j, x in enumerate(c):
            if x:
                out = wadd(out, wscale(self._alpha[j], x))
        return out

    def height(self, beta):
        return sum(self.root_coords(beta))

    # Weyl group
    def reflect(self, i, lam):
        c = lam[i]
        if not c:
            return tuple(lam)
        return wsub(lam, wscale(self._alpha[i], c))

    def reflection_matrix(self, i):
        n = self.n
        cols = [self.reflect(i, self.varpi(j)) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    def weyl(self):
        if self._weyl is None:
            self._weyl = WeylGroup(self)
        return self._weyl

    def positive_roots(self):
        if self._pos is None:
            roots = set()
            for w in self.weyl().elements:
                for i in range(self.n):
                    r = w.act(self._alpha[i])
                    c = self.root_coords(r)
                    if all(x >= 0 for x in c):
                        roots.add(tuple(c))
            self._pos = tuple(self.from_root_coords(c) for c in sorted(roots, key=lambda c: (sum(c), c)))
        return self._pos

    def rho(self):
        return (Fraction(1),) * self.n

    def weyl_dimension(self, big_lambda):
        """dim L(Lambda) by the product formula over positive roots."""
        num = den = Fraction(1)
        shifted = wadd(big_lambda, self.rho())
        for a in self.positive_roots():
            num *= self.inner(shifted, a)
            den *= self.inner(self.rho(), a)
        return num / den

    def is_dominant(self, lam):
        return all(x >= 0 and x.denominator == 1 for x in lam)

    def dominant_orbit(self, lam):
        """Return (Lambda, w) with Lambda dominant and w(lam) = Lambda."""
        lam = tuple(lam)
        word = []
        cur = lam
        while True:
            i = next((k for k in range(self.n) if cur[k] < 0), None)
            if i is None:
                break
            cur = self.reflect(i, cur)
            word.append(i)
        w = self.weyl().from_word(tuple(reversed(word)))
        return cur, w

    def weyl_act(self, w, lam):
        return w.act(lam)

    def norm_criterion(self, big_lambda, weights):
        """Check that (mu, mu') = (Lambda, Lambda) forces mu = mu' in W(-Lambda).

        Returns (True, None) or (False, counterexample dict).
        """
        target = self.inner(big_lambda, big_lambda)
        neg = wscale(big_lambda, -1)
        orbit = self.weyl().orbit(neg)
        ws = sorted(set(tuple(w) for w in weights))
        for mu in ws:
            for nu in ws:
                if self.inner(mu, nu) == target:
                    if mu != nu:
                        return False, {"mu": mu, "mu_prime": nu, "reason": "distinct weights attain the norm"}
                    if mu not in orbit and wscale(mu, -1) not in orbit:
                        return False, {"mu": mu, "mu_prime": nu, "reason": "not an extremal weight"}
        return True, None

    def qplus(self, max_height):
        """All beta in Q_+ with 0 < height <= max_height, as root coordinates."""
        out = []
        for h in range(1, max_height + 1):
            for c in _compositions(h, self.n):
                out.append(c)
        return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class WeylElt:
    __slots__ = ("word", "mat", "length")

    def __init__(self, word, mat):
        self.word = tuple(word)
        self.mat = mat
        self.length = len(word)

    def act(self, lam):
        return tuple(sum((row[j] * lam[j] for j in range(len(lam)) if lam[j]), Fraction(0)) for row in self.mat)

    def label(self):
        return ",".join("s%d" % (i + 1) for i in self.word) if self.word else "e"

    def __eq__(self, other):
        return isinstance(other, WeylElt) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def __repr__(self):
        return "WeylElt(%s)" % self.label()


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


class WeylGroup:
    """Breadth-first enumeration over simple reflections; the reduced word of
    each element is the word along which it was first discovered."""

    def __init__(self, cartan, limit=100000):
        self.cartan = cartan
        n = cartan.n
        self.gens = [cartan.reflection_matrix(i) for i in range(n)]
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        seen = {ident: WeylElt((), ident)}
        order = [seen[ident]]
        queue = deque([seen[ident]])
        while queue:
            w = queue.popleft()
            for i in range(n):
                m = _matmul(w.mat, self.gens[i])
                if m not in seen:
                    e = WeylElt(w.word + (i,), m)
                    seen[m] = e
                    order.append(e)
                    queue.append(e)
                    if len(seen) > limit:
                        raise CartanError("Weyl group too large; not of finite type")
        self.elements = tuple(order)
        self._by_mat = seen
        self.identity = order[0]
        self.longest = max(order, key=lambda e: e.length)

    def __len__(self):
        return len(self.elements)

    def from_word(self, word):
        n = self.cartan.n
        m = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        for i in word:
            m = _matmul(m, self.gens[i])
        return self._by_mat[m]

    def from_matrix(self, mat):
        return self._by_mat[mat]

    def inverse(self, w):
        return self.from_word(tuple(reversed(w.word)))

    def mul(self, a, b):
        return self._by_mat[_matmul(a.mat, b.mat)]

    def orbit(self, lam):
        return {w.act(lam) for w in self.elements}

    def inversions(self, w):
        """Number of positive roots sent to negative roots."""
        count = 0
        for r in self.cartan.positive_roots():
            c = self.cartan.root_coords(w.act(r))
            if all(x <= 0 for x in c):
                count += 1
        return count

    def parse(self, text):
        text = text.strip()
        if text in ("", "e", "1"):
            return self.identity
        word = []
        for tok in text.split(","):
            tok = tok.strip().lower()
            if not tok.startswith("s"):
                raise ValueError("bad Weyl letter %r" % tok)
            i = int(tok[1:]) - 1
            if not 0 <= i < self.cartan.n:
                raise ValueError("Weyl letter %r out of range" % tok)
            word.append(i)
        return self.from_word(tuple(word))


class Lattice:
    """Lattice L with Q <= L <= P, given by integer columns in weight coordinates."""

    def __init__(self, cartan, basis, name=None):
        n = cartan.n
        cols = [tuple(Fraction(x) for x in c) for c in basis]
        if len(cols) != n or any(len(c) != n for c in cols):
            raise CartanError("lattice basis must be %d vectors of length %d" % (n, n))
        for k, c in enumerate(cols):
            if any(x.denominator != 1 for x in c):
                raise CartanError("lattice generator %d is not in P" % (k + 1))
        self.cartan = cartan
        self.cols = tuple(cols)
        self.matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
        try:
            self._inv = linalg.inverse(self.matrix)
        except ZeroDivisionError:
            raise CartanError("lattice basis is singular")
        for i in range(n):
            if not self.contains(cartan.alpha(i)):
                raise CartanError("simple root alpha_%d is not in L" % (i + 1))
        self.name = name or "basis"

    @classmethod
    def weight(cls, cartan):
        return cls(cartan, [cartan.varpi(i) for i in range(cartan.n)], "weight")

    @classmethod
    def root(cls, cartan):
        return cls(cartan, [cartan.alpha(i) for i in range(cartan.n)], "root")

    def coords(self, lam):
        return tuple(linalg.mat_vec(self._inv, list(lam)))

    def contains(self, lam):
        return all(x.denominator == 1 for x in self.coords(lam))

    def basis_is_dominant(self):
        return all(self.cartan.is_dominant(c) for c in self.cols)

    def gram(self):
        c = self.cartan
        return [[c.inner(a, b) for b in self.cols] for a in self.cols]

    def box(self, radius):
        """Elements sum k_i omega_i with |k_i| <= radius."""
        n = self.cartan.n
        out = []
        for ks in product(range(-radius, radius + 1), repeat=n):
            lam = self.cartan.zero()
            for k, c in zip(ks, self.cols):
                if k:
                    lam = wadd(lam, wscale(c, k))
            out.append(lam)
        return out

    def dominant_elements(self, max_coord):
        """Dominant weights in L with all weight coordinates <= max_coord."""
        n = self.cartan.n
        out = []
        for ks in product(range(max_coord + 1), repeat=n):
            lam = tuple(Fraction(k) for k in ks)
            if self.contains(lam):
                out.append(lam)
        return sorted(out, key=lambda l: (sum(l), l))
