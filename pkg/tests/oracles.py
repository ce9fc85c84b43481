"""Slow reference implementations used to derive and re-check frozen test values.

Nothing here calls into rankforge arithmetic. Elements use the same integer
encoding as the package (base-p digit t + e*j is the coefficient of t^t y^j)
so results can be compared value by value.
"""
from __future__ import annotations

import itertools


class NaiveField:
    """F_p[t, y] / (qmod(t), ext(y)) with schoolbook arithmetic."""

    def __init__(self, p, e, n, qmod, ext):
        self.p, self.e, self.n = p, e, n
        self.q = p**e
        self.order = self.q**n
        self.qmod = [c % p for c in qmod]  # low degree first, monic degree e
        self.ext = [self._fq_vec(c) for c in ext]  # F_q coefficients as digit lists

    @classmethod
    def like(cls, ctx):
        return cls(ctx.p, ctx.e, ctx.n, list(ctx.q_modulus), list(ctx.ext_modulus))

    # F_q as digit lists
    def _fq_vec(self, c):
        return [(c // self.p**i) % self.p for i in range(self.e)]

    def _fq_add(self, a, b):
        return [(x + y) % self.p for x, y in zip(a, b)]

    def _fq_mul(self, a, b):
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(len(prod) - 1, e - 1, -1):
            c = prod[d]
            if c:
                for i in range(e + 1):
                    prod[d - e + i] = (prod[d - e + i] - c * self.qmod[i]) % p
        return prod[:e]

    # F_{q^n}
    def split(self, a):
        q = self.q
        return [self._fq_vec((a // q**j) % q) for j in range(self.n)]

    def join(self, cs):
        out = 0
        for j, c in enumerate(cs):
            out += sum(d * self.p**i for i, d in enumerate(c)) * self.q**j
        return out

    def add(self, a, b):
        return self.join([self._fq_add(x, y) for x, y in zip(self.split(a), self.split(b))])

    def neg(self, a):
        return self.join([[(-d) % self.p for d in c] for c in self.split(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        n, e = self.n, self.e
        A, B = self.split(a), self.split(b)
        prod = [[0] * e for _ in range(2 * n - 1)]
        for i, x in enumerate(A):
            for j, y in enumerate(B):
                prod[i + j] = self._fq_add(prod[i + j], self._fq_mul(x, y))
        for d in range(len(prod) - 1, n - 1, -1):
            c = prod[d]
            if any(c):
                for i in range(n + 1):
                    t = self._fq_mul(c, self.ext[i])
                    prod[d - n + i] = [(u - v) % self.p for u, v in zip(prod[d - n + i], t)]
        return self.join(prod[:n])

    def pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return self.pow(a, self.order - 2)

    def norm(self, a):
        return self.pow(a, (self.order - 1) // (self.q - 1)) if a else 0

    def trace_abs(self, a):
        s, x = 0, a
        for _ in range(self.e * self.n):
            s = self.add(s, x)
            x = self.pow(x, self.p)
        return s

    def mult_order(self, a):
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    # linearized polynomials
    def evaluate(self, coeffs, x):
        s = 0
        for i, c in enumerate(coeffs):
            if c:
                s = self.add(s, self.mul(c, self.pow(x, self.q**i)))
        return s

    def fp_matrix(self, coeffs):
        """Columns: base-p digits of f applied to the F_p basis p^k."""
        N = self.e * self.n
        cols = []
        for k in range(N):
            v = self.evaluate(coeffs, self.p**k)
            cols.append([(v // self.p**r) % self.p for r in range(N)])
        return [[cols[c][r] for c in range(N)] for r in range(N)]

    def rank(self, coeffs):
        return fp_rank(self.fp_matrix(coeffs), self.p) // self.e

    def kernel_size(self, coeffs):
        return sum(1 for x in range(self.order) if self.evaluate(coeffs, x) == 0)


def fp_rank(M, p):
    """Gaussian elimination over F_p on a list of rows."""
    M = [list(r) for r in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] % p), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] % p:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        r += 1
    return r


def poly_mod_factor(f, p, deg):
    """A monic factor of degree deg of the F_p polynomial f (low first), or None. Exhaustive."""
    for tail in itertools.product(range(p), repeat=deg):
        g = list(tail) + [1]
        r = list(f)
        for d in range(len(r) - 1, deg - 1, -1):
            c = r[d] % p
            if c:
                for i in range(deg + 1):
                    r[d - deg + i] = (r[d - deg + i] - c * g[i]) % p
        if not any(x % p for x in r[:deg]):
            return g
    return None


def span_elements(rows, p):
    """All F_p-combinations of integer-tuple rows."""
    L = len(rows[0]) if rows else 0
    out = []
    for coefs in itertools.product(range(p), repeat=len(rows)):
        out.append(tuple(sum(c * r[i] for c, r in zip(coefs, rows)) % p for i in range(L)))
    return out if rows else [()]


def code_words(F: NaiveField, gens, scalars):
    """All codewords as coefficient tuples: span over the given scalar set (a subfield)."""
    words = {tuple([0] * F.n)}
    for g in gens:
        new = set()
        for w in words:
            for s in scalars:
                new.add(tuple(F.add(a, F.mul(s, b)) for a, b in zip(w, g)))
        words = new
    return words


def rank_distribution(F: NaiveField, words):
    out = {}
    for w in words:
        r = F.rank(list(w))
        out[r] = out.get(r, 0) + 1
    return out


def fp_basis_from_fq_generators(F: NaiveField, gens):
    """F_p-basis candidates (x^t * g) for an F_q-span of generators."""
    return [[F.mul(F.p**t, c) for c in g] for g in gens for t in range(F.e)]


def distribution_from_fp_basis(F: NaiveField, basis):
    """Rank distribution of the F_p-span of the given (assumed independent) polynomials."""
    mats = [F.fp_matrix(list(b)) for b in basis]
    N = F.e * F.n
    out = {}
    for coefs in itertools.product(range(F.p), repeat=len(mats)):
        M = [[sum(c * m[r][s] for c, m in zip(coefs, mats)) % F.p for s in range(N)] for r in range(N)]
        rk = fp_rank(M, F.p) // F.e
        out[rk] = out.get(rk, 0) + 1
    return out
