"""Linearized polynomials sum f_i x^{q^i} as F_q-linear maps of F_{q^n}."""
from __future__ import annotations

import functools
import math
import re
from typing import Iterable, Sequence

import numpy as np

from . import gfp
from .errors import ContextMismatch, DependentBasis, ParseError, StrideNotCoprime
from .field import FFElement, FieldCtx


def _code(ctx: FieldCtx, c) -> int:
    if isinstance(c, FFElement):
        ctx.check(c.ctx)
        return c.value
    v = int(c)
    if not 0 <= v < ctx.order:
        raise ValueError(f"coefficient code {v} out of range")
    return v


class LinearizedPoly:
    """Coefficients (f_0, ..., f_{n-1}) stored as element codes, reduced mod x^{q^n} - x."""

    __slots__ = ("ctx", "codes", "_hash")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        n = ctx.n
        acc = [0] * n
        for i, c in enumerate(coeffs):
            v = _code(ctx, c)
            if v:
                acc[i % n] = ctx._add(acc[i % n], v)
        self.ctx = ctx
        self.codes = tuple(acc)
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "LinearizedPoly":
        return cls(ctx)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "LinearizedPoly":
        return cls(ctx, [1])

    @classmethod
    def monomial(cls, ctx: FieldCtx, i: int, c=1) -> "LinearizedPoly":
        """c * x^{q^i}."""
        coeffs = [0] * ctx.n
        coeffs[i % ctx.n] = _code(ctx, c)
        return cls(ctx, coeffs)

    @classmethod
    def scalar(cls, ctx: FieldCtx, c) -> "LinearizedPoly":
        return cls.monomial(ctx, 0, c)

    # -- basic accessors ---------------------------------------------------

    @property
    def coeffs(self) -> tuple[FFElement, ...]:
        return tuple(FFElement(self.ctx, v) for v in self.codes)

    def __getitem__(self, i: int) -> FFElement:
        return FFElement(self.ctx, self.codes[i % self.ctx.n])

    def __len__(self):
        return self.ctx.n

    def qdegree(self) -> int:
        for i in range(self.ctx.n - 1, -1, -1):
            if self.codes[i]:
                return i
        return -1

    def is_zero(self) -> bool:
        return not any(self.codes)

    def __eq__(self, other):
        if not isinstance(other, LinearizedPoly):
            return NotImplemented
        return self.codes == other.codes and self.ctx == other.ctx

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.codes)
        return self._hash

    def _check(self, other: "LinearizedPoly"):
        if not isinstance(other, LinearizedPoly):
            raise TypeError("expected a LinearizedPoly")
        self.ctx.check(other.ctx)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        self._check(other)
        ctx = self.ctx
        return LinearizedPoly(ctx, [ctx._add(a, b) for a, b in zip(self.codes, other.codes)])

    def __sub__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        self._check(other)
        ctx = self.ctx
        return LinearizedPoly(ctx, [ctx._sub(a, b) for a, b in zip(self.codes, other.codes)])

    def __neg__(self) -> "LinearizedPoly":
        return LinearizedPoly(self.ctx, [self.ctx._neg(a) for a in self.codes])

    def scale(self, c) -> "LinearizedPoly":
        """(c x) o f, i.e. every coefficient multiplied by c."""
        v = _code(self.ctx, c)
        return LinearizedPoly(self.ctx, [self.ctx._mul(v, a) for a in self.codes])

    def __rmul__(self, c):
        if isinstance(c, (FFElement, int, np.integer)):
            if isinstance(c, (int, np.integer)):
                c = self.ctx.from_prime(int(c))
            return self.scale(c)
        return NotImplemented

    def __matmul__(self, other: "LinearizedPoly") -> "LinearizedPoly":
        return compose(self, other)

    def __call__(self, x):
        return evaluate(self, x)

    def coefficient_power(self, i: int) -> "LinearizedPoly":
        """f^rho: every coefficient raised to p^i."""
        return LinearizedPoly(self.ctx, [self.ctx._frob(a, i, "p") for a in self.codes])

    # -- linear algebra views ---------------------------------------------

    def to_vector(self) -> np.ndarray:
        """F_p coordinates; entry j*N + t is digit t of f_j (N = e*n)."""
        return self.ctx.digits(np.array(self.codes, dtype=np.int64)).reshape(-1)

    @classmethod
    def from_vector(cls, ctx: FieldCtx, v) -> "LinearizedPoly":
        v = np.asarray(v, dtype=np.int64).reshape(ctx.n, ctx.degree)
        return cls(ctx, [int(c) for c in ctx.undigits(v)])

    def fp_matrix(self) -> np.ndarray:
        """F_p matrix of u -> f(u); column t is the image of the t-th tower basis vector."""
        T = eval_tensor(self.ctx)
        return np.tensordot(self.to_vector(), T, axes=1) % self.ctx.p

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> "Subspace":
        return kernel(self)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LinearizedPoly({format_poly(self)})"


# --------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def eval_tensor(ctx: FieldCtx) -> np.ndarray:
    """Tensor T of shape (n*N, N, N): T[j*N+t] is the F_p matrix of p^t x^{q^j}.

    For a polynomial with F_p vector v the evaluation matrix is v @ T mod p.
    """
    N, n = ctx.degree, ctx.n
    basis = ctx.p ** np.arange(N, dtype=np.int64)  # tower basis codes
    T = np.zeros((n * N, N, N), dtype=np.int64)
    for j in range(n):
        if ctx.has_tables:
            fb = ctx.vfrob(basis, j)
        else:
            fb = np.array([ctx._frob(int(b), j) for b in basis])
        for t in range(N):
            beta = int(basis[t])
            if ctx.has_tables:
                img = ctx.vmul(np.full(N, beta), fb)
            else:
                img = np.array([ctx._mul(beta, int(u)) for u in fb])
            T[j * N + t] = ctx.digits(img).T
    T.setflags(write=False)
    return T


def qdegree(f: LinearizedPoly) -> int:
    return f.qdegree()


def evaluate(f: LinearizedPoly, x) -> FFElement:
    ctx = f.ctx
    v = _code(ctx, x)
    acc = 0
    for i, c in enumerate(f.codes):
        if c:
            acc = ctx._add(acc, ctx._mul(c, ctx._frob(v, i)))
    return FFElement(ctx, acc)


def evaluate_many(f: LinearizedPoly, xs) -> np.ndarray:
    """Vectorised evaluation at an array of element codes."""
    ctx = f.ctx
    xs = np.asarray(xs, dtype=np.int64)
    out = np.zeros_like(xs)
    for i, c in enumerate(f.codes):
        if c:
            out = ctx.vadd(out, ctx.vmul(c, ctx.vfrob(xs, i)))
    return out


def compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    """f o g, with h_m = sum_i f_i g_{m-i}^{q^i}."""
    f._check(g)
    ctx, n = f.ctx, f.ctx.n
    h = [0] * n
    for i, fi in enumerate(f.codes):
        if not fi:
            continue
        for j, gj in enumerate(g.codes):
            if gj:
                m = (i + j) % n
                h[m] = ctx._add(h[m], ctx._mul(fi, ctx._frob(gj, i)))
    return LinearizedPoly(ctx, h)


def adjoint(f: LinearizedPoly) -> LinearizedPoly:
    """Coefficient i of the result is f_{n-i}^{q^i}."""
    ctx, n = f.ctx, f.ctx.n
    return LinearizedPoly(ctx, [ctx._frob(f.codes[(n - i) % n], i) for i in range(n)])


def rank(f: LinearizedPoly) -> int:
    return gfp.rank(f.fp_matrix(), f.ctx.p) // f.ctx.e


def kernel(f: LinearizedPoly) -> "Subspace":
    ctx = f.ctx
    null = gfp.nullspace(f.fp_matrix(), ctx.p)
    elems = [int(v) for v in ctx.undigits(null)] if len(null) else []
    return Subspace.from_fp_span(ctx, elems)


def is_invertible(f: LinearizedPoly) -> bool:
    return rank(f) == f.ctx.n


def inverse(f: LinearizedPoly) -> LinearizedPoly:
    """Compositional inverse of an invertible polynomial."""
    ctx = f.ctx
    Minv = gfp.inverse(f.fp_matrix(), ctx.p)
    return from_fp_matrix(ctx, Minv)


def from_fp_matrix(ctx: FieldCtx, M) -> LinearizedPoly:
    """The unique polynomial whose F_p evaluation matrix is M (M must be F_q-linear)."""
    T = eval_tensor(ctx)
    L = T.shape[0]
    A = T.reshape(L, -1).T  # (N*N, L)
    target = np.asarray(M, dtype=np.int64).reshape(-1) % ctx.p
    sol = gfp.solve_row(A.T, target, ctx.p)
    if sol is None:
        raise ValueError("matrix is not F_q-linear")
    return LinearizedPoly.from_vector(ctx, sol)


def from_stride(ctx: FieldCtx, coeffs: Sequence, s: int = 1) -> LinearizedPoly:
    """Place coefficient i at position s*i mod n."""
    n = ctx.n
    if math.gcd(s, n) != 1:
        raise StrideNotCoprime(f"gcd({s}, {n}) != 1")
    out = [0] * n
    for i, c in enumerate(coeffs):
        v = _code(ctx, c)
        pos = (s * i) % n
        out[pos] = ctx._add(out[pos], v)
    return LinearizedPoly(ctx, out)


# --------------------------------------------------------------------------
# subspaces, Moore matrices


class Subspace:
    """An F_q-subspace of F_{q^n} given by an F_q-independent basis."""

    __slots__ = ("ctx", "basis")

    def __init__(self, ctx: FieldCtx, basis: Iterable):
        self.ctx = ctx
        self.basis = tuple(FFElement(ctx, _code(ctx, b)) for b in basis)
        if _fq_rank(ctx, [b.value for b in self.basis]) != len(self.basis):
            raise DependentBasis("subspace basis is not F_q-independent")

    @classmethod
    def from_fp_span(cls, ctx: FieldCtx, elems: Sequence[int]) -> "Subspace":
        """F_q-basis of the span of elements (greedy, in the given order)."""
        chosen: list[int] = []
        for v in elems:
            v = _code(ctx, v)
            if _fq_rank(ctx, chosen + [v]) > len(chosen):
                chosen.append(v)
        return cls(ctx, chosen)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def elements(self) -> list[FFElement]:
        """All q^dim elements (F_q-combinations, first basis coefficient slowest)."""
        ctx = self.ctx
        out = [0]
        for b in self.basis:
            out = [ctx._add(x, ctx._mul(c, b.value)) for x in out for c in range(ctx.q)]
        return [FFElement(ctx, v) for v in out]

    def contains(self, x) -> bool:
        v = _code(self.ctx, x)
        codes = [b.value for b in self.basis]
        return _fq_rank(self.ctx, codes + [v]) == len(codes)

    def __repr__(self):
        return f"Subspace(dim={self.dim})"


def _fq_rank(ctx: FieldCtx, codes: Sequence[int]) -> int:
    if not codes:
        return 0
    rows = []
    for b in codes:
        for t in range(ctx.e):  # F_q basis x^t has codes p^t
            rows.append(ctx._mul(ctx.p**t, b))
    return gfp.rank(ctx.digits(np.array(rows, dtype=np.int64)), ctx.p) // ctx.e


def moore_matrix(elems: Sequence, cols: int) -> list[list[FFElement]]:
    """Rows (u, u^q, ..., u^{q^{cols-1}}) for each u in elems."""
    out = []
    for u in elems:
        row = [u.frobenius(i) for i in range(cols)]
        out.append(row)
    return out


def det(ctx: FieldCtx, M: Sequence[Sequence]) -> FFElement:
    """Determinant over F_{q^n} by elimination."""
    A = [[_code(ctx, c) for c in row] for row in M]
    k = len(A)
    if k == 0:
        return ctx.one
    d = 1
    for c in range(k):
        piv = next((r for r in range(c, k) if A[r][c]), None)
        if piv is None:
            return ctx.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = ctx._neg(d)
        d = ctx._mul(d, A[c][c])
        inv = ctx._inv(A[c][c])
        for r in range(c + 1, k):
            if A[r][c]:
                fac = ctx._mul(A[r][c], inv)
                A[r] = [ctx._sub(x, ctx._mul(fac, y)) for x, y in zip(A[r], A[c])]
    return FFElement(ctx, d)


def minimal_polynomial(U: Subspace) -> LinearizedPoly:
    """Monic q-degree dim(U) polynomial vanishing on U, from the Moore determinant.

    The determinant of the matrix with top row (x, x^q, ..., x^{q^k}) and rows
    (u, ..., u^{q^k}) is expanded along the top row; cofactor i is
    f_i = (-1)^i det(minor without column i).
    """
    ctx = U.ctx
    k = U.dim
    if k >= ctx.n:
        raise ValueError("minimal polynomial needs dim U < n")
    rows = moore_matrix(U.basis, k + 1)
    cof = []
    for i in range(k + 1):
        minor = [[r[c] for c in range(k + 1) if c != i] for r in rows]
        d = det(ctx, minor)
        cof.append(d if i % 2 == 0 else -d)
    lead = cof[k]
    if not lead:
        raise DependentBasis("Moore determinant vanishes")
    return LinearizedPoly(ctx, [c / lead for c in cof])


# --------------------------------------------------------------------------
# text form: "c*X + c*X^q + c*X^q2"

_TERM = re.compile(r"^(?:(?P<coef>.+?)\*)?[Xx](?:\^(?P<exp>q\d*|\d+))?$")


def format_poly(f: LinearizedPoly) -> str:
    ctx = f.ctx
    terms = []
    for i, c in enumerate(f.codes):
        if not c:
            continue
        mono = "X" if i == 0 else ("X^q" if i == 1 else f"X^q{i}")
        terms.append(f"{ctx.format(c)}*{mono}")
    return " + ".join(terms) if terms else "0"


def _split_terms(s: str) -> list[tuple[int, str]]:
    out, depth, cur, sign = [], 0, "", 1
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*")):
            out.append((sign, cur.strip()))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
        elif depth == 0 and ch == "+" and not cur.strip():
            pass
        else:
            cur += ch
        i += 1
    if cur.strip():
        out.append((sign, cur.strip()))
    return out


def parse_poly(ctx: FieldCtx, text: str) -> LinearizedPoly:
    """Parse the text form.  Monomials: X, X^q, X^qK, or X^N with N a power of q."""
    s = text.strip()
    if s in ("", "0"):
        return LinearizedPoly.zero(ctx)
    acc = [0] * ctx.n
    col = 1
    for sign, term in _split_terms(s):
        m = _TERM.match(term.replace(" ", ""))
        if not m:
            raise ParseError(f"bad term {term!r}", 1, col)
        coef = ctx.parse(m.group("coef")) if m.group("coef") else ctx.one
        exp = m.group("exp")
        if exp is None:
            i = 0
        elif exp.startswith("q"):
            i = int(exp[1:]) if len(exp) > 1 else 1
        else:
            N = int(exp)
            i = 0
            while ctx.q**i < N:
                i += 1
            if ctx.q**i != N:
                raise ParseError(f"exponent {N} is not a power of q={ctx.q}", 1, col)
        if sign < 0:
            coef = -coef
        acc[i % ctx.n] = ctx._add(acc[i % ctx.n], coef.value)
        col += len(term) + 3
    return LinearizedPoly(ctx, acc)


def poly_to_json(f: LinearizedPoly) -> list[list[int]]:
    return [list(FFElement(f.ctx, c).coords) for c in f.codes]


def poly_from_json(ctx: FieldCtx, data) -> LinearizedPoly:
    if len(data) != ctx.n:
        raise ValueError(f"expected {ctx.n} coefficients")
    return LinearizedPoly(ctx, [ctx.element(c).value for c in data])


def same_ctx(*polys: LinearizedPoly) -> FieldCtx:
    ctx = polys[0].ctx
    for f in polys[1:]:
        if f.ctx != ctx:
            raise ContextMismatch("polynomials from different fields")
    return ctx
