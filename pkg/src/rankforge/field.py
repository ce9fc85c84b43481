"""Exact arithmetic in the tower F_p < F_q = F_{p^e} < F_{q^n}.

Elements are encoded as integers.  The F_p-coordinates of an element
(little-endian, coordinate ``t = i + e*j`` for ``x^i y^j`` where ``x``
generates F_q over F_p and ``y`` generates F_{q^n} over F_q) are the base-p
digits of its integer code.  Consequently the codes ``0 .. q-1`` are exactly
the elements of F_q, and ``0 .. p-1`` the prime field.

When ``q^n`` is at most the table cap, exponent/log/Zech tables are built
eagerly and every operation is a table lookup; numpy-vectorised variants of
the basic operations (``vadd``, ``vmul`` ...) work on integer arrays of codes.
"""
from __future__ import annotations

import functools
import json
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    ContextMismatch,
    DivisionByZero,
    LogOfZero,
    NotPrime,
    NotPrimitive,
    ParseError,
    ReducibleModulus,
    TableUnavailable,
)

DEFAULT_TABLE_CAP = 2**22


# --------------------------------------------------------------------------
# construction-time polynomial arithmetic (lists of coefficients, low first)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


class _PrimeArith:
    def __init__(self, p):
        self.p = p
        self.size = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)


class _ExtArith:
    """F_p[x]/(m) with elements encoded as base-p integers."""

    def __init__(self, p, modulus):
        self.p = p
        self.m = list(modulus)
        self.e = len(modulus) - 1
        self.size = p**self.e
        self._base = _PrimeArith(p)

    def digits(self, a):
        return [(a // self.p**t) % self.p for t in range(self.e)]

    def undigits(self, ds):
        return sum(int(d) * self.p**t for t, d in enumerate(ds))

    def add(self, a, b):
        return self.undigits([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def sub(self, a, b):
        return self.undigits([(x - y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a, b):
        prod = _pmul(self.digits(a), self.digits(b), self._base)
        return self.undigits(_pad(_pmod(prod, self.m, self._base), self.e))

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.pow(a, self.size - 2)

    def pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r


def _fq_arith(p, modulus):
    return _PrimeArith(p) if len(modulus) == 2 else _ExtArith(p, modulus)


def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pad(f, length):
    f = list(f)
    return f + [0] * (length - len(f))


def _padd(f, g, K):
    n = max(len(f), len(g))
    f, g = _pad(f, n), _pad(g, n)
    return _trim([K.add(a, b) for a, b in zip(f, g)])


def _psub(f, g, K):
    n = max(len(f), len(g))
    f, g = _pad(f, n), _pad(g, n)
    return _trim([K.sub(a, b) for a, b in zip(f, g)])


def _pmul(f, g, K):
    f, g = _trim(f), _trim(g)
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = K.add(out[i + j], K.mul(a, b))
    return _trim(out)


def _pdivmod(f, g, K):
    f, g = _trim(f), _trim(g)
    lead_inv = K.inv(g[-1])
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = K.mul(r[-1], lead_inv)
        q[shift] = c
        for j, b in enumerate(g):
            r[shift + j] = K.sub(r[shift + j], K.mul(c, b))
        r = _trim(r)
    return _trim(q), r


def _pmod(f, g, K):
    return _pdivmod(f, g, K)[1]


def _pgcd(f, g, K):
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, _pmod(f, g, K)
    return f


def _ppowmod(f, k, m, K):
    result = [1]
    f = _pmod(f, m, K)
    while k:
        if k & 1:
            result = _pmod(_pmul(result, f, K), m, K)
        f = _pmod(_pmul(f, f, K), m, K)
        k >>= 1
    return result


def _is_irreducible(f, K) -> bool:
    """Ben-Or test: no factor of degree <= deg/2 divides f."""
    f = _trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d > 1 and f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(1, d // 2 + 1):
        h = _ppowmod(h, K.size, f, K)
        if len(_pgcd(f, _psub(h, x, K), K)) > 1:
            return False
    return True


def _lex_monic(degree, size) -> Iterator[list[int]]:
    """Monic polynomials of a degree, lexicographic on (c0, c1, ...)."""
    if degree == 0:
        yield [1]
        return
    # c0 varies slowest
    for low in _lex_tuples(degree, size):
        yield list(low) + [1]


def _lex_tuples(length, size):
    if length == 0:
        yield ()
        return
    for first in range(size):
        for rest in _lex_tuples(length - 1, size):
            yield (first,) + rest


class _TowerArith:
    """Slow polynomial-level arithmetic in F_q[y]/(ext); used without tables."""

    def __init__(self, Fq: _ExtArith, ext):
        self.Fq = Fq
        self.ext = list(ext)
        self.n = len(ext) - 1
        self.q = Fq.size

    def split(self, a):
        return [(a // self.q**j) % self.q for j in range(self.n)]

    def join(self, cs):
        return sum(int(c) * self.q**j for j, c in enumerate(cs))

    def mul(self, a, b):
        prod = _pmul(self.split(a), self.split(b), self.Fq)
        return self.join(_pad(_pmod(prod, self.ext, self.Fq), self.n))

    def pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r


# --------------------------------------------------------------------------


class FieldCtx:
    """The tower F_p < F_q < F_{q^n} with a fixed primitive element ``alpha``.

    Build instances through :func:`make_field_ctx`; identical arguments give
    the identical (cached) object.
    """

    def __init__(self, p, e, n, q_modulus, ext_modulus, alpha, table_cap=DEFAULT_TABLE_CAP):
        self.p = p
        self.e = e
        self.n = n
        self.q = p**e
        self.order = self.q**n
        self.degree = e * n  # dimension over F_p
        self.q_modulus = tuple(q_modulus)
        self.ext_modulus = tuple(ext_modulus)
        self.alpha_code = alpha
        self.table_cap = table_cap
        self._Fq = _fq_arith(p, q_modulus)
        self._tower = _TowerArith(self._Fq, ext_modulus)
        self._pows = p ** np.arange(self.degree, dtype=np.int64)
        self.has_tables = self.order <= table_cap
        if self.has_tables:
            self._build_tables()

    # -- tables ------------------------------------------------------------

    def _mult_matrix_fp(self, a: int) -> np.ndarray:
        """F_p matrix of u -> a*u on tower coordinates (columns = images)."""
        N = self.degree
        M = np.zeros((N, N), dtype=np.int64)
        for t in range(N):
            M[:, t] = self._digits_scalar(self._tower.mul(a, self.p**t))
        return M

    def _digits_scalar(self, a: int) -> list[int]:
        return [(a // self.p**t) % self.p for t in range(self.degree)]

    def _build_tables(self):
        Q1 = self.order - 1
        p = self.p
        exp = np.zeros(max(Q1, 1), dtype=np.int64)
        exp[0] = 1
        M = self._mult_matrix_fp(self.alpha_code)
        length = 1
        chunk = 1 << 16
        while length < Q1:
            take = min(length, Q1 - length)
            for s in range(0, take, chunk):
                t = min(s + chunk, take)
                d = self.digits(exp[s:t])
                exp[length + s:length + t] = (d @ M.T % p) @ self._pows
            M = M @ M % p
            length += take
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:Q1]] = np.arange(Q1, dtype=np.int64)
        if Q1 > 0 and np.unique(exp[:Q1]).size != Q1:
            raise NotPrimitive("alpha does not have order q^n - 1")
        one_plus = np.where(exp % p == p - 1, exp - (p - 1), exp + 1)
        zech = np.where(one_plus == 0, -1, log[one_plus])
        for arr in (exp, log, zech):
            arr.setflags(write=False)
        self._exp, self._log, self._zech = exp, log, zech

    def _need_tables(self):
        if not self.has_tables:
            raise TableUnavailable(f"field of order {self.order} exceeds table cap {self.table_cap}")

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.p, self.e, self.n, self.q_modulus, self.ext_modulus, self.alpha_code)

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldCtx) and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, n={self.n})"

    def check(self, other: "FieldCtx"):
        if other is not self and other != self:
            raise ContextMismatch(f"{self!r} vs {other!r}")

    # -- element constructors ---------------------------------------------

    def __call__(self, value) -> "FFElement":
        return self.element(value)

    def element(self, value) -> "FFElement":
        """Element from an integer code, a coordinate sequence or an FFElement."""
        if isinstance(value, FFElement):
            self.check(value.ctx)
            return value
        if isinstance(value, (int, np.integer)):
            v = int(value)
            if not 0 <= v < self.order:
                raise ValueError(f"element code {v} out of range")
            return FFElement(self, v)
        coords = list(value)
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FFElement(self, self.undigits_scalar(coords))

    def from_prime(self, k: int) -> "FFElement":
        return FFElement(self, k % self.p)

    def undigits_scalar(self, coords) -> int:
        return sum((int(c) % self.p) * self.p**t for t, c in enumerate(coords))

    @property
    def zero(self) -> "FFElement":
        return FFElement(self, 0)

    @property
    def one(self) -> "FFElement":
        return FFElement(self, 1)

    @property
    def alpha(self) -> "FFElement":
        return FFElement(self, self.alpha_code)

    def alpha_pow(self, k: int) -> "FFElement":
        return FFElement(self, self._pow(self.alpha_code, k))

    def elements(self) -> Iterator["FFElement"]:
        for v in range(self.order):
            yield FFElement(self, v)

    def nonzero_elements(self) -> Iterator["FFElement"]:
        for v in range(1, self.order):
            yield FFElement(self, v)

    def fq_elements(self) -> Iterator["FFElement"]:
        """Elements of the middle field F_q (codes 0 .. q-1)."""
        for v in range(self.q):
            yield FFElement(self, v)

    def random_element(self, rng: np.random.Generator, nonzero=False) -> "FFElement":
        lo = 1 if nonzero else 0
        return FFElement(self, int(rng.integers(lo, self.order)))

    def subfield_generator(self, d: int) -> "FFElement":
        """A generator of the multiplicative group of F_{p^d} (d | e*n)."""
        if self.degree % d:
            raise ValueError(f"F_p^{d} is not a subfield")
        return FFElement(self, self._pow(self.alpha_code, (self.order - 1) // (self.p**d - 1)))

    # -- scalar arithmetic on codes ---------------------------------------

    def _add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        if self.has_tables:
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.order - 1)]
            if z < 0:
                return 0
            return int(self._exp[(la + z) % (self.order - 1)])
        return self.undigits_scalar([x + y for x, y in zip(self._digits_scalar(a), self._digits_scalar(b))])

    def _neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self.undigits_scalar([-x for x in self._digits_scalar(a)])

    def _sub(self, a: int, b: int) -> int:
        return self._add(a, self._neg(b))

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.order - 1)])
        return self._tower.mul(a, b)

    def _inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.has_tables:
            return int(self._exp[(-self._log[a]) % (self.order - 1)])
        return self._tower.pow(a, self.order - 2)

    def _pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise DivisionByZero("zero to a negative power")
            return 0
        if self.has_tables:
            return int(self._exp[(int(self._log[a]) * k) % (self.order - 1)])
        k %= self.order - 1
        return self._tower.pow(a, k)

    def _frob(self, a: int, i: int, level: str = "q") -> int:
        if level == "q":
            return self._pow(a, self.q ** (i % self.n))
        if level == "p":
            return self._pow(a, self.p ** (i % self.degree))
        raise ValueError("level must be 'q' or 'p'")

    # -- vectorised arithmetic on code arrays ------------------------------

    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pows) % self.p

    def undigits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pows

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return self.undigits(self.digits(a) + self.digits(b))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self.undigits(-self.digits(a))

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vsum(self, a, axis=-1) -> np.ndarray:
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        ax = axis % a.ndim  # digits() appends the coordinate axis
        return self.undigits(self.digits(a).sum(axis=ax) % self.p)

    def vmul(self, a, b) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, k) -> np.ndarray:
        """Elementwise a**k for integer (array) exponents k >= 0."""
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        k = np.asarray(k, dtype=np.int64)
        r = self._exp[(self._log[a] * (k % (self.order - 1))) % (self.order - 1)]
        r = np.where(a == 0, 0, r)
        return np.where(k == 0, 1, r)

    def vinv(self, a) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def vfrob(self, a, i, level="q") -> np.ndarray:
        base = self.q if level == "q" else self.p
        mod = self.n if level == "q" else self.degree
        k = pow(base, int(i) % mod, self.order - 1) if self.order > 2 else 1
        return self.vpow(a, np.full(np.shape(a), k) if np.ndim(a) else k)

    def vlog(self, a) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise LogOfZero("discrete log of zero")
        return self._log[a]

    def vexp(self, k) -> np.ndarray:
        self._need_tables()
        return self._exp[np.asarray(k, dtype=np.int64) % (self.order - 1)]

    def vnorm(self, a) -> np.ndarray:
        return self.vpow(a, (self.order - 1) // (self.q - 1))

    def vtrace_abs(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        terms = np.stack([self.vpow(a, self.p**i) for i in range(self.degree)], axis=-1)
        return self.vsum(terms, axis=-1)

    def mult_matrix(self, a: int) -> np.ndarray:
        """F_p matrix (degree x degree) of u -> a*u in tower coordinates."""
        if self.has_tables:
            basis = self._pows
            return self.digits(self.vmul(a, basis)).T.copy()
        return self._mult_matrix_fp(a)

    def trace_gram(self) -> np.ndarray:
        """Gram matrix of (u, v) -> Tr_{F_{q^n}/F_p}(uv) on the tower basis."""
        return _trace_gram(self)

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        e = self.e
        return {
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "q_modulus": list(self.q_modulus),
            "ext_modulus": [[(c // self.p**t) % self.p for t in range(e)] for c in self.ext_modulus],
            "alpha": self._digits_scalar(self.alpha_code),
        }

    def format(self, a: "FFElement | int") -> str:
        v = a.value if isinstance(a, FFElement) else int(a)
        if v == 0:
            return "0"
        if self.has_tables:
            k = int(self._log[v])
            return "1" if k == 0 else ("a" if k == 1 else f"a^{k}")
        return "[" + ",".join(str(c) for c in self._digits_scalar(v)) + "]"

    def parse(self, text: str) -> "FFElement":
        """Parse ``0``, ``1``, ``a``, ``a^k``, ``-a^k``, an integer in F_p or ``[c0,...]``."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ParseError("empty element")
        neg = False
        if s.startswith("-"):
            neg, s = True, s[1:]
        try:
            if s.startswith("["):
                if not s.endswith("]"):
                    raise ParseError(f"unterminated coordinate list in {text!r}", 1, len(text))
                body = s[1:-1]
                coords = [int(c) for c in body.split(",")] if body else []
                x = self.element(coords)
            elif s in ("a", "alpha"):
                x = self.alpha
            elif s.startswith("a^") or s.startswith("alpha^"):
                x = self.alpha_pow(int(s.split("^", 1)[1]))
            else:
                x = self.from_prime(int(s))
        except ParseError:
            raise
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad field element {text!r}: {exc}", 1, 1) from None
        return -x if neg else x


@functools.lru_cache(maxsize=None)
def _trace_gram(ctx: FieldCtx) -> np.ndarray:
    N = ctx.degree
    G = np.zeros((N, N), dtype=np.int64)
    for a in range(N):
        for b in range(N):
            G[a, b] = trace_abs(FFElement(ctx, ctx._mul(ctx.p**a, ctx.p**b))).value
    G.setflags(write=False)
    return G


class FFElement:
    """An element of F_{q^n}; immutable, hashable, supports + - * / **."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = int(value)

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(self.ctx._digits_scalar(self.value))

    def _coerce(self, other) -> int:
        if isinstance(other, FFElement):
            self.ctx.check(other.ctx)
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElement(self.ctx, self.ctx._add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElement(self.ctx, self.ctx._sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElement(self.ctx, self.ctx._sub(o, self.value))

    def __neg__(self):
        return FFElement(self.ctx, self.ctx._neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElement(self.ctx, self.ctx._mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElement(self.ctx, self.ctx._mul(self.value, self.ctx._inv(o)))

    def __pow__(self, k: int):
        return FFElement(self.ctx, self.ctx._pow(self.value, int(k)))

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.value == other.value and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.ctx.p and self.value < self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx.p, self.ctx.degree))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def inverse(self) -> "FFElement":
        return FFElement(self.ctx, self.ctx._inv(self.value))

    def frobenius(self, i: int = 1, level: str = "q") -> "FFElement":
        return FFElement(self.ctx, self.ctx._frob(self.value, i, level))

    def in_fq(self) -> bool:
        return self.value < self.ctx.q

    def __repr__(self):
        return f"FFElement({self.ctx.format(self)})"

    def __str__(self):
        return self.ctx.format(self)


# --------------------------------------------------------------------------
# public operations


def add(x: FFElement, y: FFElement) -> FFElement:
    return x + y


def sub(x: FFElement, y: FFElement) -> FFElement:
    return x - y


def mul(x: FFElement, y: FFElement) -> FFElement:
    return x * y


def inv(x: FFElement) -> FFElement:
    return x.inverse()


def pow_(x: FFElement, k: int) -> FFElement:
    return x**k


def frobenius(x: FFElement, i: int, level: str = "q") -> FFElement:
    """``x^(q^i)`` (level "q") or ``x^(p^i)`` (level "p")."""
    return x.frobenius(i, level)


def norm(x: FFElement) -> FFElement:
    """Relative norm N(x) = x^((q^n - 1)/(q - 1)), an element of F_q."""
    ctx = x.ctx
    r = FFElement(ctx, ctx._pow(x.value, (ctx.order - 1) // (ctx.q - 1)))
    assert r.value < ctx.q
    return r


def trace_rel(x: FFElement) -> FFElement:
    ctx = x.ctx
    acc = 0
    for i in range(ctx.n):
        acc = ctx._add(acc, ctx._frob(x.value, i, "q"))
    assert acc < ctx.q
    return FFElement(ctx, acc)


def trace_abs(x: FFElement) -> FFElement:
    ctx = x.ctx
    acc = 0
    for i in range(ctx.degree):
        acc = ctx._add(acc, ctx._frob(x.value, i, "p"))
    assert acc < ctx.p
    return FFElement(ctx, acc)


def dlog(x: FFElement) -> int:
    ctx = x.ctx
    if x.value == 0:
        raise LogOfZero("discrete log of zero")
    ctx._need_tables()
    return int(ctx._log[x.value])


# --------------------------------------------------------------------------
# context construction


def _normalise_ext(ext, p, e, q):
    out = []
    for c in ext:
        if isinstance(c, (list, tuple)):
            if len(c) > e:
                raise ValueError(f"F_q coordinate array longer than e={e}")
            out.append(sum((int(d) % p) * p**t for t, d in enumerate(c)))
        elif e == 1:
            out.append(int(c) % p)
        else:
            if not 0 <= int(c) < q:
                raise ValueError(f"F_q element code {c} out of range")
            out.append(int(c))
    return tuple(out)


def make_field_ctx(
    p: int,
    e: int = 1,
    n: int = 1,
    q_modulus: Sequence[int] | None = None,
    ext_modulus: Sequence | None = None,
    alpha_hint: int | Sequence[int] | None = None,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> FieldCtx:
    """Validated field tower context.

    Moduli are coefficient lists, low degree first.  ``ext_modulus`` entries
    are F_q element codes (for e = 1 plain residues, negatives allowed) or F_q
    coordinate arrays.  Omitted moduli default to the lexicographically
    smallest irreducible monic polynomial; an omitted ``alpha_hint`` defaults
    to the primitive element with the smallest integer code.
    """
    qm = None if q_modulus is None else tuple(int(c) % p for c in q_modulus)
    em = None
    if ext_modulus is not None:
        em = tuple(tuple(c) if isinstance(c, (list, tuple)) else int(c) for c in ext_modulus)
    if alpha_hint is not None and not isinstance(alpha_hint, (int, np.integer)):
        alpha_hint = tuple(int(c) for c in alpha_hint)
    elif alpha_hint is not None:
        alpha_hint = int(alpha_hint)
    return _make_field_ctx(int(p), int(e), int(n), qm, em, alpha_hint, int(table_cap))


@functools.lru_cache(maxsize=None)
def _make_field_ctx(p, e, n, q_modulus, ext_modulus, alpha_hint, table_cap):
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or n < 1:
        raise ValueError("e and n must be >= 1")
    Fp = _PrimeArith(p)
    if q_modulus is None:
        q_modulus = next(f for f in _lex_monic(e, p) if _is_irreducible(f, Fp))
    else:
        if len(q_modulus) != e + 1 or q_modulus[-1] != 1:
            raise ValueError(f"q_modulus must be monic of degree {e}")
        if not _is_irreducible(q_modulus, Fp):
            raise ReducibleModulus(f"q_modulus {list(q_modulus)} is reducible over F_{p}")
    Fq = _fq_arith(p, q_modulus)
    q = p**e
    if ext_modulus is None:
        ext_modulus = next(f for f in _lex_monic(n, q) if _is_irreducible(f, Fq))
    else:
        ext_modulus = _normalise_ext(ext_modulus, p, e, q)
        if len(ext_modulus) != n + 1 or ext_modulus[-1] != 1:
            raise ValueError(f"ext_modulus must be monic of degree {n}")
        if not _is_irreducible(ext_modulus, Fq):
            raise ReducibleModulus(f"ext_modulus {list(ext_modulus)} is reducible over F_{q}")
    tower = _TowerArith(Fq, ext_modulus)
    order = q**n
    factors = _prime_factors(order - 1) if order > 2 else []

    def primitive(a):
        if a == 0:
            return False
        if tower.pow(a, order - 1) != 1:
            return False
        return all(tower.pow(a, (order - 1) // r) != 1 for r in factors)

    if alpha_hint is None:
        alpha = next(a for a in range(1, order) if primitive(a))
    else:
        if isinstance(alpha_hint, tuple):
            if len(alpha_hint) != e * n:
                raise ValueError(f"alpha_hint needs {e * n} coordinates")
            alpha = sum((c % p) * p**t for t, c in enumerate(alpha_hint))
        else:
            alpha = alpha_hint
        if not 0 <= alpha < order or not primitive(alpha):
            raise NotPrimitive(f"alpha_hint {alpha_hint} is not a primitive element")
    return FieldCtx(p, e, n, q_modulus, ext_modulus, alpha, table_cap)


def field_from_json(data: dict | str) -> FieldCtx:
    if isinstance(data, str):
        data = json.loads(data)
    return make_field_ctx(
        data["p"],
        data.get("e", 1),
        data.get("n", 1),
        data.get("q_modulus"),
        data.get("ext_modulus"),
        data.get("alpha"),
    )


def paper_field(modulus: str = "stated") -> FieldCtx:
    """F_81 over F_3 with alpha a root of the worked example's modulus.

    ``"stated"`` uses y^4 - y - 1 (alpha^4 = alpha + 1); ``"displayed"`` uses
    y^4 - y^3 - 1, the polynomial the printed matrices actually satisfy.
    """
    if modulus == "stated":
        return make_field_ctx(3, 1, 4, ext_modulus=[-1, -1, 0, 0, 1], alpha_hint=[0, 1, 0, 0])
    if modulus == "displayed":
        return make_field_ctx(3, 1, 4, ext_modulus=[-1, 0, 0, -1, 1], alpha_hint=[0, 1, 0, 0])
    raise ValueError("modulus must be 'stated' or 'displayed'")


def elements_from_codes(ctx: FieldCtx, codes: Iterable[int]) -> list[FFElement]:
    return [FFElement(ctx, int(c)) for c in codes]
