"""Rank-metric codes as F_{p^d0}-subspaces of linearized polynomials.

A code is stored as a basis over its linearity subfield F_{p^d0} (d0 | e).
All heavy lifting happens on the induced F_p-basis: each polynomial is a
vector of length n*e*n over F_p, and each codeword's rank is the F_p-rank of
its evaluation matrix divided by e.  Exhaustive rank statistics are computed
by splitting the F_p-basis in two halves, tabulating one half's combinations
and sweeping the other.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import gfp
from .errors import ContextMismatch, EnumerationTooLarge, ZeroCode
from .field import FFElement, FieldCtx, field_from_json, trace_abs
from .linpoly import LinearizedPoly, adjoint, compose, eval_tensor, poly_from_json, poly_to_json

DEFAULT_ENUM_CAP = 2**24
_TABLE_TARGET = 1 << 14  # combinations tabulated for one half of the basis
_BATCH_TARGET = 1 << 18  # matrices per batched rank call


# --------------------------------------------------------------------------
# subfield helpers


def divisors(e: int) -> list[int]:
    return [d for d in range(1, e + 1) if e % d == 0]


@functools.lru_cache(maxsize=None)
def subfield_basis(ctx: FieldCtx, d0: int) -> tuple[int, ...]:
    """F_p-basis (element codes) of F_{p^d0}, the scalars of a d0-linear code."""
    if ctx.e % d0:
        raise ValueError(f"linearity {d0} must divide e = {ctx.e}")
    if d0 == ctx.e:
        return tuple(ctx.p**t for t in range(ctx.e))
    if d0 == 1:
        return (1,)
    g = ctx.subfield_generator(d0).value
    return tuple(ctx._pow(g, t) for t in range(d0))


@functools.lru_cache(maxsize=None)
def subfield_elements(ctx: FieldCtx, d0: int) -> tuple[int, ...]:
    """Elements of F_{p^d0} as codes, in increasing order."""
    if d0 == ctx.e:
        return tuple(range(ctx.q))
    if d0 == 1:
        return tuple(range(ctx.p))
    g = ctx.subfield_generator(d0).value
    return tuple(sorted({0} | {ctx._pow(g, i) for i in range(ctx.p**d0 - 1)}))


def _coeff_mult_matrix(ctx: FieldCtx, c: int) -> np.ndarray:
    """F_p matrix (L x L) of f -> c*f on polynomial vectors (row-vector convention)."""
    M = ctx.mult_matrix(c)  # columns are images
    return np.kron(np.eye(ctx.n, dtype=np.int64), M.T)


@functools.lru_cache(maxsize=None)
def form_matrix(ctx: FieldCtx) -> np.ndarray:
    """Gram matrix of b(f, g) = Tr(sum f_i g_i) on polynomial F_p vectors."""
    G = ctx.trace_gram()
    B = np.kron(np.eye(ctx.n, dtype=np.int64), G)
    B.setflags(write=False)
    return B


# --------------------------------------------------------------------------


class RankMetricCode:
    """An F_{p^d0}-linear space of linearized polynomials.

    Use :func:`make_code` or :func:`code_from_fp_span` to build one.
    """

    def __init__(self, ctx: FieldCtx, linearity: int, basis: Sequence[LinearizedPoly], fp_rows: np.ndarray, metadata=None):
        self.ctx = ctx
        self.linearity = linearity
        self.basis = tuple(basis)
        self.fp_basis = fp_rows
        self.fp_basis.setflags(write=False)
        R, piv = gfp.rref(fp_rows, ctx.p) if len(fp_rows) else (fp_rows, [])
        self._rref = (R[: len(piv)], piv)
        self.metadata = dict(metadata or {})

    # sizes
    @property
    def dim(self) -> int:
        """Dimension over F_{p^d0}."""
        return len(self.basis)

    @property
    def fp_dim(self) -> int:
        return self.fp_basis.shape[0]

    @property
    def scalars(self) -> int:
        return self.ctx.p**self.linearity

    @property
    def size(self) -> int:
        return self.ctx.p**self.fp_dim

    @property
    def fq_dim(self) -> float:
        return self.fp_dim / self.ctx.e

    def fp_matrices(self) -> np.ndarray:
        """Evaluation matrices (D, N, N) over F_p of the F_p-basis."""
        T = eval_tensor(self.ctx)
        if self.fp_dim == 0:
            N = self.ctx.degree
            return np.zeros((0, N, N), dtype=np.int64)
        return np.tensordot(self.fp_basis, T, axes=1) % self.ctx.p

    def contains(self, f: LinearizedPoly) -> bool:
        return contains(self, f)

    def __contains__(self, f):
        return contains(self, f)

    def __len__(self):
        return self.size

    def __repr__(self):
        name = self.metadata.get("name")
        tag = f" {name}" if name else ""
        return f"RankMetricCode({tag.strip() or 'code'}; dim={self.dim} over F_{self.scalars}, size={self.size})"

    def to_json(self) -> dict:
        d = {
            "field": self.ctx.to_json(),
            "linearity": self.linearity,
            "basis": [poly_to_json(b) for b in self.basis],
        }
        if "k" in self.metadata:
            d["k_hint"] = self.metadata["k"]
        return d


def _fp_rows(ctx: FieldCtx, d0: int, polys: Sequence[LinearizedPoly]) -> np.ndarray:
    gam = subfield_basis(ctx, d0)
    rows = [g.scale(c).to_vector() for g in polys for c in gam]
    L = ctx.n * ctx.degree
    return np.array(rows, dtype=np.int64).reshape(-1, L)


def make_code(ctx: FieldCtx, linearity: int, generators: Iterable[LinearizedPoly], metadata=None) -> RankMetricCode:
    """Code spanned over F_{p^linearity} by the generators (reduced to a basis)."""
    if ctx.e % linearity:
        raise ValueError(f"linearity {linearity} must divide e = {ctx.e}")
    gam = subfield_basis(ctx, linearity)
    L = ctx.n * ctx.degree
    basis: list[LinearizedPoly] = []
    R = np.zeros((0, L), dtype=np.int64)
    piv: list[int] = []
    for g in generators:
        if g.ctx != ctx:
            raise ContextMismatch("generator from a different field")
        block = np.array([g.scale(c).to_vector() for c in gam], dtype=np.int64)
        red = gfp.reduce_against(R, piv, block, ctx.p)
        if not red.any():
            continue
        basis.append(g)
        R, piv = gfp.rref(np.vstack([R, block]), ctx.p)
        R = R[: len(piv)]
    return RankMetricCode(ctx, linearity, basis, _fp_rows(ctx, linearity, basis), metadata)


def detect_linearity(ctx: FieldCtx, rows: np.ndarray) -> int:
    """Largest d | e such that the F_p-span of rows is F_{p^d}-closed."""
    if len(rows) == 0:
        return ctx.e
    R, piv = gfp.rref(rows, ctx.p)
    R = R[: len(piv)]
    best = 1
    for d in divisors(ctx.e):
        if d == 1:
            continue
        g = ctx.subfield_generator(d).value
        img = R @ _coeff_mult_matrix(ctx, g) % ctx.p
        if np.all(gfp.in_rowspace(R, piv, img, ctx.p)):
            best = max(best, d)
    return best


def code_from_fp_span(ctx: FieldCtx, rows, linearity: int | None = None, metadata=None) -> RankMetricCode:
    """Code equal to the F_p-span of the given vectors; linearity re-detected unless given."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, ctx.n * ctx.degree) % ctx.p
    rows = gfp.row_basis(rows, ctx.p) if len(rows) else rows
    d0 = detect_linearity(ctx, rows) if linearity is None else linearity
    polys = [LinearizedPoly.from_vector(ctx, r) for r in rows]
    return make_code(ctx, d0, polys, metadata)


def zero_code(ctx: FieldCtx) -> RankMetricCode:
    return make_code(ctx, ctx.e, [], {"name": "zero"})


def full_space(ctx: FieldCtx) -> RankMetricCode:
    gens = [LinearizedPoly.monomial(ctx, i, ctx._pow(ctx.alpha_code, j)) for i in range(ctx.n) for j in range(ctx.n)]
    return make_code(ctx, ctx.e, gens, {"name": "full"})


def code_from_json(data, ctx: FieldCtx | None = None) -> RankMetricCode:
    if isinstance(data, str):
        data = json.loads(data)
    ctx = ctx or field_from_json(data["field"])
    basis = [poly_from_json(ctx, b) for b in data["basis"]]
    meta = {"k": data["k_hint"]} if "k_hint" in data else {}
    return make_code(ctx, data.get("linearity", ctx.e), basis, meta)


# --------------------------------------------------------------------------
# membership and comparison


def contains(code: RankMetricCode, f: LinearizedPoly) -> bool:
    code.ctx.check(f.ctx)
    R, piv = code._rref
    return bool(gfp.in_rowspace(R, piv, f.to_vector(), code.ctx.p))


def contains_all(code: RankMetricCode, rows: np.ndarray) -> bool:
    if len(rows) == 0:
        return True
    R, piv = code._rref
    return bool(np.all(gfp.in_rowspace(R, piv, rows, code.ctx.p)))


def sets_equal(c1: RankMetricCode, c2: RankMetricCode) -> bool:
    c1.ctx.check(c2.ctx)
    return c1.fp_dim == c2.fp_dim and contains_all(c1, c2.fp_basis)


def is_subcode(small: RankMetricCode, big: RankMetricCode) -> bool:
    small.ctx.check(big.ctx)
    return contains_all(big, small.fp_basis)


def left_compose(g: LinearizedPoly, code: RankMetricCode) -> RankMetricCode:
    """{g o f : f in code}."""
    return make_code(code.ctx, code.linearity, [compose(g, b) for b in code.basis])


def right_compose(code: RankMetricCode, h: LinearizedPoly) -> RankMetricCode:
    """{f o h : f in code}."""
    return make_code(code.ctx, code.linearity, [compose(b, h) for b in code.basis])


# --------------------------------------------------------------------------
# enumeration


def _check_cap(size: int, cap: int):
    if size > cap:
        raise EnumerationTooLarge(f"{size} codewords exceed the enumeration cap {cap}")


def codewords(code: RankMetricCode, cap: int = DEFAULT_ENUM_CAP) -> Iterator[LinearizedPoly]:
    """All codewords, lexicographic in the coordinates over F_{p^d0}.

    The first basis coordinate varies slowest; scalars are ordered by code.
    """
    _check_cap(code.size, cap)
    ctx = code.ctx
    scal = subfield_elements(ctx, code.linearity)
    k = code.dim
    if k == 0:
        yield LinearizedPoly.zero(ctx)
        return
    scaled = [[b.scale(c) for c in scal] for b in code.basis]
    idx = [0] * k
    while True:
        acc = scaled[0][idx[0]]
        for j in range(1, k):
            acc = acc + scaled[j][idx[j]]
        yield acc
        j = k - 1
        while j >= 0 and idx[j] == len(scal) - 1:
            idx[j] = 0
            j -= 1
        if j < 0:
            return
        idx[j] += 1


def _combo_table(mats: np.ndarray, p: int) -> np.ndarray:
    """All F_p-combinations of the given matrices (or packed rows)."""
    if p == 2:
        out = np.zeros((1,) + mats.shape[1:], dtype=mats.dtype)
        for m in mats:
            out = np.concatenate([out, out ^ m])
        return out
    out = np.zeros((1,) + mats.shape[1:], dtype=np.int64)
    for m in mats:
        out = np.concatenate([(out + c * m) % p for c in range(p)])
    return out


def rank_stream(mats: np.ndarray, p: int, e: int = 1) -> Iterator[np.ndarray]:
    """Yield arrays of ranks of every F_p-combination of ``mats`` (order fixed).

    Ranks are divided by e (F_q-rank of F_q-linear maps).
    """
    mats = np.asarray(mats, dtype=np.int64) % p
    D = mats.shape[0]
    ncols = mats.shape[2]
    if D == 0:
        yield np.zeros(1, dtype=np.int64)
        return
    D1 = D
    while D1 > 0 and p**D1 > _TABLE_TARGET:
        D1 -= 1
    D1 = max(D1, 1)
    packed = p == 2 and ncols <= 64
    base = gfp.pack_rows(mats) if packed else mats
    T1 = _combo_table(base[:D1], p)
    T2 = _combo_table(base[D1:], p)
    step = max(1, _BATCH_TARGET // len(T1))
    for s in range(0, len(T2), step):
        chunk = T2[s:s + step]
        if packed:
            batch = (T1[None, :, :] ^ chunk[:, None, :]).reshape(-1, T1.shape[1])
            r = gfp.batch_rank_packed(batch, ncols)
        else:
            batch = ((T1[None] + chunk[:, None]) % p).reshape((-1,) + T1.shape[1:])
            r = gfp.batch_rank_modp(batch, p)
        yield r // e


@dataclass
class RankDistribution:
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def min_nonzero(self) -> int | None:
        nz = [r for r, c in self.counts.items() if r > 0 and c]
        return min(nz) if nz else None

    def to_json(self) -> dict:
        return {str(k): v for k, v in sorted(self.counts.items())}

    def __eq__(self, other):
        if isinstance(other, RankDistribution):
            return self.counts == other.counts
        if isinstance(other, dict):
            return self.counts == {int(k): v for k, v in other.items()}
        return NotImplemented

    def __repr__(self):
        return f"RankDistribution({self.to_json()})"


def distribution_from_matrices(mats: np.ndarray, p: int, e: int, size: int, cap: int = DEFAULT_ENUM_CAP) -> RankDistribution:
    _check_cap(size, cap)
    total = np.zeros(0, dtype=np.int64)
    for r in rank_stream(mats, p, e):
        b = np.bincount(r)
        if len(b) > len(total):
            total = np.pad(total, (0, len(b) - len(total)))
        total[: len(b)] += b
    return RankDistribution({i: int(c) for i, c in enumerate(total) if c})


def rank_distribution(code: RankMetricCode, cap: int = DEFAULT_ENUM_CAP) -> RankDistribution:
    ctx = code.ctx
    return distribution_from_matrices(code.fp_matrices(), ctx.p, ctx.e, code.size, cap)


def min_distance(code: RankMetricCode, mode: str = "exact", seed: int = 0, count: int = 10000,
                 cap: int = DEFAULT_ENUM_CAP) -> int:
    """Minimum nonzero rank (exact), or an upper bound from random codewords (sample)."""
    if code.fp_dim == 0:
        raise ZeroCode("the zero code has no minimum distance")
    ctx = code.ctx
    if mode == "exact":
        return rank_distribution(code, cap).min_nonzero()
    if mode != "sample":
        raise ValueError("mode must be 'exact' or 'sample'")
    rng = np.random.default_rng(seed)
    mats = code.fp_matrices()
    best = ctx.n
    done = 0
    while done < count:
        m = min(count - done, 4096)
        c = rng.integers(0, ctx.p, size=(m, code.fp_dim))
        zero = ~c.any(axis=1)
        c[zero, 0] = 1  # keep every sample nonzero
        W = np.tensordot(c, mats, axes=1) % ctx.p
        r = gfp.batch_rank(W, ctx.p) // ctx.e
        best = min(best, int(r.min()))
        done += m
    return best


@dataclass
class MRDReport:
    mrd: bool
    d: int
    k: int
    size: int
    bound: int
    rows: int = 0
    cols: int = 0

    def __bool__(self):
        return self.mrd

    def to_json(self) -> dict:
        return {"mrd": self.mrd, "d": self.d, "k": self.k, "size": self.size, "singleton_bound": self.bound}


def mrd_report(size: int, d: int, q: int, m: int, n: int) -> MRDReport:
    """Singleton-like bound |C| <= q^{n(m-d+1)} for m x n matrices, m <= n."""
    k = m - d + 1
    bound = q ** (n * k)
    return MRDReport(size == bound, d, k, size, bound, m, n)


def is_mrd(code: RankMetricCode, cap: int = DEFAULT_ENUM_CAP) -> MRDReport:
    d = min_distance(code, "exact", cap=cap)
    ctx = code.ctx
    return mrd_report(code.size, d, ctx.q, ctx.n, ctx.n)


# --------------------------------------------------------------------------
# duality


def bilinear_form_b(f: LinearizedPoly, g: LinearizedPoly) -> FFElement:
    """Tr(sum_i f_i g_i), the coefficient of x in f o adjoint(g) traced to F_p."""
    f._check(g)
    ctx = f.ctx
    acc = 0
    for a, b in zip(f.codes, g.codes):
        acc = ctx._add(acc, ctx._mul(a, b))
    return trace_abs(FFElement(ctx, acc))


def delsarte_dual(code: RankMetricCode) -> RankMetricCode:
    ctx = code.ctx
    L = ctx.n * ctx.degree
    if code.fp_dim == 0:
        return full_space(ctx)
    A = code.fp_basis @ form_matrix(ctx) % ctx.p
    null = gfp.nullspace(A, ctx.p)
    return code_from_fp_span(ctx, null.reshape(-1, L))


def adjoint_code(code: RankMetricCode) -> RankMetricCode:
    return make_code(code.ctx, code.linearity, [adjoint(b) for b in code.basis])


# --------------------------------------------------------------------------
# puncturing


@dataclass
class PuncturedCode:
    """Row-deleted matrix form of a code: m x n matrices over F_q."""

    rows: int
    cols: int
    matrices: list = field(repr=False)  # F_q matrices of the F_p-basis images
    fp_dim: int = 0
    collapsed: bool = False
    report: MRDReport | None = None

    @property
    def size(self) -> int:
        return self.report.size if self.report else 0


def puncture(code: RankMetricCode, m: int, cap: int = DEFAULT_ENUM_CAP) -> PuncturedCode:
    """Delete the last n - m rows of every codeword matrix and check MRD for m x n."""
    from .representation import poly_to_matrix, puncture_projector

    ctx = code.ctx
    if not 1 <= m <= ctx.n:
        raise ValueError(f"need 1 <= m <= n, got m={m}")
    P = puncture_projector(ctx, m)  # F_p projection onto the first m alpha-coordinates
    mats = [P @ M % ctx.p for M in code.fp_matrices()]
    flat = np.array(mats).reshape(len(mats), -1) if mats else np.zeros((0, P.shape[0] * ctx.degree), dtype=np.int64)
    img = gfp.row_basis(flat, ctx.p) if len(flat) else flat
    D = img.shape[0]
    collapsed = D < code.fp_dim
    size = ctx.p**D
    _check_cap(size, cap)
    base = img.reshape(D, P.shape[0], ctx.degree)
    if D:
        dist = distribution_from_matrices(base, ctx.p, ctx.e, size, cap)
        report = mrd_report(size, dist.min_nonzero(), ctx.q, m, ctx.n)
    else:
        report = MRDReport(False, 0, 0, 1, 1, m, ctx.n)
    fq = [poly_to_matrix(b).rows_slice(m) for b in code_basis_fp_polys(code)]
    return PuncturedCode(m, ctx.n, fq, D, collapsed, report)


def code_basis_fp_polys(code: RankMetricCode) -> list[LinearizedPoly]:
    return [LinearizedPoly.from_vector(code.ctx, r) for r in code.fp_basis]
