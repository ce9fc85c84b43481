"""Semifield spread sets, scattered polynomials and lifted subspace codes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gfp
from .errors import EnumerationTooLarge, InadmissibleEta, NotASpreadSet, NotScattered, WorkBoundExceeded
from .field import FFElement, FieldCtx, norm
from .linpoly import LinearizedPoly, evaluate_many, kernel
from .rankcode import (
    DEFAULT_ENUM_CAP,
    RankMetricCode,
    is_mrd,
    make_code,
    min_distance,
    rank_stream,
)
from .representation import MatrixFq, alpha_coordinates, from_alpha_coordinates, matrix_to_poly, poly_to_matrix

DEFAULT_WORK_BOUND = 10**9


# --------------------------------------------------------------------------
# presemifields


@dataclass(frozen=True)
class PresemifieldMult:
    """x o y = sum_i y_i R_i(x), with y_i the F_q-coordinates of y in the alpha basis."""

    ctx: FieldCtx
    R: tuple

    def __post_init__(self):
        if len(self.R) != self.ctx.n:
            raise ValueError(f"need {self.ctx.n} polynomials, got {len(self.R)}")

    def operator(self, y) -> LinearizedPoly:
        """R_y = sum_i y_i R_i."""
        ctx = self.ctx
        acc = LinearizedPoly.zero(ctx)
        for yi, Ri in zip(alpha_coordinates(ctx, y), self.R):
            if yi:
                acc = acc + Ri.scale(yi)
        return acc

    def multiply(self, x, y) -> FFElement:
        return self.operator(y)(x)

    def __eq__(self, other):
        return isinstance(other, PresemifieldMult) and self.ctx == other.ctx and self.R == other.R

    def __hash__(self):
        return hash(self.R)


def spread_mult_from_code(code: RankMetricCode) -> PresemifieldMult:
    """Multiplication whose operators R_y run over the code (k = 1, d = n)."""
    ctx = code.ctx
    if code.linearity != ctx.e or code.dim != ctx.n:
        raise NotASpreadSet(f"need an F_q-linear code of dimension {ctx.n}")
    d = min_distance(code)
    if d != ctx.n:
        raise NotASpreadSet(f"code contains a singular nonzero element (min distance {d})")
    return PresemifieldMult(ctx, tuple(code.basis))


def gtf_mult(ctx: FieldCtx, eta, h: int) -> PresemifieldMult:
    """x o y = xy + eta x^{q^h} y^q, i.e. R_i(x) = alpha^i x + eta alpha^{iq} x^{q^h}."""
    eta = eta if isinstance(eta, FFElement) else ctx.element(eta)
    if eta and norm(-eta) == ctx.one:
        raise InadmissibleEta("N(-eta) = 1")
    R = []
    for i in range(ctx.n):
        ai = ctx._pow(ctx.alpha_code, i)
        coeffs = [0] * ctx.n
        coeffs[0] = ai
        hh = h % ctx.n
        coeffs[hh] = ctx._add(coeffs[hh], ctx._mul(eta.value, ctx._frob(ai, 1)))
        R.append(LinearizedPoly(ctx, coeffs))
    return PresemifieldMult(ctx, tuple(R))


def mult_operator_code(mult: PresemifieldMult) -> RankMetricCode:
    return make_code(mult.ctx, mult.ctx.e, mult.R)


@dataclass
class ZeroDivisorReport:
    found: bool
    witness: tuple | None = None  # (x, y) with x o y = 0

    def __bool__(self):
        return self.found


def has_zero_divisors(mult: PresemifieldMult, work_bound: int | None = None) -> ZeroDivisorReport:
    """Rank test of every R_y, y != 0 (q^n operator ranks instead of q^{2n} products)."""
    ctx = mult.ctx
    bound = DEFAULT_WORK_BOUND if work_bound is None else work_bound
    if ctx.order > bound:
        raise WorkBoundExceeded(f"{ctx.order} rank checks exceed the work bound")
    # F_p basis of the y-space: y = x^t alpha^i, operator x^t R_i
    ops = [Ri.scale(ctx.p**t) for Ri in mult.R for t in range(ctx.e)]
    mats = np.array([f.fp_matrix() for f in ops])
    offset = 0
    for r in rank_stream(mats, ctx.p, ctx.e):
        bad = np.nonzero(r < ctx.n)[0]
        bad = bad[bad + offset > 0]
        if bad.size:
            m = int(bad[0]) + offset
            digits = [(m // ctx.p**u) % ctx.p for u in range(len(ops))]
            coords = [sum(digits[i * ctx.e + t] * ctx.p**t for t in range(ctx.e)) for i in range(ctx.n)]
            y = from_alpha_coordinates(ctx, coords)
            x = kernel(mult.operator(y)).basis[0]
            return ZeroDivisorReport(True, (x, y))
        offset += len(r)
    return ZeroDivisorReport(False)


def opposite(mult: PresemifieldMult) -> PresemifieldMult:
    """x o' y = y o x; R'_j is interpolated from R'_j(alpha^i) = R_i(alpha^j)."""
    ctx = mult.ctx
    n = ctx.n
    out = []
    for j in range(n):
        aj = ctx.alpha_pow(j)
        cols = [alpha_coordinates(ctx, Ri(aj)) for Ri in mult.R]
        M = MatrixFq(ctx, np.array(cols, dtype=np.int64).T)
        out.append(matrix_to_poly(M))
    return PresemifieldMult(ctx, tuple(out))


def is_field_spread(code: RankMetricCode) -> bool:
    """Spread set whose left idealiser has q^n elements (then it is L o g, a field)."""
    from .equivalence import left_idealiser

    spread_mult_from_code(code)  # raises NotASpreadSet
    return left_idealiser(code).size == code.ctx.order


# --------------------------------------------------------------------------
# scattered polynomials


def _all_mult_matrices(ctx: FieldCtx, start: int, stop: int) -> np.ndarray:
    betas = np.arange(start, stop, dtype=np.int64)
    basis = ctx.p ** np.arange(ctx.degree, dtype=np.int64)
    img = ctx.vmul(betas[:, None], basis[None, :])  # (B, N): beta * basis_t
    return np.transpose(ctx.digits(img), (0, 2, 1))


@dataclass
class ScatteredReport:
    scattered: bool
    witness_beta: FFElement | None = None

    def __bool__(self):
        return self.scattered

    def to_json(self) -> dict:
        return {"scattered": self.scattered, "witness_beta": None if self.witness_beta is None else str(self.witness_beta)}


def is_scattered(f: LinearizedPoly, chunk: int = 1 << 14) -> ScatteredReport:
    """rank(f - beta x) >= n - 1 for every beta; witness is the first failing beta."""
    ctx = f.ctx
    Mf = f.fp_matrix()
    for s in range(0, ctx.order, chunk):
        t = min(s + chunk, ctx.order)
        mats = (Mf[None] - _all_mult_matrices(ctx, s, t)) % ctx.p
        r = gfp.batch_rank(mats, ctx.p) // ctx.e
        bad = np.nonzero(r < ctx.n - 1)[0]
        if bad.size:
            return ScatteredReport(False, FFElement(ctx, s + int(bad[0])))
    return ScatteredReport(True)


def linear_set_size(f: LinearizedPoly) -> int:
    """Number of points <(y, f(y))> of PG(1, q^n), normalised to (1, f(y)/y)."""
    ctx = f.ctx
    ys = np.arange(1, ctx.order, dtype=np.int64)
    ratios = ctx.vmul(evaluate_many(f, ys), ctx.vinv(ys))
    return int(np.unique(ratios).size)


def scattered_code(f: LinearizedPoly) -> RankMetricCode:
    """C_f = <x, f> over F_{q^n}."""
    ctx = f.ctx
    rep = is_scattered(f)
    if not rep:
        raise NotScattered(f"rank(f - beta x) < n - 1 at beta = {rep.witness_beta}")
    x = LinearizedPoly.identity(ctx)
    gens = [g.scale(ctx._pow(ctx.alpha_code, j)) for g in (x, f) for j in range(ctx.n)]
    return make_code(ctx, ctx.e, gens, {"name": f"C_f[{f}]", "k": 2, "family": "scattered"})


# --------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class LiftedSubspace:
    """Row basis (n x 2n, F_q codes) of {(u, Xu)}."""

    ctx: FieldCtx
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return _fq_row_rank(self.ctx, self.basis)

    def fp_rows(self) -> np.ndarray:
        return _expand_rows(self.ctx, self.basis)


def _expand_rows(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    """F_p rows of the F_q-span: each row times x^t, entries written in base p."""
    rows = np.asarray(rows, dtype=np.int64)
    e = ctx.e
    if e == 1:
        return rows % ctx.p
    out = []
    for r in rows:
        for t in range(e):
            scaled = ctx.vmul(ctx.p**t, r)
            out.append(ctx.digits(scaled)[:, :e].reshape(-1))
    return np.array(out, dtype=np.int64)


def _fq_row_rank(ctx: FieldCtx, rows) -> int:
    return gfp.rank(_expand_rows(ctx, rows), ctx.p) // ctx.e


def lift(X) -> LiftedSubspace:
    """S_X = {(u, Xu)} for a matrix or the matrix of a polynomial."""
    M = poly_to_matrix(X) if isinstance(X, LinearizedPoly) else X
    ctx = M.ctx
    n = M.cols
    basis = np.hstack([np.eye(n, dtype=np.int64), M.entries.T])  # row i = (e_i, column i)
    return LiftedSubspace(ctx, basis)


def subspace_distance(U: LiftedSubspace, V: LiftedSubspace) -> int:
    """dim U + dim V - 2 dim(U cap V) = 2 dim(U + V) - dim U - dim V."""
    ctx = U.ctx
    both = _fq_row_rank(ctx, np.vstack([U.basis, V.basis]))
    return 2 * both - U.dim - V.dim


def lifted_code(code: RankMetricCode, cap: int = DEFAULT_ENUM_CAP) -> list[LiftedSubspace]:
    from .rankcode import codewords

    return [lift(f) for f in codewords(code, cap)]


def lifted_min_distance(code: RankMetricCode, cap: int = 1 << 26, chunk: int = 1 << 15) -> int:
    """Exhaustive minimum pairwise subspace distance of the lifted code."""
    ctx = code.ctx
    S = code.size
    if S * (S - 1) // 2 > cap:
        raise EnumerationTooLarge(f"{S * (S - 1) // 2} pairs exceed the cap {cap}")
    subs = lifted_code(code)
    if len(subs) < 2:
        raise EnumerationTooLarge("fewer than two codewords")
    n = ctx.n
    fp = np.array([s.fp_rows() for s in subs])  # (S, n e, 2 n e) over F_p
    iu, ju = np.triu_indices(len(subs), k=1)
    best = None
    for s in range(0, len(iu), chunk):
        a, b = iu[s:s + chunk], ju[s:s + chunk]
        mats = np.concatenate([fp[a], fp[b]], axis=1)
        both = gfp.batch_rank(mats, ctx.p) // ctx.e
        d = int((2 * both - 2 * n).min())
        best = d if best is None else min(best, d)
    return best
