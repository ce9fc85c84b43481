"""Matrix and vector views of linearized polynomials.

Matrices are taken with respect to the basis {1, alpha, ..., alpha^{n-1}} of
F_{q^n} over F_q, with column j holding the coordinates of f(alpha^j).
Entries are F_q element codes (for e = 1 simply residues mod p).
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gfp
from .errors import DependentPoints, DimensionMismatch, ParseError
from .field import FFElement, FieldCtx
from .linpoly import LinearizedPoly, Subspace, _fq_rank, from_fp_matrix, poly_from_json
from .rankcode import RankMetricCode, code_from_json, contains_all, left_compose, make_code


class MatrixFq:
    """An m x n matrix over F_q with entries stored as F_q codes."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx: FieldCtx, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionMismatch("matrix entries must be 2-dimensional")
        if ctx.e == 1:
            a = a % ctx.p
        elif np.any((a < 0) | (a >= ctx.q)):
            raise ValueError("entries must be F_q codes 0..q-1")
        a.setflags(write=False)
        self.ctx = ctx
        self.entries = a

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other):
        if isinstance(other, MatrixFq):
            return self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))
        if isinstance(other, (list, np.ndarray)):
            o = np.asarray(other)
            return o.shape == self.shape and bool(np.array_equal(self.entries, o))
        return NotImplemented

    def __hash__(self):
        return hash(self.entries.tobytes())

    def _bin(self, other, op):
        a, b = self.entries, other.entries
        return MatrixFq(self.ctx, op(a, b))

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return self._bin(other, self.ctx.vadd)

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return self._bin(other, self.ctx.vsub)

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        ctx = self.ctx
        prod = ctx.vmul(self.entries[:, :, None], other.entries[None, :, :])
        return MatrixFq(ctx, ctx.vsum(prod, axis=1))

    def __pow__(self, k: int) -> "MatrixFq":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        result = identity_matrix(self.ctx, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def scale(self, c: int) -> "MatrixFq":
        return MatrixFq(self.ctx, self.ctx.vmul(c, self.entries))

    def rows_slice(self, m: int) -> "MatrixFq":
        return MatrixFq(self.ctx, self.entries[:m])

    def fp_matrix(self) -> np.ndarray:
        """F_p matrix (rows*e x cols*e) with each entry expanded to its multiplication block."""
        ctx, e = self.ctx, self.ctx.e
        out = np.zeros((self.rows * e, self.cols * e), dtype=np.int64)
        for i in range(self.rows):
            for j in range(self.cols):
                c = int(self.entries[i, j])
                if c:
                    out[i * e:(i + 1) * e, j * e:(j + 1) * e] = _fq_block(ctx, c)
        return out

    def rank(self) -> int:
        return gfp.rank(self.fp_matrix(), self.ctx.p) // self.ctx.e

    def __repr__(self):
        return "MatrixFq(\n" + format_matrix(self) + "\n)"

    def __str__(self):
        return format_matrix(self)


def _fq_block(ctx: FieldCtx, c: int) -> np.ndarray:
    """e x e F_p matrix of multiplication by c on F_q (columns = images of x^t)."""
    e = ctx.e
    cols = [ctx._mul(c, ctx.p**t) for t in range(e)]
    return ctx.digits(np.array(cols))[:, :e].T


def identity_matrix(ctx: FieldCtx, n: int) -> MatrixFq:
    return MatrixFq(ctx, np.eye(n, dtype=np.int64))


# --------------------------------------------------------------------------
# basis change between the tower basis and the alpha-power basis


@functools.lru_cache(maxsize=None)
def _alpha_basis(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    """F_p matrices (Bp, Bp^-1); column j*e + t of Bp is x^t * alpha^j in tower digits."""
    cols = []
    for j in range(ctx.n):
        aj = ctx._pow(ctx.alpha_code, j)
        for t in range(ctx.e):
            cols.append(ctx._mul(ctx.p**t, aj))
    Bp = ctx.digits(np.array(cols, dtype=np.int64)).T.copy()
    Binv = gfp.inverse(Bp, ctx.p)
    Bp.setflags(write=False)
    Binv.setflags(write=False)
    return Bp, Binv


def alpha_coordinates(ctx: FieldCtx, x) -> list[int]:
    """F_q coordinates (codes) of x in the basis 1, alpha, ..., alpha^{n-1}."""
    v = x.value if isinstance(x, FFElement) else int(x)
    _, Binv = _alpha_basis(ctx)
    u = Binv @ ctx.digits(v) % ctx.p
    e = ctx.e
    return [int(sum(int(u[j * e + t]) * ctx.p**t for t in range(e))) for j in range(ctx.n)]


def from_alpha_coordinates(ctx: FieldCtx, coords: Sequence[int]) -> FFElement:
    acc = 0
    for j, c in enumerate(coords):
        acc = ctx._add(acc, ctx._mul(int(c), ctx._pow(ctx.alpha_code, j)))
    return FFElement(ctx, acc)


@functools.lru_cache(maxsize=None)
def puncture_projector(ctx: FieldCtx, m: int) -> np.ndarray:
    """F_p matrix (tower basis) of the projection keeping alpha-coordinates 0..m-1."""
    Bp, Binv = _alpha_basis(ctx)
    Dg = np.diag([1 if idx < m * ctx.e else 0 for idx in range(ctx.degree)])
    P = Bp @ Dg @ Binv % ctx.p
    P.setflags(write=False)
    return P


def poly_to_matrix(f: LinearizedPoly) -> MatrixFq:
    ctx = f.ctx
    Bp, Binv = _alpha_basis(ctx)
    Ma = Binv @ f.fp_matrix() @ Bp % ctx.p  # F_p matrix in the alpha basis
    e, n = ctx.e, ctx.n
    out = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        col = Ma[:, j * e]  # image of alpha^j
        for i in range(n):
            out[i, j] = sum(int(col[i * e + t]) * ctx.p**t for t in range(e))
    return MatrixFq(ctx, out)


def matrix_to_poly(M: MatrixFq) -> LinearizedPoly:
    ctx = M.ctx
    if M.shape != (ctx.n, ctx.n):
        raise DimensionMismatch(f"expected a {ctx.n}x{ctx.n} matrix, got {M.shape}")
    Bp, Binv = _alpha_basis(ctx)
    Ma = M.fp_matrix()
    return from_fp_matrix(ctx, Bp @ Ma @ Binv % ctx.p)


def companion_matrix(ctx: FieldCtx) -> MatrixFq:
    """The matrix A of x -> alpha x."""
    return poly_to_matrix(LinearizedPoly.scalar(ctx, ctx.alpha_code))


def frobenius_matrix(ctx: FieldCtx) -> MatrixFq:
    """The matrix S of x -> x^q."""
    return poly_to_matrix(LinearizedPoly.monomial(ctx, 1))


def code_matrix_basis(code: RankMetricCode) -> list[MatrixFq]:
    return [poly_to_matrix(b) for b in code.basis]


# --------------------------------------------------------------------------
# vector form


def is_fqn_linear(code: RankMetricCode) -> bool:
    """Closed under f -> (alpha x) o f."""
    if code.fp_dim == 0:
        return True
    img = left_compose(LinearizedPoly.scalar(code.ctx, code.ctx.alpha_code), code)
    return contains_all(code, img.fp_basis)


def _fqn_rref(ctx: FieldCtx, polys: Sequence[LinearizedPoly]) -> list[LinearizedPoly]:
    rows = [list(f.codes) for f in polys]
    n = ctx.n
    out: list[list[int]] = []
    for row in rows:
        r = list(row)
        for piv_row in out:
            c = next(i for i, x in enumerate(piv_row) if x)
            if r[c]:
                fac = r[c]
                r = [ctx._sub(a, ctx._mul(fac, b)) for a, b in zip(r, piv_row)]
        nz = [i for i, x in enumerate(r) if x]
        if not nz:
            continue
        inv = ctx._inv(r[nz[0]])
        r = [ctx._mul(inv, a) for a in r]
        c = nz[0]
        out = [[ctx._sub(a, ctx._mul(o[c], b)) for a, b in zip(o, r)] if o[c] else o for o in out]
        out.append(r)
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return [LinearizedPoly(ctx, r) for r in out[:n]]


@dataclass
class GeneratorMatrix:
    rows: list[list[FFElement]]
    generators: list[LinearizedPoly]
    linearity: str  # "F_{q^n}" or "F_{p^d0}"

    def to_text(self) -> str:
        head = f"# linearity {self.linearity}"
        return "\n".join([head] + [" ".join(str(x) for x in r) for r in self.rows])

    def to_json(self) -> dict:
        return {"linearity": self.linearity, "rows": [[str(x) for x in r] for r in self.rows]}


def generator_matrix(code: RankMetricCode, points: Sequence) -> GeneratorMatrix:
    """Rows v_g = (g(e_0), ..., g(e_{m-1})) for a generating family of the code.

    F_{q^n}-linear codes get one row per F_{q^n}-basis element (reduced echelon
    form on coefficient vectors); other codes get one row per basis element over
    their linearity subfield.
    """
    ctx = code.ctx
    pts = [p if isinstance(p, FFElement) else ctx.element(p) for p in points]
    if _fq_rank(ctx, [p.value for p in pts]) != len(pts):
        raise DependentPoints("evaluation points are not F_q-independent")
    if is_fqn_linear(code):
        gens = _fqn_rref(ctx, code.basis)
        lin = f"F_{ctx.order}"
    else:
        gens = list(code.basis)
        lin = f"F_{code.scalars}"
    rows = [[g(x) for x in pts] for g in gens]
    return GeneratorMatrix(rows, gens, lin)


def weight(vector: Sequence[FFElement]) -> int:
    """Rank weight: F_q-dimension of the span of the entries."""
    if not vector:
        return 0
    ctx = vector[0].ctx
    return _fq_rank(ctx, [x.value for x in vector if x.value])


# --------------------------------------------------------------------------
# text and JSON


def format_matrix(M: MatrixFq) -> str:
    width = max(len(str(int(x))) for x in M.entries.flat) if M.entries.size else 1
    return "\n".join(" ".join(str(int(x)).rjust(width) for x in row) for row in M.entries)


def parse_matrix(ctx: FieldCtx, text: str) -> MatrixFq:
    """Row per line, entries separated by spaces (optional brackets and commas)."""
    rows = []
    for ln, line in enumerate(text.strip("\n").splitlines(), start=1):
        stripped = line.replace("[", " ").replace("]", " ").replace(",", " ")
        if not stripped.strip():
            continue
        row = []
        col = 0
        for tok in stripped.split():
            col = stripped.index(tok, col) + 1
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad matrix entry {tok!r}", ln, col) from None
            if not 0 <= v < ctx.q:
                raise ParseError(f"entry {v} outside F_{ctx.q}", ln, col)
            row.append(v)
            col += len(tok) - 1
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix", 1, 1)
    width = len(rows[0])
    for ln, r in enumerate(rows, start=1):
        if len(r) != width:
            raise ParseError(f"row has {len(r)} entries, expected {width}", ln, 1)
    return MatrixFq(ctx, rows)


def serialize(obj, fmt: str = "json") -> str:
    """JSON or text form of a code or a matrix."""
    if isinstance(obj, MatrixFq):
        if fmt == "json":
            return json.dumps({"rows": obj.tolist()})
        return format_matrix(obj)
    if isinstance(obj, RankMetricCode):
        if fmt == "json":
            return json.dumps(obj.to_json(), sort_keys=True)
        head = f"# field {json.dumps(obj.ctx.to_json(), sort_keys=True)}\n# linearity {obj.linearity}"
        return "\n".join([head] + [str(b) for b in obj.basis])
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse(ctx: FieldCtx | None, text: str, kind: str = "code", fmt: str = "json"):
    """Inverse of :func:`serialize`."""
    from .field import field_from_json
    from .linpoly import parse_poly

    if kind == "matrix":
        if fmt == "json":
            try:
                return MatrixFq(ctx, json.loads(text)["rows"])
            except (json.JSONDecodeError, KeyError) as exc:
                raise ParseError(f"bad matrix JSON: {exc}") from None
        return parse_matrix(ctx, text)
    if fmt == "json":
        try:
            return code_from_json(text, ctx)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad code JSON: {exc.msg}", exc.lineno, exc.colno) from None
    lines = text.strip().splitlines()
    lin = None
    polys = []
    for ln, line in enumerate(lines, start=1):
        s = line.strip()
        if s.startswith("# field "):
            ctx = field_from_json(s[len("# field "):])
        elif s.startswith("# linearity "):
            lin = int(s.split()[-1])
        elif s:
            if ctx is None:
                raise ParseError("field header missing", ln, 1)
            try:
                polys.append(parse_poly(ctx, s))
            except ParseError as exc:
                raise ParseError(str(exc).split(" (line")[0], ln, exc.column) from None
    if ctx is None:
        raise ParseError("field header missing", 1, 1)
    return make_code(ctx, lin or ctx.e, polys)
