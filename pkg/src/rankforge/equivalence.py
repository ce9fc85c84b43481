"""Isometries, idealisers, automorphism groups and twisted-code equivalence.

An isometry acts by f -> g o f^rho o h, where f^rho raises every coefficient
to p^i.  A monomial triple (a, b, i) stands for the pair
(a x^{p^i}, b x^{p^{ne-i}}); as an isometry it is g = a x, h = b^{p^i} x,
rho = p^i, so coefficient j of f goes to a f_j^{p^i} (b^{p^i})^{q^j}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .constructions import TwistSpec, admissible_eta, twisted
from .errors import EtaZero, InadmissibleEta, SingularIsometry, WorkBoundExceeded
from .field import FFElement, FieldCtx, dlog
from .linpoly import LinearizedPoly, compose, is_invertible
from .rankcode import (
    RankMetricCode,
    code_from_fp_span,
    contains_all,
    make_code,
    sets_equal,
)

DEFAULT_WORK_BOUND = 10**9


# --------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class Isometry:
    g: LinearizedPoly
    h: LinearizedPoly
    rho_exp: int = 0

    def __post_init__(self):
        if not is_invertible(self.g) or not is_invertible(self.h):
            raise SingularIsometry("isometry factors must be invertible")

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "Isometry":
        x = LinearizedPoly.identity(ctx)
        return cls(x, x, 0)

    @classmethod
    def from_triple(cls, ctx: FieldCtx, a: int, b: int, i: int) -> "Isometry":
        bb = ctx._frob(b, i, "p")
        return cls(LinearizedPoly.scalar(ctx, a), LinearizedPoly.scalar(ctx, bb), i % ctx.degree)

    def __call__(self, f: LinearizedPoly) -> LinearizedPoly:
        return compose(compose(self.g, f.coefficient_power(self.rho_exp)), self.h)


def apply_isometry(code: RankMetricCode, iso: Isometry) -> RankMetricCode:
    return make_code(code.ctx, code.linearity, [iso(b) for b in code.basis])


def random_isometry(ctx: FieldCtx, rng: np.random.Generator, rho: bool = True) -> Isometry:
    def rand_inv():
        while True:
            f = LinearizedPoly(ctx, [int(c) for c in rng.integers(0, ctx.order, ctx.n)])
            if is_invertible(f):
                return f
    i = int(rng.integers(0, ctx.degree)) if rho else 0
    return Isometry(rand_inv(), rand_inv(), i)


# --------------------------------------------------------------------------
# idealisers


def _annihilator(code: RankMetricCode) -> np.ndarray:
    """Columns K with v in code iff v @ K = 0."""
    ctx = code.ctx
    L = ctx.n * ctx.degree
    if code.fp_dim == 0:
        return np.eye(L, dtype=np.int64)
    return gfp.nullspace(code.fp_basis, ctx.p).T


def _basis_polys(ctx: FieldCtx) -> list[LinearizedPoly]:
    return [LinearizedPoly.monomial(ctx, j, ctx.p**t) for j in range(ctx.n) for t in range(ctx.degree)]


def _solve_composition(target: RankMetricCode, factors: list[LinearizedPoly], side: str,
                       domain: list[LinearizedPoly] | None = None) -> np.ndarray:
    """F_p basis (rows, coordinates over ``domain``) of {g : g o f in target} (side "left")
    or {g : f o g in target} (side "right") for all f in factors."""
    ctx = target.ctx
    p = ctx.p
    K = _annihilator(target)
    dom = domain if domain is not None else _basis_polys(ctx)
    blocks = []
    for f in factors:
        imgs = [compose(u, f) if side == "left" else compose(f, u) for u in dom]
        M = np.array([u.to_vector() for u in imgs], dtype=np.int64)
        blocks.append(M @ K % p)
    if not blocks or K.shape[1] == 0:
        return np.eye(len(dom), dtype=np.int64)
    A = np.hstack(blocks)
    return gfp.nullspace(A.T, p)


def left_idealiser(code: RankMetricCode) -> RankMetricCode:
    """{g : g o f in code for all f in code}."""
    sol = _solve_composition(code, _fp_polys(code), "left")
    return code_from_fp_span(code.ctx, sol, metadata={"name": "left idealiser"})


def right_idealiser(code: RankMetricCode) -> RankMetricCode:
    """{g : f o g in code for all f in code}."""
    sol = _solve_composition(code, _fp_polys(code), "right")
    return code_from_fp_span(code.ctx, sol, metadata={"name": "right idealiser"})


def _fp_polys(code: RankMetricCode) -> list[LinearizedPoly]:
    return [LinearizedPoly.from_vector(code.ctx, r) for r in code.fp_basis]


# --------------------------------------------------------------------------
# monomial automorphism groups


@dataclass
class MonomialAutGroup:
    """Triples (a, b, i) stored as arrays of codes; sorted by (dlog a, dlog b, i)."""

    ctx: FieldCtx
    a: np.ndarray
    b: np.ndarray
    i: np.ndarray
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        ctx = self.ctx
        la = ctx.vlog(self.a) if len(self.a) else self.a
        lb = ctx.vlog(self.b) if len(self.b) else self.b
        order = np.lexsort((self.i, lb, la))
        self.a, self.b, self.i = self.a[order], self.b[order], self.i[order]

    @property
    def order(self) -> int:
        return len(self.a)

    def __len__(self):
        return self.order

    def triples(self) -> list[tuple[int, int, int]]:
        """Elements as (dlog a, dlog b, i)."""
        ctx = self.ctx
        if not self.order:
            return []
        return list(zip(ctx.vlog(self.a).tolist(), ctx.vlog(self.b).tolist(), self.i.tolist()))

    def isometries(self, limit: int | None = None):
        n = self.order if limit is None else min(limit, self.order)
        for t in range(n):
            yield Isometry.from_triple(self.ctx, int(self.a[t]), int(self.b[t]), int(self.i[t]))

    def contains(self, a: int, b: int, i: int) -> bool:
        m = (self.a == a) & (self.b == b) & (self.i == i % self.ctx.degree)
        return bool(m.any())

    def key_set(self) -> set[tuple[int, int, int]]:
        return set(zip(self.a.tolist(), self.b.tolist(), self.i.tolist()))

    def multiply(self, s: int, t: int) -> tuple[int, int, int]:
        """Triple of element s applied after element t."""
        ctx = self.ctx
        a1, b1, i1 = int(self.a[s]), int(self.b[s]), int(self.i[s])
        a2, b2, i2 = int(self.a[t]), int(self.b[t]), int(self.i[t])
        a = ctx._mul(a1, ctx._frob(a2, i1, "p"))
        b = ctx._mul(b2, ctx._frob(b1, -i2, "p"))
        return a, b, (i1 + i2) % ctx.degree

    def is_closed(self, samples: int = 20000, seed: int = 0) -> bool:
        """Closure under composition (all pairs when small, else random pairs)."""
        if self.order == 0:
            return True
        keys = self.key_set()
        G = self.order
        if G * G <= samples:
            pairs = ((s, t) for s in range(G) for t in range(G))
        else:
            rng = np.random.default_rng(seed)
            pairs = zip(rng.integers(0, G, samples).tolist(), rng.integers(0, G, samples).tolist())
        return all(self.multiply(s, t) in keys for s, t in pairs)

    def to_json(self, sample: int = 10) -> dict:
        return {"order": self.order, "sample_elements": self.triples()[:sample], **{k: v for k, v in self.flags.items()}}


def _i_values(ctx: FieldCtx, i_range: str) -> np.ndarray:
    if i_range == "full":
        return np.arange(ctx.degree)
    if i_range == "theorem":
        return np.arange(ctx.n)
    raise ValueError("i_range must be 'full' (0..ne-1) or 'theorem' (0..n-1)")


def predicted_aut_gabidulin(ctx: FieldCtx, k: int, i_range: str = "full") -> MonomialAutGroup:
    """All triples (a, b, i): order (q^n - 1)^2 * ne for the full range."""
    from .errors import BadK

    if not 1 <= k <= ctx.n - 1:
        raise BadK(f"need 1 <= k <= n-1, got {k}")
    M = ctx.order - 1
    iv = _i_values(ctx, i_range)
    nz = ctx.vexp(np.arange(M))
    A = np.repeat(nz, M * len(iv))
    B = np.tile(np.repeat(nz, len(iv)), M)
    I = np.tile(iv, M * M)
    return MonomialAutGroup(ctx, A, B, I, {"i_range": i_range})


def _twist_condition_solutions(ctx: FieldCtx, spec: TwistSpec, nu: int, ivals, first_only=False):
    """Solutions (la, lb, i) of la(1-q^{sh}) + p^i(q^{sk}-q^{sh}) lb + p^i l_eta = l_nu mod q^n-1."""
    M = ctx.order - 1
    le = dlog(spec.eta)
    ln = dlog(FFElement(ctx, nu))
    qsh = pow(ctx.q, spec.s * spec.h, M) if M > 1 else 0
    qsk = pow(ctx.q, spec.s * spec.k, M) if M > 1 else 0
    lb_all = np.arange(M, dtype=np.int64)
    out = []
    for i in ivals:
        pi = pow(ctx.p, int(i), M) if M > 1 else 0
        c1 = (1 - qsh) % M
        c2 = pi * ((qsk - qsh) % M) % M
        r = (ln - pi * le) % M
        g1 = math.gcd(c1, M)
        rhs = (r - c2 * lb_all) % M
        ok = rhs % g1 == 0
        if first_only:
            idx = np.nonzero(ok)[0]
            if idx.size:
                lb = int(idx[0])
                m1 = M // g1
                x0 = (int(rhs[lb]) // g1) * pow(c1 // g1, -1, m1) % m1 if m1 > 1 else 0
                return [(x0, lb, int(i))]
            continue
        lbs = lb_all[ok]
        if lbs.size == 0:
            continue
        m1 = M // g1
        inv = pow(c1 // g1, -1, m1) if m1 > 1 else 0
        x0 = ((rhs[ok] // g1) * inv) % m1 if m1 > 1 else np.zeros(lbs.size, dtype=np.int64)
        shifts = np.arange(g1, dtype=np.int64) * m1
        la = (x0[:, None] + shifts[None, :]).reshape(-1)
        lb = np.repeat(lbs, g1)
        out.append((la, lb, np.full(la.size, int(i))))
    return out


def predicted_aut_twisted(ctx: FieldCtx, spec: TwistSpec, i_range: str = "full") -> MonomialAutGroup:
    """Triples (a, b, i) with a^{1-q^h} (b^{q^k-q^h})^{p^i} eta^{p^i} = eta."""
    if not spec.eta:
        raise EtaZero("eta = 0 gives a Gabidulin code; use predicted_aut_gabidulin")
    if not admissible_eta(ctx, spec.k, spec.eta):
        raise InadmissibleEta("inadmissible eta")
    sols = _twist_condition_solutions(ctx, spec, spec.eta.value, _i_values(ctx, i_range))
    if sols:
        la = np.concatenate([s[0] for s in sols])
        lb = np.concatenate([s[1] for s in sols])
        iv = np.concatenate([s[2] for s in sols])
    else:
        la = lb = iv = np.zeros(0, dtype=np.int64)
    heuristic = spec.k in (1, ctx.n - 1) or spec.s != 1
    flags = {"i_range": i_range}
    if heuristic:
        flags["scope"] = "heuristic - outside theorem scope"
    return MonomialAutGroup(ctx, ctx.vexp(la), ctx.vexp(lb), iv, flags)


def _triple_images(ctx: FieldCtx, f: LinearizedPoly, a, b, i) -> np.ndarray:
    """F_p vectors of the images of f under every triple (vectorised)."""
    c = ctx.vpow(b, ctx.p ** np.asarray(i) % (ctx.order - 1) if ctx.order > 2 else 1)
    pe = ctx.p ** np.asarray(i)
    cols = []
    for j, fj in enumerate(f.codes):
        if fj == 0:
            cols.append(np.zeros(len(a), dtype=np.int64))
            continue
        fr = ctx.vpow(np.full(len(a), fj), pe % (ctx.order - 1) if ctx.order > 2 else 1)
        cq = ctx.vfrob(c, j)
        cols.append(ctx.vmul(ctx.vmul(a, fr), cq))
    coeffs = np.stack(cols, axis=1)
    return ctx.digits(coeffs).reshape(len(a), -1)


def verify_aut(code: RankMetricCode, group: MonomialAutGroup, chunk: int = 1 << 14) -> bool:
    """Every element maps the code onto itself."""
    ctx = code.ctx
    for s in range(0, group.order, chunk):
        a, b, i = group.a[s:s + chunk], group.b[s:s + chunk], group.i[s:s + chunk]
        for f in code.basis:
            if not contains_all(code, _triple_images(ctx, f, a, b, i)):
                return False
    return True


def verify_isometries(code: RankMetricCode, isos) -> bool:
    for iso in isos:
        if not sets_equal(apply_isometry(code, iso), code):
            return False
    return True


# --------------------------------------------------------------------------
# brute force


@dataclass
class BruteAutResult:
    order: int
    elements: list  # (g codes, h codes, rho) triples, sorted
    candidates: int


def invertible_polys(ctx: FieldCtx) -> list[LinearizedPoly]:
    """All of GL(n, q) as linearized polynomials (coefficient codes in lex order)."""
    from .rankcode import full_space, rank_stream

    full = full_space(ctx)
    D = full.fp_dim
    # rank_stream index m has base-p digit t = coefficient of basis vector t
    ranks = np.concatenate(list(rank_stream(full.fp_matrices(), ctx.p, ctx.e)))
    out = []
    for pos in np.nonzero(ranks == ctx.n)[0]:
        c = np.array([(int(pos) // ctx.p**t) % ctx.p for t in range(D)], dtype=np.int64)
        out.append(LinearizedPoly.from_vector(ctx, c @ full.fp_basis % ctx.p))
    out.sort(key=lambda f: f.codes)
    return out


def brute_force_aut(code: RankMetricCode, extend_rho: bool = False, work_bound: int | None = None) -> BruteAutResult:
    """All (A, B, rho) with A o C^rho o B = C, A, B in GL(n, q).

    For each (rho, B) the admissible A form the invertible part of an F_p-space
    {A : A o f^rho o B in C for all basis f}, which is solved directly.
    """
    ctx = code.ctx
    bound = DEFAULT_WORK_BOUND if work_bound is None else work_bound
    n_gl = _gl_order(ctx.q, ctx.n)
    rhos = list(range(ctx.degree)) if extend_rho else list(range(ctx.e))
    cand = n_gl * n_gl * len(rhos)
    if cand > bound:
        raise WorkBoundExceeded(f"{cand} candidates exceed the work bound {bound}",
                                report={"candidates": cand, "bound": bound})
    GL = invertible_polys(ctx)
    gl_keys = {f.codes for f in GL}
    dom = _basis_polys(ctx)
    elements = []
    for rho in rhos:
        images_rho = [b.coefficient_power(rho) for b in code.basis]
        for B in GL:
            factors = [compose(f, B) for f in images_rho]
            sol = _solve_composition(code, factors, "left", dom)
            for A in _enumerate_span(ctx, sol):
                if A.codes in gl_keys:
                    elements.append((A.codes, B.codes, rho))
    elements.sort()
    return BruteAutResult(len(elements), elements, cand)


def _enumerate_span(ctx: FieldCtx, rows: np.ndarray):
    p = ctx.p
    D = rows.shape[0]
    if D == 0:
        yield LinearizedPoly.zero(ctx)
        return
    for m in range(p**D):
        c = np.array([(m // p**t) % p for t in range(D)], dtype=np.int64)
        yield LinearizedPoly.from_vector(ctx, c @ rows % p)


def _gl_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def predicted_pairs(group: MonomialAutGroup) -> set:
    """Predicted triples as (g codes, h codes, rho) with rho restricted to multiples of e
    folded into g, h (valid when every i is a multiple of e, e.g. e = 1)."""
    ctx = group.ctx
    out = set()
    for a, b, i in zip(group.a.tolist(), group.b.tolist(), group.i.tolist()):
        if i % ctx.e:
            raise ValueError("triple with a non F_q-linear field automorphism")
        j = i // ctx.e
        g = LinearizedPoly.monomial(ctx, j, a)
        h = LinearizedPoly.monomial(ctx, (ctx.n - j) % ctx.n, b)
        out.add((g.codes, h.codes, 0))
    return out


# --------------------------------------------------------------------------
# equivalence of twisted codes


@dataclass
class EquivalenceResult:
    equivalent: bool
    witness: Isometry | None = None
    witness_triple: tuple | None = None
    verified: bool = False
    heuristic: bool = False
    reason: str = ""

    def __bool__(self):
        return self.equivalent

    def to_json(self) -> dict:
        d = {"equivalent": self.equivalent, "verified": self.verified, "reason": self.reason}
        if self.witness_triple is not None:
            d["witness"] = list(self.witness_triple)
        if self.heuristic:
            d["scope"] = "heuristic - outside theorem scope"
        return d


def twisted_equivalent(ctx: FieldCtx, k: int, spec1: tuple, spec2: tuple, verify: bool = True) -> EquivalenceResult:
    """H_k(eta, h) ~ H_k(nu, j) iff j = h and nu = a^{1-q^h}(b^{q^k-q^h})^{p^i} eta^{p^i}."""
    eta, h = spec1
    nu, j = spec2
    eta = eta if isinstance(eta, FFElement) else ctx.element(eta)
    nu = nu if isinstance(nu, FFElement) else ctx.element(nu)
    n = ctx.n
    heuristic = k in (1, n - 1)
    for e_, lbl in ((eta, "eta"), (nu, "nu")):
        if not e_:
            raise EtaZero(f"{lbl} = 0 is outside the twisted case")
        if not admissible_eta(ctx, k, e_):
            raise InadmissibleEta(f"{lbl} is inadmissible")
    if h % n != j % n:
        return EquivalenceResult(False, heuristic=heuristic, reason="h != j")
    spec = TwistSpec(k, eta, h % n)
    sol = _twist_condition_solutions(ctx, spec, nu.value, _i_values(ctx, "full"), first_only=True)
    if not sol:
        return EquivalenceResult(False, heuristic=heuristic, reason="no (a, b, i) solves the norm equation")
    la, lb, i = sol[0]
    a, b = ctx._pow(ctx.alpha_code, la), ctx._pow(ctx.alpha_code, lb)
    iso = Isometry.from_triple(ctx, a, b, i)
    verified = False
    if verify:
        c1 = twisted(ctx, spec, verify=False)
        c2 = twisted(ctx, TwistSpec(k, nu, j % n), verify=False)
        verified = sets_equal(apply_isometry(c1, iso), c2)
    return EquivalenceResult(True, iso, (la, lb, i), verified, heuristic, "solution found")


# --------------------------------------------------------------------------
# Gabidulin subcodes


@dataclass
class SubspaceHit:
    code: RankMetricCode
    f: LinearizedPoly
    g: LinearizedPoly


def gabidulin_degree(code: RankMetricCode) -> int:
    """Smallest K with code contained in G_K (support only in degrees < K)."""
    return max((b.qdegree() for b in code.basis), default=-1) + 1


def _gr_generators(ctx: FieldCtx, r: int) -> list[LinearizedPoly]:
    return [LinearizedPoly.monomial(ctx, i, ctx._pow(ctx.alpha_code, jj)) for i in range(r) for jj in range(ctx.n)]


def gabidulin_subspaces(ambient: RankMetricCode, r: int, work_bound: int | None = None) -> list[SubspaceHit]:
    """Distinct subcodes G_r^{(f,g)} = {f o a o g : a in G_r} of the ambient code.

    Pairs satisfy f_0 = 1 and deg f + deg g <= K - r where ambient <= G_K.
    For each degree split the side with the smaller budget is enumerated and
    the other side is solved as a linear system.
    """
    ctx = ambient.ctx
    bound = DEFAULT_WORK_BOUND if work_bound is None else work_bound
    K = gabidulin_degree(ambient)
    B = K - r
    if B < 0 or r < 1:
        return []
    gr = _gr_generators(ctx, r)
    found: dict[bytes, SubspaceHit] = {}
    work = 0
    Q = ctx.order

    def record(f, g):
        if not (is_invertible(f) and is_invertible(g)):
            return
        sub = make_code(ctx, ctx.e, [compose(compose(f, a), g) for a in gr])
        if not contains_all(ambient, sub.fp_basis):
            return
        key = gfp.row_basis(sub.fp_basis, ctx.p).tobytes()
        found.setdefault(key, SubspaceHit(sub, f, g))

    for d1 in range(B + 1):
        d2 = B - d1
        if d1 <= d2:
            # enumerate f = x + f_1 x^q + ... + f_{d1} x^{q^{d1}}, solve g of degree <= d2
            count = Q**d1
            work += count
            if work > bound:
                raise WorkBoundExceeded("gabidulin_subspaces work bound", report={"work": work})
            dom = [LinearizedPoly.monomial(ctx, jj, ctx.p**t) for jj in range(d2 + 1) for t in range(ctx.degree)]
            for m in range(count):
                tail = [(m // Q**t) % Q for t in range(d1)]
                f = LinearizedPoly(ctx, [1] + tail)
                factors = [compose(f, a) for a in gr]
                sol = _solve_composition(ambient, factors, "right", dom)
                work += ctx.p ** sol.shape[0]
                if work > bound:
                    raise WorkBoundExceeded("gabidulin_subspaces work bound", report={"work": work})
                for gv in _span_vectors(ctx.p, sol):
                    if gv.any():
                        g = _from_dom(ctx, dom, gv)
                        record(f, g)
        else:
            # enumerate g with lowest nonzero coefficient 1, solve affine f with f_0 = 1
            for g in _normalised_polys(ctx, d2):
                work += 1
                if work > bound:
                    raise WorkBoundExceeded("gabidulin_subspaces work bound", report={"work": work})
                dom = [LinearizedPoly.monomial(ctx, jj, ctx.p**t) for jj in range(d1 + 1) for t in range(ctx.degree)]
                factors = [compose(a, g) for a in gr]
                sol = _solve_composition(ambient, factors, "left", dom)
                work += ctx.p ** sol.shape[0]
                if work > bound:
                    raise WorkBoundExceeded("gabidulin_subspaces work bound", report={"work": work})
                for fv in _span_vectors(ctx.p, sol):
                    f = _from_dom(ctx, dom, fv)
                    if f.codes[0] == 1:
                        record(f, g)
    hits = sorted(found.items(), key=lambda kv: kv[0])
    return [h for _, h in hits]


def _span_vectors(p: int, rows: np.ndarray):
    D = rows.shape[0]
    for m in range(p**D):
        c = np.array([(m // p**t) % p for t in range(D)], dtype=np.int64)
        yield c @ rows % p if D else np.zeros(rows.shape[1], dtype=np.int64)


def _from_dom(ctx: FieldCtx, dom: list[LinearizedPoly], v: np.ndarray) -> LinearizedPoly:
    # dom is a prefix of the monomial basis p^t x^{q^j}, so v is a truncated F_p vector
    full = np.zeros(ctx.n * ctx.degree, dtype=np.int64)
    full[: len(v)] = v
    return LinearizedPoly.from_vector(ctx, full)


def _normalised_polys(ctx: FieldCtx, d: int):
    """Polynomials of q-degree <= d whose lowest nonzero coefficient is 1."""
    Q = ctx.order
    for low in range(d + 1):
        for m in range(Q ** (d - low)):
            coeffs = [0] * low + [1] + [(m // Q**t) % Q for t in range(d - low)]
            yield LinearizedPoly(ctx, coeffs)
