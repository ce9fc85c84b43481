"""Generalised Gabidulin, twisted Gabidulin and two-functional twisted codes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadK, InadmissibleEta, InadmissiblePair, StrideNotCoprime
from .field import FFElement, FieldCtx, norm
from .linpoly import LinearizedPoly, evaluate_many
from .rankcode import DEFAULT_ENUM_CAP, RankMetricCode, is_mrd, make_code

_VERDICTS: dict = {}


def _attach_verdict(code: RankMetricCode, key, verify: bool, cap: int) -> RankMetricCode:
    if not verify:
        code.metadata["verdict"] = "unverified"
        return code
    if code.size > cap:
        code.metadata["verdict"] = "unverified"
        return code
    if key not in _VERDICTS:
        _VERDICTS[key] = is_mrd(code, cap=cap)
    code.metadata["verdict"] = _VERDICTS[key]
    return code


def _check_stride(ctx: FieldCtx, s: int):
    if math.gcd(s, ctx.n) != 1:
        raise StrideNotCoprime(f"gcd({s}, {ctx.n}) != 1")


def _as_elem(ctx: FieldCtx, x) -> FFElement:
    return x if isinstance(x, FFElement) else ctx.element(x)


def minus_one_power(ctx: FieldCtx, k: int) -> FFElement:
    """(-1)^{nk} in F_q."""
    return ctx.one if (ctx.n * k) % 2 == 0 else -ctx.one


def gabidulin(ctx: FieldCtx, k: int, s: int = 1, verify: bool = True, cap: int = DEFAULT_ENUM_CAP) -> RankMetricCode:
    """G_{k,s}, spanned over F_q by alpha^j x^{q^{si}} (i < k outer, j < n inner)."""
    n = ctx.n
    if not 1 <= k <= n:
        raise BadK(f"k must satisfy 1 <= k <= n = {n}, got {k}")
    _check_stride(ctx, s)
    gens = [LinearizedPoly.monomial(ctx, s * i, ctx._pow(ctx.alpha_code, j)) for i in range(k) for j in range(n)]
    code = make_code(ctx, ctx.e, gens, {"name": f"G[k={k},s={s}]", "k": k, "s": s, "family": "gabidulin"})
    return _attach_verdict(code, ("G", ctx, k, s), verify, cap)


def admissible_eta(ctx: FieldCtx, k: int, eta) -> bool:
    """N(eta) != (-1)^{nk}; eta = 0 is always admissible."""
    eta = _as_elem(ctx, eta)
    if not eta:
        return True
    return norm(eta) != minus_one_power(ctx, k)


@dataclass(frozen=True)
class TwistSpec:
    k: int
    eta: FFElement
    h: int
    s: int = 1

    def label(self) -> str:
        ctx = self.eta.ctx
        return f"H[k={self.k},s={self.s},eta={ctx.format(self.eta)},h={self.h % ctx.n}]"


def twist_spec(ctx: FieldCtx, k: int, eta, h: int, s: int = 1) -> TwistSpec:
    return TwistSpec(k, _as_elem(ctx, eta), h % ctx.n, s)


def twist_generators(ctx: FieldCtx, spec: TwistSpec) -> list[LinearizedPoly]:
    """Twisted generators alpha^j x + eta (alpha^j)^{q^{sh}} x^{q^{sk}} first, then the middle terms."""
    n, k, s = ctx.n, spec.k, spec.s
    eta = spec.eta.value
    gens = []
    for j in range(n):
        a = ctx._pow(ctx.alpha_code, j)
        coeffs = [0] * n
        coeffs[0] = a
        top = (s * k) % n
        coeffs[top] = ctx._add(coeffs[top], ctx._mul(eta, ctx._frob(a, s * spec.h)))
        gens.append(LinearizedPoly(ctx, coeffs))
    for i in range(1, k):
        for j in range(n):
            gens.append(LinearizedPoly.monomial(ctx, s * i, ctx._pow(ctx.alpha_code, j)))
    return gens


def twisted(ctx: FieldCtx, spec: TwistSpec, verify: bool = True, cap: int = DEFAULT_ENUM_CAP) -> RankMetricCode:
    """H_k(eta, h; s): f_{sk} = eta f_0^{q^{sh}}, f_{si} free for 0 < i < k."""
    n, k = ctx.n, spec.k
    if not 1 <= k <= n - 1:
        raise BadK(f"twisted codes need 1 <= k <= n-1 = {n - 1}, got {k}")
    _check_stride(ctx, spec.s)
    ctx.check(spec.eta.ctx)
    if not admissible_eta(ctx, k, spec.eta):
        raise InadmissibleEta(f"N(eta) = (-1)^(nk) for eta = {spec.eta}")
    meta = {"name": spec.label(), "k": k, "s": spec.s, "h": spec.h % n, "eta": spec.eta.value, "family": "twisted"}
    code = make_code(ctx, ctx.e, twist_generators(ctx, spec), meta)
    return _attach_verdict(code, ("H", ctx, k, spec.s, spec.eta.value, spec.h % n), verify, cap)


def twisted_member(ctx: FieldCtx, spec: TwistSpec, f: LinearizedPoly) -> bool:
    """Direct membership predicate for H_k(eta, h; s)."""
    n, k, s = ctx.n, spec.k, spec.s
    support = {(s * i) % n for i in range(1, k)}
    top = (s * k) % n
    for i, c in enumerate(f.codes):
        if i == 0 or i == top or i in support:
            continue
        if c:
            return False
    return f.codes[top] == ctx._mul(spec.eta.value, ctx._frob(f.codes[0], s * spec.h))


@dataclass(frozen=True)
class FunctionalPair:
    phi1: LinearizedPoly
    phi2: LinearizedPoly


def pair_witness(ctx: FieldCtx, k: int, pair: FunctionalPair):
    """First nonzero x (by code) with N(phi1(x)) = (-1)^{kn} N(phi2(x)), or None."""
    xs = np.arange(1, ctx.order, dtype=np.int64)
    n1 = ctx.vnorm(evaluate_many(pair.phi1, xs))
    n2 = ctx.vnorm(evaluate_many(pair.phi2, xs))
    if (ctx.n * k) % 2:
        n2 = ctx.vneg(n2)
    bad = np.nonzero(n1 == n2)[0]
    return FFElement(ctx, int(xs[bad[0]])) if bad.size else None


def general_twisted(ctx: FieldCtx, k: int, pair: FunctionalPair, verify: bool = True,
                    cap: int = DEFAULT_ENUM_CAP) -> RankMetricCode:
    """{phi1(a) x + f_1 x^q + ... + f_{k-1} x^{q^{k-1}} + phi2(a) x^{q^k}}."""
    n = ctx.n
    if not 1 <= k <= n - 1:
        raise BadK(f"need 1 <= k <= n-1, got {k}")
    if pair.phi1.is_zero() and pair.phi2.is_zero():
        raise InadmissiblePair("phi1 and phi2 are both zero", witness=ctx.one)
    w = pair_witness(ctx, k, pair)
    if w is not None:
        raise InadmissiblePair(f"norm condition fails at x = {w}", witness=w)
    gens = []
    for j in range(n):
        a = ctx._pow(ctx.alpha_code, j)
        coeffs = [0] * n
        coeffs[0] = pair.phi1(a).value
        coeffs[k] = ctx._add(coeffs[k], pair.phi2(a).value)
        gens.append(LinearizedPoly(ctx, coeffs))
    for i in range(1, k):
        for j in range(n):
            gens.append(LinearizedPoly.monomial(ctx, i, ctx._pow(ctx.alpha_code, j)))
    meta = {"name": f"Hgen[k={k},phi1={pair.phi1},phi2={pair.phi2}]", "k": k, "family": "general_twisted"}
    code = make_code(ctx, ctx.e, gens, meta)
    return _attach_verdict(code, ("Hgen", ctx, k, pair.phi1.codes, pair.phi2.codes), verify, cap)
