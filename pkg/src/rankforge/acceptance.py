"""Acceptance checks 1-10 as plain functions returning result records.

Each ``criterion_N`` returns a :class:`Result`. ``passed`` is the verdict of
the check exactly as worded; where that wording conflicts with computation the
record also carries a ``corrected`` verdict and a note. ``run_all`` is what
``rankforge reproduce-paper --acceptance`` prints.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import rankcode as rc
from . import spreads
from .constructions import admissible_eta, gabidulin, twist_spec, twisted
from .equivalence import (
    apply_isometry,
    brute_force_aut,
    left_idealiser,
    predicted_aut_gabidulin,
    predicted_aut_twisted,
    predicted_pairs,
    random_isometry,
    right_idealiser,
    verify_aut,
)
from .errors import WorkBoundExceeded
from .field import make_field_ctx, norm, paper_field
from .linpoly import LinearizedPoly, rank
from .search import dedup_by_invariants, extend_code, invariant_signature


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    corrected: bool | None = None
    waived: bool = False
    note: str = ""
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else ("WAIVED" if self.waived else "FAIL")
        s = f"criterion {self.number:>2} {status:<6} {self.title} ({self.seconds:.2f}s)"
        if self.corrected is not None:
            s += f" | corrected form: {'PASS' if self.corrected else 'FAIL'}"
        if self.note:
            s += f" | {self.note}"
        return s

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "seconds": self.seconds,
                "corrected": self.corrected, "waived": self.waived, "note": self.note, "details": self.details}


def _timed(fn):
    def wrap(*a, **kw):
        t0 = time.perf_counter()
        r = fn(*a, **kw)
        r.seconds = time.perf_counter() - t0
        return r
    wrap.__name__ = fn.__name__
    wrap.__doc__ = fn.__doc__
    return wrap


# --------------------------------------------------------------------------


@_timed
def criterion_1() -> Result:
    """Worked-example matrices and generator under alpha^4 = alpha + 1, bit-exact, < 1 s."""
    from . import worked_example as we

    t0 = time.perf_counter()
    stated = we.compare(paper_field("stated"))
    elapsed = time.perf_counter() - t0
    keys = ("A", "S", "G2_matrices", "H2_matrices", "G2_generator")
    literal = all(stated["match"][k] for k in keys) and elapsed < 1.0
    displayed = we.compare(paper_field("displayed"))
    diffs = displayed["diffs"]["H2_matrices"]
    # corrected: every item matches under y^4 - y^3 - 1 apart from the single printed typo
    corrected = (all(displayed["match"][k] for k in ("A", "S", "G2_matrices", "G2_generator"))
                 and [(d["item"], d["row"]) for d in diffs] == [("H2 matrix 2", 0)])
    return Result(1, "worked example reproduction", literal, corrected=corrected,
                  note="printed matrices encode y^4 - y^3 - 1, not y^4 - y - 1",
                  details={"stated_match": {k: stated["match"][k] for k in keys},
                           "displayed_match": {k: displayed["match"][k] for k in keys},
                           "displayed_diffs": {k: v for k, v in displayed["diffs"].items() if v},
                           "stated_seconds": elapsed})


def sweep_fields():
    """(p, e, n) with q^n in {8, 16, 27, 32, 64, 81} and n >= 2."""
    out = []
    for order in (8, 16, 27, 32, 64, 81):
        for p in (2, 3):
            m = round(math.log(order, p))
            if p**m != order:
                continue
            for e in range(1, m):
                if m % e == 0:
                    out.append((p, e, m // e))
    return out


def sweep_specs(ctx, cap_log2: int = 24):
    """All (kind, k, s, eta, h) of the grid with q^{nk} <= 2^cap_log2."""
    n, q = ctx.n, ctx.q
    strides = [s for s in range(1, n) if math.gcd(s, n) == 1] or [1]
    etas = [0, ctx.alpha.value, (ctx.alpha**2).value]
    for k in range(1, n):
        if q ** (n * k) > 2**cap_log2:
            continue
        for s in strides:
            yield ("G", k, s, 0, 0)
            for h in range(n):
                for eta in etas:
                    if admissible_eta(ctx, k, eta):
                        yield ("H", k, s, eta, h)


@_timed
def criterion_2(cap_log2: int = 24) -> Result:
    """is_mrd with d = n - k + 1 over the whole grid, exact enumeration."""
    verdicts: dict[bytes, rc.MRDReport] = {}
    checked = distinct = 0
    failures = []
    per_field = {}
    for p, e, n in sweep_fields():
        ctx = make_field_ctx(p, e, n)
        t0 = time.perf_counter()
        count = 0
        for kind, k, s, eta, h in sweep_specs(ctx, cap_log2):
            code = gabidulin(ctx, k, s, verify=False) if kind == "G" else twisted(ctx, twist_spec(ctx, k, eta, h, s), verify=False)
            key = bytes([p, e, n]) + np.ascontiguousarray(code._rref[0], dtype=np.int8).tobytes()
            if key not in verdicts:
                verdicts[key] = rc.is_mrd(code)
                distinct += 1
            r = verdicts[key]
            checked += 1
            count += 1
            if not (r.mrd and r.d == n - k + 1):
                failures.append({"field": [p, e, n], "kind": kind, "k": k, "s": s, "eta": ctx.format(eta), "h": h, "d": r.d})
        per_field[f"{p}^{e * n} (q={ctx.q}, n={n})"] = {"specs": count, "seconds": round(time.perf_counter() - t0, 2)}
    res = Result(2, "MRD sweep", not failures, details={"specs": checked, "distinct_codes": distinct,
                                                          "failures": failures, "per_field": per_field})
    return res


def _dual_literal(ctx, k, eta, h):
    n = ctx.n
    etab = -(eta ** (ctx.q ** (n - h)))
    return twisted(ctx, twist_spec(ctx, n - k, etab, (n - h) % n), verify=False)


@_timed
def criterion_3() -> Result:
    """Dual and adjoint identities at (3, 4)."""
    F = paper_field("stated")
    a = F.alpha
    n = F.n
    a_lit, a_cor = [], []
    for h in range(4):
        D = rc.delsarte_dual(twisted(F, twist_spec(F, 2, a, h), verify=False))
        rhs = _dual_literal(F, 2, a, h)
        a_lit.append(rc.sets_equal(D, rhs))
        a_cor.append(rc.sets_equal(D, rc.right_compose(rhs, LinearizedPoly.monomial(F, 2))))
    b_lit, b_cor = [], []
    for k in (1, 2, 3):
        G = gabidulin(F, k, verify=False)
        adj = rc.adjoint_code(G)
        b_lit.append(rc.sets_equal(rc.left_compose(LinearizedPoly.monomial(F, k), adj), G))
        b_cor.append(rc.sets_equal(rc.left_compose(LinearizedPoly.monomial(F, k - 1), adj), G))
    c = []
    for k in (1, 2, 3):
        r = rc.is_mrd(rc.delsarte_dual(gabidulin(F, k, verify=False)))
        c.append(r.mrd and r.d == k + 1 and r.size == F.q ** (n * (n - k)))
    literal = all(a_lit) and all(b_lit) and all(c)
    corrected = all(a_cor) and all(b_cor) and all(c)
    return Result(3, "dual / adjoint identities", literal, corrected=corrected,
                  note="(a) holds up to o x^{q^k}; (b) holds with x^{q^(k-1)}",
                  details={"a_literal": a_lit, "a_corrected": a_cor, "b_literal": b_lit, "b_corrected": b_cor, "c": c})


@_timed
def criterion_4() -> Result:
    """Rank-(n-k) polynomials of q-degree k satisfy the norm identity; the converse fails somewhere."""
    F = make_field_ctx(2, 1, 4)
    k = 2
    sign = F.one if (k * F.n) % 2 == 0 else -F.one
    cases = violations = 0
    witness = None
    for f0, f1, f2 in itertools.product(range(16), range(16), range(1, 16)):
        f = LinearizedPoly(F, [f0, f1, f2])
        cases += 1
        ident = norm(f[0]) == sign * norm(f[k])
        r = rank(f)
        if r == F.n - k and not ident:
            violations += 1
        if witness is None and ident and r > F.n - k:
            witness = f
    ok = cases == 3840 and violations == 0 and witness is not None
    return Result(4, "coefficient norm lemma", ok,
                  details={"cases": cases, "violations": violations,
                           "converse_witness": None if witness is None else str(witness)})


@_timed
def criterion_5() -> Result:
    """Automorphism groups: brute force at (2,3), predicted groups at (3,4)."""
    F8 = make_field_ctx(2, 1, 3)
    br = brute_force_aut(gabidulin(F8, 1, verify=False))
    pred = predicted_pairs(predicted_aut_gabidulin(F8, 1))
    a_ok = br.order == 147 and set(br.elements) == pred
    F = paper_field("stated")
    a = F.alpha
    b_ok = (verify_aut(gabidulin(F, 2, verify=False), predicted_aut_gabidulin(F, 2))
            and verify_aut(twisted(F, twist_spec(F, 2, a, 1), verify=False),
                           predicted_aut_twisted(F, twist_spec(F, 2, a, 1))))
    orders = {h: predicted_aut_twisted(F, twist_spec(F, 2, a, h)).order for h in range(4) if admissible_eta(F, 2, a)}
    c_ok = bool(orders) and all(o < 25600 for o in orders.values())
    return Result(5, "automorphism groups", a_ok and b_ok and c_ok,
                  details={"brute_order": br.order, "brute_equals_predicted": set(br.elements) == pred,
                           "verify_aut": b_ok, "twisted_orders": orders})


@_timed
def criterion_6(trials: int = 20, seed: int = 0) -> Result:
    """Right idealisers 81 vs 9 separate G_2 and H_2(a,0); sizes survive random isometries."""
    F = paper_field("stated")
    rng = np.random.default_rng(seed)
    G2 = gabidulin(F, 2, verify=False)
    H0 = twisted(F, twist_spec(F, 2, F.alpha, 0), verify=False)
    sizes = {}
    stable = True
    for name, C in (("G2", G2), ("H2(a,0)", H0)):
        base = (left_idealiser(C).size, right_idealiser(C).size)
        sizes[name] = base
        for _ in range(trials):
            D = apply_isometry(C, random_isometry(F, rng))
            stable &= (left_idealiser(D).size, right_idealiser(D).size) == base
    ok = sizes["G2"][1] == 81 and sizes["H2(a,0)"][1] == 9 and stable
    return Result(6, "idealiser distinguishers", ok, details={"sizes": sizes, "invariant": stable})


@_timed
def criterion_7() -> Result:
    """Field spread set and a generalised twisted field at (3,3) land in different buckets."""
    F = make_field_ctx(3, 1, 3)
    G1 = gabidulin(F, 1, verify=False)
    eta = next(F.element(v) for v in range(1, F.order) if norm(-F.element(v)) != F.one)
    gtf = spreads.gtf_mult(F, eta, 2)
    zd = spreads.has_zero_divisors(gtf)
    T = spreads.mult_operator_code(gtf)
    buckets = dedup_by_invariants([G1, T])
    ok = not zd and rc.is_mrd(T).mrd and len(buckets) == 2
    return Result(7, "order-27 semifield buckets", ok,
                  details={"eta": str(eta), "h": 2, "buckets": [b.to_json() for b in buckets]})


@_timed
def criterion_8() -> Result:
    """Scattered families at (3,4) and (2,5): linear set size and MRD scattered codes."""
    rows = []
    ok = True
    for p, n in ((3, 4), (2, 5)):
        F = make_field_ctx(p, 1, n)
        target = (F.order - 1) // (F.q - 1)
        fams = [("x^{q^%d}" % s, LinearizedPoly.monomial(F, s)) for s in range(1, n) if math.gcd(s, n) == 1]
        for v in range(F.order):
            if v == 0 or norm(F.element(v)) == F.one:
                continue
            fams.append((f"x^q + {F.format(v)} x^(q^{n - 1})", LinearizedPoly(F, [0, 1] + [0] * (n - 3) + [v])))
        for name, f in fams:
            sc = bool(spreads.is_scattered(f))
            size = spreads.linear_set_size(f)
            r = rc.is_mrd(spreads.scattered_code(f)) if sc else None
            good = sc and size == target and r.mrd and r.d == n - 1
            ok &= good
        rows.append({"field": [p, n], "polynomials": len(fams), "linear_set_target": target})
    return Result(8, "scattered polynomials", ok,
                  note="at q = 2 no eta has N(eta) != 1, so the binomial family is empty at (2,5)",
                  details={"fields": rows})


@_timed
def criterion_9() -> Result:
    """Lifted G_2 at (2,4): 256 four-dimensional subspaces of F_2^8, min distance 6, < 1 min."""
    F = make_field_ctx(2, 1, 4)
    G2 = gabidulin(F, 2, verify=False)
    subs = spreads.lifted_code(G2)
    distinct = len({s.fp_rows().tobytes() for s in subs})
    d = spreads.lifted_min_distance(G2)
    ok = len(subs) == 256 and distinct == 256 and all(s.dim == 4 for s in subs) and d == 6
    r = Result(9, "lifted Gabidulin code", ok, details={"subspaces": len(subs), "distinct": distinct, "min_distance": d})
    return r


@_timed
def criterion_10(work_bound: int = 10**9) -> Result:
    """Extension search from G_1 at (2,4) to dimension 8, distance 3."""
    F = make_field_ctx(2, 1, 4)
    G1 = gabidulin(F, 1, verify=False)
    G2 = gabidulin(F, 2, verify=False)
    try:
        rep = extend_code(G1, 8, 3, work_bound=work_bound)
    except WorkBoundExceeded as exc:
        return Result(10, "extension search", False, waived=True, note="work bound exceeded; waived",
                      details=exc.report.to_json() if exc.report else {})
    sig = invariant_signature(G2)
    ok = bool(rep.extensions) and rep.verified and all(b.signature == sig for b in rep.buckets)
    return Result(10, "extension search", ok, details=rep.to_json())


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(skip: set[int] | None = None) -> list[Result]:
    skip = skip or set()
    return [fn() for i, fn in enumerate(CRITERIA, start=1) if i not in skip]
