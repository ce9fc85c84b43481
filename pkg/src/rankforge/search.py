"""Backtracking extension of rank-metric codes, maximality and invariant buckets.

Dimensions here count F_p-generators (q0 = p). Vectors of the ambient
space are encoded as integers whose base-p digits are the coefficient
vector of :meth:`LinearizedPoly.to_vector`.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .errors import EnumerationTooLarge, WorkBoundExceeded
from .linpoly import LinearizedPoly, eval_tensor
from .rankcode import (
    RankDistribution,
    RankMetricCode,
    code_from_fp_span,
    is_subcode,
    min_distance,
    rank_distribution,
    rank_stream,
)

DEFAULT_WORK_BOUND = 10**9
TABLE_CAP = 1 << 24


class _Space:
    """Integer-coded F_p^L with a rank lookup table."""

    def __init__(self, ctx, min_dist: int):
        self.ctx = ctx
        self.p = ctx.p
        self.L = ctx.n * ctx.degree
        self.total = self.p**self.L
        if self.total > TABLE_CAP:
            raise EnumerationTooLarge(f"ambient space of size {self.total} is not enumerable (cap {TABLE_CAP})")
        self.pw = self.p ** np.arange(self.L, dtype=np.int64)
        T = eval_tensor(ctx)
        ranks = np.concatenate(list(rank_stream(T, self.p, ctx.e)))
        self.ranks = ranks
        self.good = ranks >= min_dist
        self.good[0] = True  # zero is never a new element

    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self.pw) % self.p

    def encode(self, d) -> np.ndarray:
        return np.asarray(d, dtype=np.int64) @ self.pw

    def add(self, a, b) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.encode((self.digits(a) + self.digits(b)) % self.p)

    def scale(self, c: int, a) -> np.ndarray:
        if c == 1:
            return np.asarray(a, dtype=np.int64)
        return self.encode((c * self.digits(a)) % self.p)

    def span(self, rows: np.ndarray) -> np.ndarray:
        """Integer codes of every F_p-combination of the rows."""
        out = np.zeros(1, dtype=np.int64)
        for r in self.encode(rows % self.p).reshape(-1):
            out = np.concatenate([out] + [self.add(out, self.scale(c, r)) for c in range(1, self.p)])
        return out

    def admissible(self, elems: np.ndarray, cands: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
        """Candidates v with good[c + l v] for every element c and scalar l != 0."""
        ok = np.ones(len(cands), dtype=bool)
        step = max(1, chunk // max(1, len(elems)))
        for s in range(0, len(cands), step):
            block = cands[s:s + step]
            res = np.ones(len(block), dtype=bool)
            for c in range(1, self.p):
                sums = self.add(elems[None, :], self.scale(c, block)[:, None])
                res &= self.good[sums].all(axis=1)
            ok[s:s + step] = res
        return ok

    def canonical(self, R, piv, cands: np.ndarray) -> np.ndarray:
        """Sorted unique coset representatives modulo rowspace(R), leading digit scaled to 1."""
        if len(cands) == 0:
            return cands
        D = gfp.reduce_against(R, piv, self.digits(cands), self.p) if len(piv) else self.digits(cands)
        nz = D.any(axis=1)
        D = D[nz]
        if self.p > 2 and len(D):
            lead = D[np.arange(len(D)), np.argmax(D != 0, axis=1)]
            D = (D * gfp.inv_table(self.p)[lead][:, None]) % self.p
        return np.unique(self.encode(D))


@dataclass
class SearchReport:
    start: str
    target_dim: int
    min_dist: int
    extensions: list = field(default_factory=list)
    maximal: bool = False
    nodes: int = 0
    wall_time: float = 0.0
    work_bound: int = DEFAULT_WORK_BOUND
    work_used: int = 0
    exceeded: bool = False
    pruned: bool = True
    verified: bool = False
    buckets: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "target_dim": self.target_dim,
            "min_dist": self.min_dist,
            "extensions_found": len(self.extensions),
            "maximal": self.maximal,
            "nodes_visited": self.nodes,
            "wall_time": self.wall_time,
            "work_bound": self.work_bound,
            "work_used": self.work_used,
            "exceeded": self.exceeded,
            "pruned": self.pruned,
            "verified": self.verified,
            "buckets": [b.to_json() for b in self.buckets],
        }


def _rref_key(R: np.ndarray) -> bytes:
    return np.ascontiguousarray(R, dtype=np.int8).tobytes()


def extend_code(start: RankMetricCode, target_dim: int, min_dist: int, work_bound: int | None = None,
                prune: bool = True, raise_on_budget: bool = True, verify: bool = True) -> SearchReport:
    """All F_p-linear codes of F_p-dimension target_dim containing start with min distance >= min_dist."""
    t0 = time.perf_counter()
    ctx = start.ctx
    p = ctx.p
    bound = DEFAULT_WORK_BOUND if work_bound is None else int(work_bound)
    report = SearchReport(start=start.metadata.get("name", "code"), target_dim=target_dim, min_dist=min_dist,
                          work_bound=bound, pruned=prune)
    sp = _Space(ctx, min_dist)
    work = sp.total
    elems0 = sp.span(start.fp_basis)
    if not sp.good[elems0[1:]].all():
        raise ValueError(f"start code has minimum distance below {min_dist}")

    ambient = np.arange(sp.total, dtype=np.int64)
    memo: set[bytes] = set()
    found: list[np.ndarray] = []

    class _Stop(Exception):
        pass

    def charge(n):
        nonlocal work
        work += n
        if work > bound:
            raise _Stop

    def candidates_for(R, piv, elems, pool):
        reps = sp.canonical(R, piv, pool)
        charge(len(reps) * len(elems) * (p - 1))
        return reps[sp.admissible(elems, reps)]

    def dfs(rows, elems, cands):
        report.nodes += 1
        if len(rows) == target_dim:
            found.append(rows)
            return
        for g in cands:
            new_rows = np.vstack([rows, sp.digits(g)[None, :]])
            R, piv = gfp.rref(new_rows, p)
            R = R[: len(piv)]
            key = _rref_key(R)
            if key in memo:
                continue
            memo.add(key)
            new_elems = np.concatenate([elems] + [sp.add(elems, sp.scale(c, g)) for c in range(1, p)])
            pool = cands if prune else ambient
            dfs(R, new_elems, candidates_for(R, piv, new_elems, pool))

    R0, piv0 = gfp.rref(start.fp_basis, p) if start.fp_dim else (np.zeros((0, sp.L), dtype=np.int64), [])
    R0 = R0[: len(piv0)]
    try:
        first = candidates_for(R0, piv0, elems0, ambient)
        report.maximal = len(first) == 0
        if start.fp_dim > target_dim:
            raise ValueError("start is larger than the target dimension")
        dfs(R0, elems0, first)
    except _Stop:
        report.exceeded = True
    report.work_used = work
    report.extensions = [code_from_fp_span(ctx, r, metadata={"name": f"extension {i}"}) for i, r in enumerate(found)]
    if verify and report.extensions:
        report.verified = all(
            is_subcode(start, c) and c.fp_dim == target_dim and min_distance(c) >= min_dist for c in report.extensions
        )
        report.buckets = dedup_by_invariants(report.extensions)
    report.wall_time = time.perf_counter() - t0
    if report.exceeded and raise_on_budget:
        raise WorkBoundExceeded(f"work bound {bound} exceeded after {report.nodes} nodes", report=report)
    return report


@dataclass
class MaximalityReport:
    maximal: bool
    certificate: LinearizedPoly | None = None
    work_used: int = 0

    def __bool__(self):
        return self.maximal


def is_maximal(code: RankMetricCode, min_dist: int, work_bound: int | None = None) -> MaximalityReport:
    """No single extra F_p-generator keeps the minimum distance; else the smallest one found."""
    ctx = code.ctx
    bound = DEFAULT_WORK_BOUND if work_bound is None else int(work_bound)
    sp = _Space(ctx, min_dist)
    elems = sp.span(code.fp_basis)
    if not sp.good[elems[1:]].all():
        raise ValueError(f"code has minimum distance below {min_dist}")
    if code.fp_dim:
        R, piv = gfp.rref(code.fp_basis, ctx.p)
        R = R[: len(piv)]
    else:
        R, piv = np.zeros((0, sp.L), dtype=np.int64), []
    reps = sp.canonical(R, piv, np.arange(sp.total, dtype=np.int64))
    work = sp.total + len(reps) * len(elems) * (ctx.p - 1)
    if work > bound:
        raise WorkBoundExceeded(f"single-step scan needs {work} checks")
    ok = np.nonzero(sp.admissible(elems, reps))[0]
    if ok.size == 0:
        return MaximalityReport(True, None, work)
    cert = LinearizedPoly.from_vector(ctx, sp.digits(reps[ok[0]]))
    return MaximalityReport(False, cert, work)


# --------------------------------------------------------------------------
# invariant buckets


@dataclass
class Bucket:
    signature: tuple
    codes: list

    def to_json(self) -> dict:
        dim, dist, ls, rs, ld, rd = self.signature
        return {
            "fp_dim": dim,
            "rank_distribution": dict(dist),
            "left_idealiser_size": ls,
            "right_idealiser_size": rs,
            "left_idealiser_distribution": dict(ld),
            "right_idealiser_distribution": dict(rd),
            "count": len(self.codes),
        }


def _dist_key(d: RankDistribution) -> tuple:
    return tuple(sorted(d.counts.items()))


def invariant_signature(code: RankMetricCode) -> tuple:
    from .equivalence import left_idealiser, right_idealiser

    L, R = left_idealiser(code), right_idealiser(code)
    return (
        code.fp_dim,
        _dist_key(rank_distribution(code)),
        L.size,
        R.size,
        _dist_key(rank_distribution(L)),
        _dist_key(rank_distribution(R)),
    )


def dedup_by_invariants(codes) -> list[Bucket]:
    """Group codes by equivalence invariants. Different buckets are inequivalent; one bucket proves nothing."""
    out: dict[tuple, Bucket] = {}
    for c in codes:
        sig = invariant_signature(c)
        out.setdefault(sig, Bucket(sig, [])).codes.append(c)
    return list(out.values())
