import numpy as np
import pytest

from rankforge import rankcode as rc
from rankforge.constructions import gabidulin, twist_spec, twisted
from rankforge.equivalence import apply_isometry, random_isometry
from rankforge.errors import EnumerationTooLarge, WorkBoundExceeded
from rankforge.linpoly import LinearizedPoly
from rankforge.search import dedup_by_invariants, extend_code, invariant_signature, is_maximal

G2_SIG_16_DIST = ((0, 1), (3, 225), (4, 30))


def span_x(F):
    return rc.make_code(F, 1, [LinearizedPoly.identity(F)])


def test_extend_already_at_target(F16):
    G2 = gabidulin(F16, 2, verify=False)
    r = extend_code(G2, 8, 3)
    assert len(r.extensions) == 1 and rc.sets_equal(r.extensions[0], G2)
    assert r.verified


def test_extend_g1_to_mrd(F16):
    G1 = gabidulin(F16, 1, verify=False)
    G2 = gabidulin(F16, 2, verify=False)
    r = extend_code(G1, 8, 3)
    assert not r.exceeded and r.verified
    assert len(r.extensions) == 2 and r.nodes == 133
    assert any(rc.sets_equal(c, G2) for c in r.extensions)
    assert len(r.buckets) == 1 and r.buckets[0].signature == invariant_signature(G2)
    assert r.buckets[0].signature[1] == G2_SIG_16_DIST
    j = r.to_json()
    assert j["extensions_found"] == 2 and j["buckets"][0]["left_idealiser_size"] == 16


def test_extend_deterministic(F16):
    G1 = gabidulin(F16, 1, verify=False)
    a = extend_code(G1, 8, 3, verify=False)
    b = extend_code(G1, 8, 3, verify=False)
    assert (a.nodes, a.work_used) == (b.nodes, b.work_used)
    assert [c.fp_basis.tolist() for c in a.extensions] == [c.fp_basis.tolist() for c in b.extensions]


def test_extend_budget(F16):
    G1 = gabidulin(F16, 1, verify=False)
    with pytest.raises(WorkBoundExceeded) as ei:
        extend_code(G1, 8, 3, work_bound=70000)
    assert ei.value.report.exceeded
    r = extend_code(G1, 8, 3, work_bound=70000, raise_on_budget=False)
    assert r.exceeded and r.work_used > 70000


def test_extend_rejects_bad_start(F16):
    with pytest.raises(ValueError):
        extend_code(gabidulin(F16, 2, verify=False), 9, 4)


@pytest.mark.parametrize("dim,d,count", [(3, 2, 5622), (2, 3, 24), (3, 3, 8)])
def test_pruning_sound(F8, dim, d, count):
    start = span_x(F8)
    a = extend_code(start, dim, d, verify=False)
    b = extend_code(start, dim, d, prune=False, verify=False)
    key = lambda r: sorted(np.ascontiguousarray(c._rref[0]).tobytes() for c in r.extensions)
    assert key(a) == key(b)
    assert len(set(key(a))) == len(a.extensions) == count


def _spaces_through_x(F, dim, d):
    """F_2-spaces <x, ...> of the given dimension with every nonzero rank >= d, via naive ranks."""
    from itertools import combinations

    from oracles import NaiveField

    O = NaiveField.like(F)
    L = F.n * F.n  # p = 2, e = 1: a polynomial is an n*n bit vector

    def coeffs(v):
        return [sum(((v >> (j * F.n + t)) & 1) << t for t in range(F.n)) for j in range(F.n)]

    rank = [O.rank(coeffs(v)) if v else 0 for v in range(1 << L)]
    x = 1
    ok = [v for v in range(1, 1 << L) if v != x and rank[v] >= d and rank[v ^ x] >= d]
    spaces = set()
    for gens in combinations(ok, dim - 1):
        span = {0}
        for g in (x,) + gens:
            span |= {s ^ g for s in span}
        if len(span) == 1 << dim and all(rank[v] >= d for v in span if v):
            spaces.add(frozenset(span))
    return spaces


@pytest.mark.parametrize("dim,d", [(2, 3), (3, 3), (2, 2)])
def test_extend_results_oracle(F8, dim, d):
    r = extend_code(span_x(F8), dim, d)
    want = _spaces_through_x(F8, dim, d)
    got = set()
    for c in r.extensions:
        got.add(frozenset(int(sum(int(b) << i for i, b in enumerate(w.to_vector()))) for w in rc.codewords(c)))
    assert got == want
    assert r.verified or not want


@pytest.mark.slow
def test_spread_sets_of_order_16(F16):
    # every completion is a semifield spread set; three invariant buckets, as many as isotopy classes
    r = extend_code(span_x(F16), 4, 4)
    assert len(r.extensions) == 19936 and r.verified
    assert len(r.buckets) == 3


def test_is_maximal(F16):
    G1 = gabidulin(F16, 1, verify=False)
    m = is_maximal(G1, 3)
    assert not m and m.certificate == LinearizedPoly.monomial(F16, 1)
    assert rc.contains(gabidulin(F16, 2, verify=False), m.certificate)
    assert is_maximal(gabidulin(F16, 2, verify=False), 3)
    assert is_maximal(rc.full_space(F16), 1)
    with pytest.raises(WorkBoundExceeded):
        is_maximal(G1, 3, work_bound=100)


def test_ambient_cap(F81):
    with pytest.raises(EnumerationTooLarge):
        is_maximal(gabidulin(F81, 1, verify=False), 4)


def test_dedup(F81):
    a = F81.alpha
    G2 = gabidulin(F81, 2, verify=False)
    H0 = twisted(F81, twist_spec(F81, 2, a, 0), verify=False)
    assert len(dedup_by_invariants([G2, H0])) == 2
    rng = np.random.default_rng(6)
    assert len(dedup_by_invariants([H0, apply_isometry(H0, random_isometry(F81, rng))])) == 1
    assert len(dedup_by_invariants([G2, rc.adjoint_code(G2)])) == 1
