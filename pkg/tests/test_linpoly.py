import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField
from rankforge import linpoly as lp
from rankforge.errors import StrideNotCoprime
from rankforge.field import frobenius, make_field_ctx, norm, paper_field
from rankforge.linpoly import LinearizedPoly, Subspace


def rand_poly(F, rng, deg=None):
    n = F.n if deg is None else deg + 1
    return LinearizedPoly(F, [int(v) for v in rng.integers(0, F.order, n)])


def test_qdegree(F81):
    a = F81.alpha
    x = LinearizedPoly.identity(F81)
    assert lp.qdegree(x) == 0
    assert lp.qdegree(LinearizedPoly(F81, [1, 0, a])) == 2
    assert lp.qdegree(LinearizedPoly.zero(F81)) == -1


def test_evaluate_examples(F81):
    xq = LinearizedPoly.monomial(F81, 1)
    for c in F81.elements():
        assert xq(c) == c**3
    assert xq(F81.alpha) == F81.alpha**3


def test_evaluate_fq_linear_exhaustive(F27):
    rng = np.random.default_rng(1)
    f = rand_poly(F27, rng)
    fq = list(F27.fq_elements())
    els = list(F27.elements())
    for u, v in itertools.product(els[:9], els[9:18]):
        for lam, mu in itertools.product(fq, fq):
            assert f(lam * u + mu * v) == lam * f(u) + mu * f(v)


def test_evaluate_against_oracle(F16_tower):
    O = NaiveField.like(F16_tower)
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = rand_poly(F16_tower, rng)
        xs = np.arange(F16_tower.order)
        got = lp.evaluate_many(f, xs)
        assert [int(g) for g in got] == [O.evaluate(list(f.codes), int(x)) for x in xs]


def test_compose_examples(F81):
    n = F81.n
    a = F81.alpha
    xq = LinearizedPoly.monomial(F81, 1)
    assert xq @ xq == LinearizedPoly.monomial(F81, 2)
    assert LinearizedPoly.monomial(F81, n - 1) @ xq == LinearizedPoly.identity(F81)
    ax = LinearizedPoly.scalar(F81, a)
    assert xq @ ax == LinearizedPoly.monomial(F81, 1, a**3)
    assert ax @ xq == LinearizedPoly.monomial(F81, 1, a)


def test_compose_pointwise(F81):
    rng = np.random.default_rng(3)
    xs = np.arange(F81.order)
    for _ in range(20):
        f, g = rand_poly(F81, rng), rand_poly(F81, rng)
        assert np.array_equal(lp.evaluate_many(f @ g, xs), lp.evaluate_many(f, lp.evaluate_many(g, xs)))


def test_ring_laws(F16_tower):
    rng = np.random.default_rng(4)
    for _ in range(50):
        f, g, h = (rand_poly(F16_tower, rng) for _ in range(3))
        assert (f @ g) @ h == f @ (g @ h)
        assert f @ (g + h) == f @ g + f @ h
        assert (f + g) @ h == f @ h + g @ h


def test_adjoint(F81):
    n = F81.n
    a = F81.alpha
    x = LinearizedPoly.identity(F81)
    assert lp.adjoint(x) == x
    assert lp.adjoint(LinearizedPoly.monomial(F81, 1, a)) == LinearizedPoly.monomial(F81, n - 1, frobenius(a, n - 1))
    rng = np.random.default_rng(5)
    els = np.arange(F81.order)
    for _ in range(100):
        f = rand_poly(F81, rng)
        assert lp.adjoint(lp.adjoint(f)) == f
    for _ in range(10):
        f, g = rand_poly(F81, rng), rand_poly(F81, rng)
        fa = lp.adjoint(f)
        u = els[:, None]
        v = els[None, :]
        lhs = F81.vtrace_abs(F81.vmul(lp.evaluate_many(f, els)[:, None], v))
        rhs = F81.vtrace_abs(F81.vmul(u, lp.evaluate_many(fa, els)[None, :]))
        assert np.array_equal(lhs, rhs)
        assert lp.adjoint(f @ g) == lp.adjoint(g) @ fa
        assert lp.rank(fa) == lp.rank(f)


def test_rank_kernel_examples(F8, F81):
    x = LinearizedPoly.identity(F81)
    assert lp.rank(x) == 4 and lp.kernel(x).dim == 0
    f = LinearizedPoly(F8, [1, 1])
    assert lp.rank(f) == 2
    K = lp.kernel(f)
    assert sorted(e.value for e in K.elements()) == [0, 1]
    tr = LinearizedPoly(F81, [1, 1, 1, 1])
    assert lp.rank(tr) == 1


def test_rank_against_oracle(F81, F16_tower):
    for F in (F81, F16_tower):
        O = NaiveField.like(F)
        rng = np.random.default_rng(6)
        for _ in range(40):
            f = rand_poly(F, rng, deg=int(rng.integers(0, F.n)))
            r = lp.rank(f)
            assert r == O.rank(list(f.codes))
            assert F.q ** (F.n - r) == O.kernel_size(list(f.codes))


def test_rank_degree_bound_exhaustive_f16(F16):
    # every nonzero f of q-degree <= 2 at q = 2, n = 4: n - deg <= rank <= n
    from rankforge.rankcode import rank_stream
    from rankforge.linpoly import eval_tensor

    T = eval_tensor(F16)
    L = 3 * F16.degree  # coefficients f_0, f_1, f_2
    ranks = np.concatenate(list(rank_stream(T[:L], 2)))
    idx = np.arange(len(ranks))
    f0, f1, f2 = idx % 16, (idx // 16) % 16, idx // 256
    deg = np.where(f2 > 0, 2, np.where(f1 > 0, 1, np.where(f0 > 0, 0, -1)))
    nz = deg >= 0
    assert np.all(ranks[nz] >= 4 - deg[nz]) and np.all(ranks <= 4)


def test_rank_of_composition(F27):
    rng = np.random.default_rng(8)
    for _ in range(30):
        f, g = rand_poly(F27, rng, 1), rand_poly(F27, rng, 1)
        assert lp.rank(f @ g) <= min(lp.rank(f), lp.rank(g))
        if lp.is_invertible(g):
            assert lp.rank(f @ g) == lp.rank(f)
            assert lp.inverse(g) @ g == LinearizedPoly.identity(F27)


def test_from_stride(F81):
    a, b = F81.alpha, F81.alpha**2
    assert lp.from_stride(F81, [a], 3) == LinearizedPoly.scalar(F81, a)
    assert lp.from_stride(F81, [a, b], 3) == LinearizedPoly(F81, [a, 0, 0, b])
    with pytest.raises(StrideNotCoprime):
        lp.from_stride(F81, [a, b], 2)


def test_minimal_polynomial(F81, F27):
    assert lp.minimal_polynomial(Subspace(F81, [])) == LinearizedPoly.identity(F81)
    U = Subspace(F27, [1])
    assert lp.minimal_polynomial(U) == LinearizedPoly(F27, [F27.from_prime(2), 1])  # x^q - x
    O = NaiveField.like(F27)
    assert [x for x in range(27) if O.evaluate([2, 1], x) == 0] == [0, 1, 2]
    U = Subspace(F81, [F81.one, F81.alpha])
    f = lp.minimal_polynomial(U)
    assert f.qdegree() == 2 and f.codes[2] == 1
    assert len(U.elements()) == 9 and all(f(u) == F81.zero for u in U.elements())


def test_fp_matrix_invertible_round_trip(F16_tower):
    rng = np.random.default_rng(9)
    for _ in range(20):
        f = rand_poly(F16_tower, rng)
        assert lp.from_fp_matrix(F16_tower, f.fp_matrix()) == f


def _norm_identity(F, f, k):
    sign = F.one if (k * F.n) % 2 == 0 else -F.one
    return norm(f[0]) == sign * norm(f[k])


def test_norm_lemma_exhaustive_f16(F16):
    """All 16*16*15 q-degree-2 polynomials at q = 2, n = 4."""
    k = 2
    cases = 0
    converse_witness = None
    for f0, f1, f2 in itertools.product(range(16), range(16), range(1, 16)):
        f = LinearizedPoly(F16, [f0, f1, f2])
        cases += 1
        r = lp.rank(f)
        if r == F16.n - k:
            assert _norm_identity(F16, f, k)
        elif converse_witness is None and _norm_identity(F16, f, k):
            converse_witness = f
    assert cases == 3840
    assert converse_witness is not None and lp.rank(converse_witness) > F16.n - k


def test_text_and_json(F81):
    rng = np.random.default_rng(10)
    for _ in range(30):
        f = rand_poly(F81, rng)
        assert lp.parse_poly(F81, lp.format_poly(f)) == f
        assert lp.poly_from_json(F81, lp.poly_to_json(f)) == f
    assert lp.parse_poly(F81, "x + a*x^9") == LinearizedPoly(F81, [1, 0, F81.alpha])
    assert lp.parse_poly(F81, "a^2*X^q - X") == LinearizedPoly(F81, [F81.from_prime(2), F81.alpha**2])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 80), min_size=4, max_size=4), st.lists(st.integers(0, 80), min_size=4, max_size=4))
def test_rank_sum_bound(c1, c2):
    F = paper_field("stated")
    f, g = LinearizedPoly(F, c1), LinearizedPoly(F, c2)
    assert lp.rank(f + g) <= lp.rank(f) + lp.rank(g)
    assert lp.rank(f) + lp.kernel(f).dim == F.n
