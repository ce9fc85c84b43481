import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, poly_mod_factor
from rankforge import field as fl
from rankforge.errors import (
    ContextMismatch,
    DivisionByZero,
    LogOfZero,
    NotPrime,
    NotPrimitive,
    ReducibleModulus,
    TableUnavailable,
)
from rankforge.field import FFElement, make_field_ctx


def test_alpha_relation(F81):
    a = F81.alpha
    assert a**4 == a + 1
    assert fl.mul(a, a**3) == a + 1
    # the stated modulus y^4 - y - 1 with alpha = y
    assert F81.alpha.coords == (0, 1, 0, 0)


def test_prime_field_f2():
    F = make_field_ctx(2, 1, 1)
    assert F.order == 2 and F.alpha == F.one


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        make_field_ctx(3, 1, 4, ext_modulus=[1, 0, 0, 0, 1])


def test_y4_plus_1_factor_oracle():
    # frozen factor from exhaustive search: y^2 + y + 2
    assert poly_mod_factor([1, 0, 0, 0, 1], 3, 2) == [2, 1, 1]


def test_not_prime_and_not_primitive():
    with pytest.raises(NotPrime):
        make_field_ctx(4, 1, 2)
    with pytest.raises(NotPrimitive):
        # alpha = 1 has order 1
        make_field_ctx(3, 1, 4, ext_modulus=[-1, -1, 0, 0, 1], alpha_hint=[1, 0, 0, 0])


def test_identities_and_order(F81):
    a = F81.alpha
    assert F81.one.inverse() == F81.one
    x = F81.element(37)
    assert x + F81.zero == x
    assert a**80 == F81.one
    assert all(a**k != F81.one for k in range(1, 80))
    assert a**-1 * a == F81.one


def test_division_by_zero(F81):
    with pytest.raises(DivisionByZero):
        F81.zero.inverse()
    with pytest.raises(ZeroDivisionError):
        F81.one / F81.zero


def test_context_mismatch(F81, F81d):
    with pytest.raises(ContextMismatch):
        F81.alpha + F81d.alpha


def test_frobenius_examples(F81):
    a = F81.alpha
    assert fl.frobenius(a, 1, "q") == a**3
    for x in F81.elements():
        assert fl.frobenius(x, 4, "q") == x


def test_frobenius_tower_levels(F16_tower):
    F = F16_tower
    for x in F.elements():
        assert fl.frobenius(x, 1, "q") == x**4
        assert fl.frobenius(x, 1, "p") == x**2
        assert fl.frobenius(x, F.e * F.n, "p") == x


def test_norm_trace_examples(F81):
    a = F81.alpha
    assert fl.norm(F81.one) == F81.one
    assert fl.trace_abs(F81.zero) == F81.zero
    assert fl.norm(a) == F81.from_prime(2)
    assert fl.norm(a) == a**40
    assert fl.trace_abs(F81.one) == F81.one


def test_dlog(F81):
    a = F81.alpha
    assert fl.dlog(F81.one) == 0
    assert fl.dlog(a) == 1
    assert fl.dlog(a + 1) == 4
    for x in F81.nonzero_elements():
        assert a ** fl.dlog(x) == x
    with pytest.raises(LogOfZero):
        fl.dlog(F81.zero)


def test_table_cap():
    F = make_field_ctx(2, 1, 6, table_cap=32)
    x = F.element(5)
    with pytest.raises(TableUnavailable):
        fl.dlog(x)
    # arithmetic still works without tables
    assert x * x.inverse() == F.one
    assert F.format(x).startswith("[")


@pytest.mark.parametrize("args", [(2, 1, 4), (3, 1, 4), (2, 2, 2), (3, 2, 2), (5, 1, 2), (2, 3, 2)])
def test_arithmetic_against_oracle(args):
    F = make_field_ctx(*args)
    O = NaiveField.like(F)
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b = (int(v) for v in rng.integers(0, F.order, 2))
        x, y = F.element(a), F.element(b)
        assert (x * y).value == O.mul(a, b)
        assert (x + y).value == O.add(a, b)
        assert (x - y).value == O.sub(a, b)
        assert fl.norm(x).value == O.norm(a)
        assert fl.trace_abs(x).value == O.trace_abs(a)
        if a:
            assert x.inverse().value == O.inv(a)
    assert O.mult_order(F.alpha.value) == F.order - 1


def test_moduli_irreducible_by_oracle(F81, F16):
    for F in (F81, F16):
        ext = [c % F.p for c in F.ext_modulus]
        for d in range(1, F.n // 2 + 1):
            assert poly_mod_factor(ext, F.p, d) is None


def test_lexicographic_default_modulus():
    # oracle: first irreducible monic quartic over F_2, tuples (c0, c1, c2, c3) in lex order
    import itertools

    first = next(
        list(c) + [1]
        for c in itertools.product(range(2), repeat=4)
        if all(poly_mod_factor(list(c) + [1], 2, d) is None for d in (1, 2))
    )
    assert first == [1, 0, 0, 1, 1]
    F = make_field_ctx(2, 1, 4)
    assert list(F.ext_modulus) == first
    assert F.alpha.value == 2


def test_deterministic_construction():
    a = make_field_ctx(3, 1, 3)
    b = fl._make_field_ctx.__wrapped__(3, 1, 3, None, None, None, fl.DEFAULT_TABLE_CAP)
    assert a == b
    assert np.array_equal(a._exp, b._exp) and np.array_equal(a._log, b._log)


def test_exhaustive_invariants_f81(F81):
    els = list(F81.elements())
    codes = np.array([x.value for x in els])
    prod = F81.vmul(codes[:, None], codes[None, :])
    Nx = F81.vnorm(codes)
    assert np.array_equal(F81.vnorm(prod), F81.vmul(Nx[:, None], Nx[None, :]))
    # traces are onto the subfields
    assert {fl.trace_rel(x).value for x in els} == {x.value for x in F81.fq_elements()}
    assert {fl.trace_abs(x).value for x in els} == {0, 1, 2}
    for x in els[1:]:
        assert x * x.inverse() == F81.one


def test_vector_ops_match_scalar(F16_tower):
    F = F16_tower
    a = np.arange(F.order)
    for k in (0, 1, 2, 3):
        assert all(int(v) == (F.element(int(x)) ** k).value for x, v in zip(a, F.vpow(a, k)))
    assert all(int(v) == fl.frobenius(F.element(int(x)), 1, "p").value for x, v in zip(a, F.vfrob(a, 1, "p")))


elem81 = st.integers(0, 80)


@settings(max_examples=100, deadline=None)
@given(elem81, elem81, st.integers(-6, 6), st.integers(-6, 6))
def test_frobenius_homomorphism(a, b, i, j):
    F = fl.paper_field("stated")
    x, y = F.element(a), F.element(b)
    assert fl.frobenius(x + y, i) == fl.frobenius(x, i) + fl.frobenius(y, i)
    assert fl.frobenius(x * y, i) == fl.frobenius(x, i) * fl.frobenius(y, i)
    assert fl.frobenius(fl.frobenius(x, i), j) == fl.frobenius(x, i + j)


def test_text_and_json_round_trip(F81, F16_tower):
    for F in (F81, F16_tower):
        for x in F.elements():
            assert F.parse(F.format(x)) == x
        assert fl.field_from_json(F.to_json()) == F
    assert F81.format(F81.alpha ** 5) == "a^5"
    assert F81.parse("[0,1,0,0]") == F81.alpha


def test_element_from_wrong_range(F81):
    with pytest.raises(ValueError):
        F81.element(81)
    assert isinstance(F81.element(3), FFElement)
