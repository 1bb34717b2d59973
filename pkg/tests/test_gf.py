from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from seqcover.gf import (
    FieldError,
    FieldMismatchError,
    gf_add,
    gf_build,
    gf_discrete_log,
    gf_field,
    gf_inv,
    gf_mul,
    gf_neg,
    gf_pow,
    gf_sub,
    is_prime_power,
    prime_power,
    primitive_root,
)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def naive_mulmod(a, b, modulus, p):
    """Schoolbook product of low-first coefficient lists reduced by a high-first monic modulus."""
    m = len(modulus) - 1
    prod = [0] * (2 * m)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    low = list(reversed(modulus))
    for d in range(2 * m - 1, m - 1, -1):
        c = prod[d] % p
        for k in range(m + 1):
            prod[d - m + k] -= c * low[k]
    return tuple(c % p for c in prod[:m])


def multiplicative_order(poly_low, modulus, p):
    m = len(modulus) - 1
    one = (1,) + (0,) * (m - 1)
    cur, k = tuple(poly_low), 1
    while cur != one:
        cur = naive_mulmod(cur, poly_low, modulus, p)
        k += 1
        if k > p**m:
            return None
    return k


def test_gf4_modulus_and_primitive():
    f = gf_build(2, 2)
    assert f.modulus == (1, 1, 1)
    assert f.primitive.coeffs == (0, 1)


def test_gf27_generator_order():
    f = gf_build(3, 3)
    x = (0, 1, 0)
    assert multiplicative_order(x, f.modulus, 3) == 26


def test_gf2_is_trivial_group():
    f = gf_build(2, 1)
    assert f.primitive.coeffs == (1,)
    assert f.elements() == [f.zero(), f.one()]


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_modulus_is_least_primitive(p, m):
    f = gf_build(p, m)
    x = sympy.symbols("x")
    for tail in product(range(p), repeat=m):
        coeffs = (1,) + tail
        poly = sympy.Poly(list(coeffs), x, modulus=p)
        if tail[-1] == 0 or not poly.is_irreducible:
            continue
        if multiplicative_order((0, 1) + (0,) * (m - 2), coeffs, p) == p**m - 1:
            assert f.modulus == coeffs
            return
    pytest.fail("no primitive polynomial found")


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_prime_field_uses_least_primitive_root(p):
    g = primitive_root(p)
    assert sorted(pow(g, k, p) for k in range(p - 1)) == list(range(1, p))
    assert all(len({pow(h, k, p) for k in range(p - 1)}) < p - 1 for h in range(2, g))
    assert gf_build(p, 1).primitive.coeffs == (g,)


def test_documented_products():
    f4 = gf_build(2, 2)
    x, x1 = f4.element((0, 1)), f4.element((1, 1))
    assert gf_mul(x, x, f4) == x1
    assert gf_inv(x, f4) == x1
    assert gf_discrete_log(x1, f4) == 2
    f5 = gf_build(5)
    assert gf_mul(f5.element((2,)), f5.element((4,)), f5) == f5.element((3,))
    assert gf_inv(f5.element((2,)), f5) == f5.element((3,))
    f2 = gf_build(2)
    assert gf_mul(f2.one(), f2.one(), f2) == f2.one()


@pytest.mark.parametrize("q", SMALL_Q)
def test_multiplication_matches_schoolbook(q):
    f = gf_field(q)
    els = f.elements()
    for a in els:
        for b in els:
            assert gf_mul(a, b, f).coeffs == naive_mulmod(a.coeffs, b.coeffs, f.modulus, f.p)


@pytest.mark.parametrize("q", SMALL_Q)
def test_order_tables_agree_with_element_ops(q):
    f = gf_field(q)
    t = f.order_tables
    for i, j in product(range(q), repeat=2):
        a, b = f.from_order(i), f.from_order(j)
        assert f.to_order(gf_add(a, b, f)) == t.add[i, j]
        assert f.to_order(gf_mul(a, b, f)) == t.mul[i, j]
    for i in range(1, q):
        assert t.mul[i, t.inv[i]] == 1
        assert t.add[i, t.neg[i]] == 0


@pytest.mark.parametrize("q", SMALL_Q)
def test_encodings_round_trip(q):
    f = gf_field(q)
    assert [f.to_int(f.from_int(c)) for c in range(q)] == list(range(q))
    assert [f.to_order(f.from_order(k)) for k in range(q)] == list(range(q))
    assert f.to_order(f.zero()) == 0 and f.to_order(f.one()) == 1


def _field_and_elements(draw_q=st.sampled_from(SMALL_Q)):
    @st.composite
    def strat(draw):
        q = draw(draw_q)
        f = gf_field(q)
        codes = draw(st.lists(st.integers(0, q - 1), min_size=3, max_size=3))
        return f, [f.from_int(c) for c in codes]

    return strat()


@settings(max_examples=300, deadline=None)
@given(_field_and_elements())
def test_field_axioms(data):
    f, (a, b, c) = data
    assert gf_add(a, b, f) == gf_add(b, a, f)
    assert gf_mul(a, b, f) == gf_mul(b, a, f)
    assert gf_mul(a, gf_mul(b, c, f), f) == gf_mul(gf_mul(a, b, f), c, f)
    assert gf_add(a, gf_add(b, c, f), f) == gf_add(gf_add(a, b, f), c, f)
    assert gf_mul(a, gf_add(b, c, f), f) == gf_add(gf_mul(a, b, f), gf_mul(a, c, f), f)
    assert gf_sub(a, a, f) == f.zero()
    assert gf_add(a, gf_neg(a, f), f) == f.zero()
    if a != f.zero():
        assert gf_mul(a, gf_inv(a, f), f) == f.one()
        k = gf_discrete_log(a, f)
        assert gf_pow(f.primitive, k, f) == a
        assert gf_pow(a, f.q - 1, f) == f.one()


def test_frobenius_is_additive():
    f = gf_field(9)
    for a, b in product(f.elements(), repeat=2):
        assert gf_pow(gf_add(a, b, f), 3, f) == gf_add(gf_pow(a, 3, f), gf_pow(b, 3, f), f)


def test_errors():
    with pytest.raises(FieldError):
        gf_build(4, 1)
    with pytest.raises(FieldError):
        gf_build(2, 0)
    with pytest.raises(FieldError):
        gf_build(2, 21)
    with pytest.raises(FieldError):
        gf_field(6)
    f4, f5 = gf_field(4), gf_field(5)
    with pytest.raises(FieldMismatchError):
        gf_add(f4.one(), f5.one(), f4)
    with pytest.raises(ZeroDivisionError):
        gf_inv(f4.zero(), f4)
    with pytest.raises(ZeroDivisionError):
        gf_discrete_log(f4.zero(), f4)
    with pytest.raises(FieldMismatchError):
        f4.from_order(4)


def test_prime_power_detection():
    assert prime_power(125) == (5, 3)
    assert [q for q in range(2, 30) if is_prime_power(q)] == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29
    ]
    assert not is_prime_power(1)
