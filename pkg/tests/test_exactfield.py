import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from nrbrane.errors import BothZero, SearchBoundExceeded, ZeroPolynomial
from nrbrane.exactfield import (
    Poly,
    field,
    poly_gcd,
    poly_roots,
    poly_xgcd,
    roots_up_to,
    sqrt_ext,
    sqrt_fq,
)

from conftest import desk_poly

F11 = field(11)
F121 = field(11, 2)


def test_roots_of_x2_minus_1():
    assert poly_roots(Poly(11, [-1, 0, 1])) == [F11(1), F11(10)]


def test_roots_of_x():
    for p, k in [(11, 1), (13, 2), (7, 3)]:
        assert poly_roots(Poly.x(p), k) == [field(p)(0)]


def test_x2_minus_2_needs_quadratic_extension():
    q = Poly(11, [-2, 0, 1])
    assert poly_roots(q, 1) == []
    roots = poly_roots(q, 2)
    assert len(roots) == 2
    assert all(r.degree == 2 and r * r == F11(2) for r in roots)


def test_root_multiplicity():
    q = Poly(11, [-3, 1]) ** 3 * Poly(11, [1, 1])
    assert poly_roots(q) == [F11(3)] * 3 + [F11(10)]


def test_roots_errors():
    with pytest.raises(ZeroPolynomial):
        poly_roots(Poly(11))
    with pytest.raises(SearchBoundExceeded):
        poly_roots(Poly.x(11), 6)


def test_roots_up_to_respects_cap():
    # x^5 + 1 splits over F_{11^2} since 10 divides 11^2 - 1
    q = Poly(11, [1, 0, 0, 0, 0, 1])
    roots = roots_up_to(q, 4)
    assert len(roots) == 5 and all(q(r).is_zero() for r in roots)
    irreducible_cubic = next(
        Poly(11, [c0, c1, 0, 1])
        for c0, c1 in itertools.product(range(1, 11), range(11))
        if not poly_roots(Poly(11, [c0, c1, 0, 1]))
    )
    with pytest.raises(SearchBoundExceeded):
        roots_up_to(irreducible_cubic, 2)
    assert len(roots_up_to(irreducible_cubic, 3)) == 3


def test_sqrt_examples():
    assert sqrt_fq(F11(0)) == (F11(0),)
    assert sqrt_fq(F11(4)) == (F11(2), F11(9))
    assert sqrt_fq(F11(2)) is None


def test_sqrt_residues_match_exhaustive_table():
    squares = {x * x % 11 for x in range(11)}
    for a in range(11):
        assert (sqrt_fq(F11(a)) is not None) == (a in squares)


def test_sqrt_ext_goes_up_one_level():
    r = sqrt_ext(F11(2), 2)
    assert all(x * x == F11(2) and x.degree == 2 for x in r)
    with pytest.raises(SearchBoundExceeded):
        sqrt_ext(F11(2), 1)


def test_gcd_examples():
    q = Poly(11, [3, 0, 2])
    assert poly_gcd(q, Poly(11)) == q.monic()
    assert poly_gcd(Poly(11, [-1, 0, 1]), Poly(11, [-1, 1])) == Poly(11, [-1, 1])
    f = desk_poly(11, 5)
    assert poly_gcd(f, f.derivative()) == Poly(11, [1])
    with pytest.raises(BothZero):
        poly_gcd(Poly(11), Poly(11))


def test_xgcd_bezout():
    a = Poly(13, [1, 2, 3, 4])
    b = Poly(13, [5, 0, 1])
    d, s, t = poly_xgcd(a, b)
    assert s * a + t * b == d


def test_subfield_elements_compare_equal_across_fields():
    a = F121(F11(3))
    assert a == F11(3) and hash(a) == hash(F11(3))
    assert a.degree == 1


def _schoolbook_mul(p, n, mod, a, b):
    # schoolbook product of coordinate vectors modulo the monic modulus
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return prod[:n]


def test_extension_multiplication_matches_schoolbook():
    from nrbrane.exactfield import _modulus

    for p, n in [(11, 2), (13, 4)]:
        F = field(p, n)
        mod = _modulus(p, n)
        els = list(F.elements())
        rnd = random.Random(0)
        for _ in range(200):
            a, b = rnd.choice(els), rnd.choice(els)
            ca, cb = F.coords(F.lift(a)), F.coords(F.lift(b))
            want = _schoolbook_mul(p, n, mod, ca, cb)
            got = F.coords(F.lift(a * b))
            assert got == want


@st.composite
def elems(draw, p=11, n=2):
    F = field(p, n)
    return F.element(draw(st.integers(0, p**n - 1)))


@settings(max_examples=200, deadline=None)
@given(elems(), elems(), elems())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=200, deadline=None)
@given(elems(13, 4))
def test_sqrt_values_square_back(a):
    r = sqrt_fq(a)
    if r is not None:
        assert all(x * x == a for x in r)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 10), min_size=2, max_size=6))
def test_roots_are_roots(coeffs):
    q = Poly(11, coeffs + [1])
    roots = poly_roots(q, 2)
    assert all(q(r).is_zero() for r in roots)
    assert len(roots) <= q.degree


def test_subfield_embedding_is_a_ring_map():
    small, big = field(13, 2), field(13, 4)
    rnd = random.Random(1)
    els = list(small.elements())
    for _ in range(200):
        a, b = rnd.choice(els), rnd.choice(els)
        la, lb = big.element(big.lift(a)), big.element(big.lift(b))
        assert big.element(big.lift(a * b)) == la * lb
        assert big.element(big.lift(a + b)) == la + lb


def test_frobenius_fixes_exactly_the_prime_field():
    fixed = [a for a in F121.elements() if a.frobenius() == a]
    assert len(fixed) == 11
