import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2crt.ff import (
    FieldElement,
    FieldError,
    Poly,
    PolyField,
    ZechField,
    is_squarefree,
    make_ext_field,
    poly_roots,
    prime_field,
)

FIELDS = {
    "F43": make_ext_field(43, 1),
    "F43^2": make_ext_field(43, 2),
    "F7^3": make_ext_field(7, 3),
    "F43^5": make_ext_field(43, 5),  # beyond the log-table size: polynomial backend
}


def elements(F, nonzero=False):
    lo = 1 if nonzero else 0
    return st.integers(lo, F.q - 1).map(lambda n: FieldElement(F, F.from_index(n)))


def test_backends():
    assert isinstance(FIELDS["F43^2"], ZechField)
    assert isinstance(FIELDS["F43^5"], PolyField)
    assert isinstance(make_ext_field(43, 4), ZechField)


def test_prime_field_is_trivial_tower():
    F = make_ext_field(43, 1)
    assert F.q == 43 and F.m == 1


def test_f9_modulus():
    F = make_ext_field(3, 2, allow_small_characteristic=True)
    assert tuple(F.modulus) == (1, 0, 1)  # x^2 + 1
    assert F.q == 9


def test_deterministic_modulus():
    assert make_ext_field(43, 4).modulus == make_ext_field(43, 4).modulus


@pytest.mark.parametrize("p", [2, 3, 5, 9])
def test_rejects_small_or_composite(p):
    with pytest.raises(FieldError):
        make_ext_field(p, 1)


def test_h1_roots_vanish():
    F = prime_field(43)
    for x in (36, 20):
        x = F(x)
        assert x * x + F(30) * x + F(32) == F(0)


@pytest.mark.parametrize("coeffs,roots", [([32, 30, 1], {20, 36}), ([10, 42, 1], {21, 23}), ([1, 0, 1], set())])
def test_roots_f43(coeffs, roots):
    F = prime_field(43)
    assert {int(r) for r in poly_roots(Poly(F, coeffs))} == roots


def test_sqrt_edge_cases():
    F = prime_field(43)
    assert F(0).sqrt() == F(0)
    assert F(1).sqrt() ** 2 == F(1)
    assert F(-1).sqrt() is None


def test_squarefree_examples():
    F3 = make_ext_field(3, 1, allow_small_characteristic=True)
    assert is_squarefree(Poly(F3, [0, 1, 0, 0, 0, 1]))
    F43 = prime_field(43)
    assert not is_squarefree(Poly(F43, [0, 0, 1]))
    assert is_squarefree(Poly(F43, [10, 32, 29, 7, 36, 21, 5]))


@pytest.mark.parametrize("name", list(FIELDS))
def test_field_axioms(name):
    F = FIELDS[name]
    rng = random.Random(1)
    for _ in range(1000):
        a, b, c = (FieldElement(F, F.random(rng)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == F(1)


@pytest.mark.parametrize("name", list(FIELDS))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_frobenius_is_field_map(name, data):
    F = FIELDS[name]
    a = data.draw(elements(F))
    b = data.draw(elements(F))
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    assert a.frobenius() == a ** F.p


@pytest.mark.parametrize("name", ["F43^2", "F7^3"])
def test_frobenius_fixes_prime_field(name):
    F = FIELDS[name]
    fixed = [x for x in F.elements() if F.frob(x) == x]
    assert len(fixed) == F.p
    assert {F.to_prime(x) for x in fixed} == set(range(F.p))


@pytest.mark.parametrize("p,m", [(7, 1), (11, 1), (13, 1), (7, 2), (3, 2), (5, 2), (3, 3)])
def test_sqrt_counts(p, m):
    F = make_ext_field(p, m, allow_small_characteristic=True)
    if F.q > 49:
        pytest.skip("exhaustive check is for q <= 49")
    have = 0
    for x in F.elements():
        r = F.sqrt(x)
        if r is not None:
            have += 1
            assert F.mul(r, r) == x
    assert have == (F.q + 1) // 2


@pytest.mark.parametrize("name", list(FIELDS))
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_sqrt_squares(name, data):
    F = FIELDS[name]
    a = data.draw(elements(F))
    r = (a * a).sqrt()
    assert r is not None and r * r == a * a


@pytest.mark.parametrize("p,m", [(7, 1), (3, 2), (7, 2), (5, 2)])
def test_roots_exhaustive(p, m):
    F = make_ext_field(p, m, allow_small_characteristic=True)
    rng = random.Random(p * m)
    for _ in range(30):
        deg = rng.randint(1, 5)
        coeffs = [F.random(rng) for _ in range(deg)] + [F.one]
        f = Poly.from_raw(F, coeffs)
        brute = {x for x in F.elements() if f(FieldElement(F, x)) == FieldElement(F, F.zero)}
        assert {r.raw for r in poly_roots(f)} == brute


def test_roots_large_field_split():
    F = FIELDS["F43^5"]
    rng = random.Random(3)
    rs = [F.random(rng) for _ in range(4)]
    f = Poly.from_raw(F, [F.one])
    for r in rs:
        f = f * Poly.from_raw(F, [F.neg(r), F.one])
    assert {r.raw for r in poly_roots(f)} == set(rs)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_poly_backend_inverse_matches_fermat(data):
    F = make_ext_field(79, 8)
    a = data.draw(elements(F, nonzero=True))
    assert F.inv(a.raw) == F.pow(a.raw, F.q - 2)
    with pytest.raises(ZeroDivisionError):
        F.inv(F.zero)
