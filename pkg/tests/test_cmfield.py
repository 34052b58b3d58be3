from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2crt.cmfield import (
    CMField,
    CMFieldError,
    charpoly,
    class_number_K0,
    classify,
    conj,
    from_basis,
    minpoly,
    norms_and_minpoly,
    ring_of_integers,
    to_pi_basis,
)
from g2crt.weil import get_field

Q = Fraction


def reference_pi():
    """pi = -3 + 2 delta + (-2 - delta) eta in Q(i sqrt(13 - 3 sqrt 13))."""
    K = get_field(13, -3, 13)
    delta = K.element(Q(1, 2), Q(1, 2))
    return K, delta, K.element(-3) + delta * 2 + (K.element(-2) - delta) * K.eta


def test_classify_cyclic():
    p = classify(13, 3, 13)
    assert p.primitive and p.galois_type == "cyclic" and p.delta == 52


def test_classify_dihedral():
    p = classify(3, 1, 2)
    assert p.primitive and p.galois_type == "dihedral" and p.delta == 7


@pytest.mark.parametrize("bad", [(5, 2, 6), (1, 1, 4), (2, 1, 5), (3, 0, 2), (10, 2, 5)])
def test_classify_rejects(bad):
    # biquadratic, d not squarefree, not totally positive, b = 0, Q(zeta_5)
    with pytest.raises(CMFieldError):
        classify(*bad)


@pytest.mark.parametrize("t", [(13, 3, 13), (3, 1, 2), (7, 2, 2), (4, 1, 5)])
def test_classify_sign_of_b(t):
    a, b, d = t
    p, q = classify(a, b, d), classify(a, -b, d)
    assert p.galois_type == q.galois_type
    assert ring_of_integers(p).disc_K == ring_of_integers(q).disc_K


def test_integral_basis_13():
    K = get_field(13, 3, 13)
    OK = K.integral_basis
    delta = K.element(Q(1, 2), Q(1, 2))
    assert list(OK.basis) == [K.one, delta, K.eta, delta * K.eta]


def test_index_forms():
    assert ring_of_integers(classify(7, 2, 2)).index_over_sqrt_d_eta == 2
    assert ring_of_integers(classify(4, 1, 5)).index_over_sqrt_d_eta == 4


@pytest.mark.parametrize("t", [(13, 3, 13), (3, 1, 2), (7, 2, 2), (4, 1, 5), (5, 2, 2), (6, 1, 17)])
def test_integral_basis_is_a_ring(t):
    K = get_field(*t)
    OK = K.integral_basis
    for b in OK.basis:
        assert all(c.denominator == 1 for c in minpoly(b))
    for x in OK.basis:
        for y in OK.basis:
            assert OK.contains(x * y)


def test_h_k0_required():
    with pytest.raises(CMFieldError):
        ring_of_integers(classify(10, 1, 79))


def test_reference_pi_norms():
    K, delta, pi = reference_pi()
    n = norms_and_minpoly(pi)
    assert n.rel_norm == K.element(43)
    assert n.abs_norm == 1849
    assert n.minpoly == [1849, 344, 50, 8, 1]
    one = norms_and_minpoly(K.one)
    assert one.abs_norm == 1 and one.minpoly == [-1, 1]


def test_delta_relation():
    K, delta, pi = reference_pi()
    assert delta * 4 == pi + conj(pi) + 6
    g, s = to_pi_basis(delta, pi)
    assert from_basis(g, s, [pi**k for k in range(4)]) == delta


def test_conj_pi_in_pi_basis():
    K, _, pi = reference_pi()
    g, s = to_pi_basis(conj(pi), pi)
    assert (g, s) == ([-344, -50, -8, -1], 43)
    assert to_pi_basis(K.one, pi) == ([1, 0, 0, 0], 1)


def test_pi4_minus_1_over_12():
    K, _, pi = reference_pi()
    x = (pi**4 - 1) / 12
    assert x == K.element(-2, 24, Q(113, 2), Q(17, 2))
    assert K.integral_basis.contains(x)


@pytest.mark.parametrize("d,h", [(13, 1), (5, 1), (2, 1), (79, 3), (10, 2), (15, 2), (229, 3)])
def test_class_numbers(d, h):
    assert class_number_K0(d) == h


def elements(K):
    c = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    return st.tuples(c, c, c, c).map(lambda t: K.element(*t))


K13 = get_field(13, 3, 13)
K312 = get_field(3, 1, 2)


@pytest.mark.parametrize("K", [K13, K312], ids=["13-3-13", "3-1-2"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_conj_is_involution(K, data):
    x, y = data.draw(elements(K)), data.draw(elements(K))
    assert conj(x * y) == conj(x) * conj(y)
    assert conj(conj(x)) == x


@pytest.mark.parametrize("K", [K13, K312], ids=["13-3-13", "3-1-2"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_abs_norm_multiplicative(K, data):
    x, y = data.draw(elements(K)), data.draw(elements(K))
    nx, ny, nxy = (norms_and_minpoly(z).abs_norm for z in (x, y, x * y))
    assert nxy == nx * ny
    # the absolute norm is the constant term of the characteristic polynomial
    assert charpoly(x)[0] == nx


@pytest.mark.parametrize("K", [K13, K312], ids=["13-3-13", "3-1-2"])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_minpoly_annihilates(K, data):
    x = data.draw(elements(K))
    acc = K.element()
    for k, c in enumerate(minpoly(x)):
        acc = acc + x**k * c
    assert acc.is_zero()


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_pi_basis_round_trip(data):
    K, _, pi = reference_pi()
    x = data.draw(elements(K))
    g, s = to_pi_basis(x, pi)
    assert from_basis(g, s, [pi**k for k in range(4)]) == x


def test_field_equality_and_hash():
    assert get_field(13, 3, 13) == CMField(13, 3, 13)
