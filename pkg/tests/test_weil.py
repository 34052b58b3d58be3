import math

import numpy as np
import pytest
from sympy import isprime

from g2crt.cmfield import conj
from g2crt.weil import (
    WeilError,
    all_norm_solutions,
    field_from_zeta,
    get_field,
    group_orders,
    passing_primes,
    select_primes,
    solve_relative_norm,
    splitting_type,
    theorem1_prime_test,
)


def brute_norm_solutions(K, p):
    """pi with pi * conj(pi) = p by scanning a box of O_K coordinates.

    Tr(x conj x) = 4p for a solution; the box is the Gram-matrix bound on
    each coordinate, scanned with numpy on the complex embeddings.
    """
    basis = K.integral_basis.basis
    emb = np.array([b.embeddings() for b in basis])  # 4 x 4
    G = np.real(emb @ emb.conj().T)
    Ginv = np.linalg.inv(G)
    bounds = [int(math.sqrt(4 * p * Ginv[i, i])) + 1 for i in range(4)]
    axes = [np.arange(-B, B + 1) for B in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    vals = grid @ emb[:, [0, 2]]
    keep = np.all(np.abs(np.abs(vals) ** 2 - p) < 1e-6 * p, axis=1)
    out = set()
    for g in grid[keep]:
        x = K.element()
        for gi, b in zip(g, basis):
            x = x + b * int(gi)
        if x * conj(x) == K.element(p):
            out.add(x)
    return out


@pytest.mark.parametrize("t", [(13, 3, 13), (3, 1, 2), (7, 2, 2)])
def test_norm_solutions_match_box_scan(t):
    K = get_field(*t)
    for p in range(3, 100):
        if not isprime(p) or K.disc % p == 0:
            continue
        assert set(all_norm_solutions(K, p)) == brute_norm_solutions(K, p), p


def test_pi_43():
    K = get_field(13, -3, 13)
    sols = all_norm_solutions(K, 43)
    assert K.element(-2, 1, "-5/2", "-1/2") in sols
    (orbit,) = solve_relative_norm(K, 43)
    assert orbit.charpoly == (1849, 344, 50, 8, 1)
    assert orbit.is_weil() and orbit.charpoly[0] == 43**2


def test_candidates_are_weil_numbers():
    for t in [(13, 3, 13), (3, 1, 2)]:
        K = get_field(*t)
        for p in passing_primes(K, 300):
            for c in solve_relative_norm(K, p):
                assert c.pi * conj(c.pi) == K.element(p)
                assert c.is_weil()
                roots = np.roots(list(reversed(c.charpoly)))
                assert np.allclose(np.abs(roots), math.sqrt(p))


def test_splitting_43():
    assert splitting_type(get_field(13, 3, 13), 43) == "cyclic-split"


def test_ramified_two():
    K = get_field(13, 3, 13)
    assert K.disc % 2 == 0
    with pytest.raises(WeilError):
        splitting_type(K, 2)
    with pytest.raises(WeilError):
        group_orders(K, 2)
    assert theorem1_prime_test(K, 2) is False


def test_splitting_cases_cover_primes():
    K = get_field(13, 3, 13)
    seen = set()
    for p in range(3, 400):
        if isprime(p) and K.disc % p:
            seen.add(splitting_type(K, p))
    # cyclic K: p inert in K0 forces p inert in K, so case 2 never occurs
    assert seen == {"none", "cyclic-split"}


def test_dihedral_split_label():
    K = get_field(3, 1, 2)
    for p in passing_primes(K, 500):
        assert splitting_type(K, p) == "dihedral-split"


def test_group_orders_43():
    go = group_orders(get_field(13, 3, 13), 43)
    assert go.pairs() == {(52, 2252), (36, 1548)}
    assert go.case_label == "cyclic-split"


def test_group_order_relations():
    """N1 = p + 1 - s1 and N = (N1^2 + N2)/2 - p for the N2 of the same Frobenius."""
    for t in [(13, 3, 13), (3, 1, 2)]:
        K = get_field(*t)
        for p in passing_primes(K, 200):
            go = group_orders(K, p)
            assert len(go) in (0, 2, 4)
            for e in go.entries:
                s1, s2 = e.candidate.s1, e.candidate.s2
                N2 = p * p + 1 + 2 * s2 - s1 * s1
                assert e.N1 == p + 1 - s1
                assert e.N == (e.N1**2 + N2) // 2 - p
                assert e.N == e.candidate.order_at(1)


def test_prime_test_43():
    K = get_field(13, 3, 13)
    assert theorem1_prime_test(K, 43)
    assert not theorem1_prime_test(K, 43, excluded={43})


def test_select_primes():
    K = get_field(13, 3, 13)
    sel = select_primes(K, 1)
    assert sel.primes == [43] and sel.complete
    sel = select_primes(K, 43 * 79 * 100)
    assert sel.primes[:3] == [43, 79, 101]
    excl = {p for p in range(2, 80) if isprime(p)}
    assert select_primes(K, 1, excluded=excl).primes == [101]


def test_select_primes_bound():
    sel = select_primes(get_field(13, 3, 13), 10**30, bound=200)
    assert not sel.complete and sel.product <= 10**30


def test_field_from_zeta_43():
    N2 = 43**2 + 1 + 2 * 50 - 64
    for N1, s1 in ((52, -8), (36, 8)):
        z = field_from_zeta(43, N1, N2)
        assert (z.s1, z.s2) == (s1, 50)
        assert (z.params.a, z.params.b, z.params.d) == (13, 3, 13)


def test_field_from_zeta_rejects():
    with pytest.raises(WeilError):
        field_from_zeta(43, 44, 43**2 + 1)  # s1 = s2 = 0: not ordinary
    with pytest.raises(WeilError):
        field_from_zeta(43, 44, 43**2 + 2)  # non-integral s2


def test_field_from_zeta_charpoly():
    """The recovered field contains a Weil number with the prescribed charpoly."""
    K = get_field(13, 3, 13)
    for p in passing_primes(K, 200):
        for e in group_orders(K, p).entries:
            s1, s2 = e.candidate.s1, e.candidate.s2
            N2 = p * p + 1 + 2 * s2 - s1 * s1
            z = field_from_zeta(p, e.N1, N2)
            L = get_field(z.params.a, z.params.b, z.params.d)
            cps = {c.charpoly for c in solve_relative_norm(L, p)}
            cps |= {c.negate().charpoly for c in solve_relative_norm(L, p)}
            assert e.candidate.charpoly in cps


def test_prime_density_logged():
    K = get_field(13, 3, 13)
    ps = passing_primes(K, 2000)
    total = sum(1 for p in range(7, 2000) if isprime(p) and K.disc % p)
    frac = len(ps) / total
    print(f"passing fraction below 2000: {frac:.3f}")
    assert 0 < frac < 0.5
