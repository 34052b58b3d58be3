import pytest

from g2crt.cmfield import conj
from g2crt.endoring import (
    EndoError,
    EndoTester,
    endo_ring_is_maximal,
    index_report,
    is_endomorphism,
    primary_filter,
    to_pi_pibar_basis,
    torsion_field_filter,
    torsion_filters,
)
from g2crt.igusa import charpoly_from_counts, count_points, mestre_construct, quadratic_twist
from g2crt.weil import get_field, group_orders

MAXIMAL = [(20, 23, 19), (36, 21, 6)]
REJECTED = [(3, 24, 36), (4, 29, 28), (29, 24, 13), (20, 21, 29)]


@pytest.fixture(scope="module")
def class_curves(F43, orders43):
    """triple -> (curve in the isogeny class, its own Frobenius candidate)."""
    by_psi = {tuple(e.candidate.charpoly): e.candidate for e in orders43.entries}
    out = {}
    for t in MAXIMAL + REJECTED:
        C = mestre_construct(t, F43, seed=0)
        for D in (C, quadratic_twist(C)):
            psi = tuple(charpoly_from_counts(count_points(D, 1), count_points(D, 2), 43))
            if psi in by_psi:
                out[t] = (D, by_psi[psi])
                break
        else:
            raise AssertionError(f"{t} is not in the isogeny class")
    return out


@pytest.fixture(scope="module")
def pi52(orders43):
    return next(e.candidate.pi for e in orders43.entries if e.N1 == 52)


@pytest.fixture(scope="module")
def testers(class_curves):
    return {t: EndoTester(C, cand.charpoly, seed=0) for t, (C, cand) in class_curves.items()}


def delta_of(pi):
    return (pi + conj(pi) + 6) / 4


def test_index_48(K13, entry43):
    rep = index_report(K13, entry43.candidate)
    assert rep.index == 48
    assert not rep.bound_applicable  # half-integral coordinates


def test_filters_43(K13, entry43):
    filt = torsion_filters(K13, entry43.candidate)
    assert (4, 12) in filt
    assert primary_filter(K13, entry43.candidate, 48) == (4, 12)


def test_delta_denominator(pi52, entry43):
    g, s = to_pi_pibar_basis(delta_of(pi52), entry43.candidate)
    assert s == 4


@pytest.mark.parametrize("t", MAXIMAL)
def test_delta_is_endomorphism(class_curves, testers, pi52, t):
    C, cand = class_curves[t]
    assert is_endomorphism(C, cand.charpoly, delta_of(pi52), cand, tester=testers[t])


@pytest.mark.parametrize("t", REJECTED)
def test_delta_not_endomorphism(class_curves, testers, pi52, t):
    C, cand = class_curves[t]
    assert not is_endomorphism(C, cand.charpoly, delta_of(pi52), cand, tester=testers[t])


@pytest.mark.parametrize("t", MAXIMAL + REJECTED)
def test_delta_matches_trace_congruence(class_curves, testers, pi52, t):
    """delta in End  <=>  F + V = 2 on J[4], in the same basis."""
    C, cand = class_curves[t]
    fm = testers[t].frob_matrix(4)
    trace_two = all((fm.F[i][j] + fm.V[i][j] - 2 * (i == j)) % 4 == 0 for i in range(4) for j in range(4))
    assert testers[t].check(delta_of(pi52), cand).result == trace_two


@pytest.mark.parametrize("t", MAXIMAL)
def test_maximal(class_curves, K13, t):
    C, cand = class_curves[t]
    rep = endo_ring_is_maximal(C, K13, cand, report=True)
    assert rep.maximal and rep.filter == (4, 12) and rep.filter_passed


@pytest.mark.parametrize("t", REJECTED)
def test_not_maximal(class_curves, K13, t):
    C, cand = class_curves[t]
    assert not endo_ring_is_maximal(C, K13, cand)


@pytest.mark.parametrize("t", REJECTED)
def test_not_maximal_without_filter(class_curves, K13, t):
    # the rejected curves pass the 12-torsion filter, so the matrix test decides
    C, cand = class_curves[t]
    assert torsion_field_filter(C, cand.charpoly, 4, 12)
    assert not endo_ring_is_maximal(C, K13, cand, use_filter=False)


def test_ring_closure(class_curves, testers, pi52):
    t = MAXIMAL[0]
    C, cand = class_curves[t]
    tester = testers[t]
    pi = cand.pi
    dl = delta_of(pi52)
    for alpha in (dl, pi, conj(pi)):
        assert tester.check(alpha, cand).result
    for alpha in (dl + pi, dl * pi, dl * dl, dl * conj(pi) - 3):
        assert tester.check(alpha, cand).result


def test_order_elements_pass(class_curves, testers):
    t = REJECTED[0]
    C, cand = class_curves[t]
    pi = cand.pi
    K = pi.K
    for alpha in (K.one, pi, conj(pi), pi * pi * conj(pi) + 5, conj(pi) ** 3):
        chk = testers[t].check(alpha, cand)
        assert chk.s == 1 and chk.result


def test_monotonicity(class_curves, K13):
    for t in MAXIMAL:
        C, cand = class_curves[t]
        for k, g in torsion_filters(K13, cand):
            if k <= 4:
                assert torsion_field_filter(C, cand.charpoly, k, g)


def test_gamma_one_is_trivial(curve43, entry43):
    assert torsion_field_filter(curve43, entry43.candidate.charpoly, 1, 1)


def test_p_divisible_denominator(testers):
    with pytest.raises(EndoError):
        testers[MAXIMAL[0]].kills([1, 0, 0, 0], 43)


def test_fixture_curve_maximal(curve43, K13, entry43):
    rep = endo_ring_is_maximal(curve43, K13, entry43.candidate, report=True)
    assert rep.maximal
    assert rep.levels == {4: 4, 3: 4}


def test_index_bound_counterexample():
    """The c-coordinate index bound fails for an explicit Weil number."""
    K = get_field(3, 1, 2)
    pi = K.element(-7, 3, -4, -1)
    assert pi * conj(pi) == K.element(137)
    assert len(group_orders(K, 137)) == 4
    rep = index_report(K, pi)
    assert rep.bound_applicable
    assert (rep.index, rep.bound) == (504, 336)
    assert rep.bound_holds is False
    ok = index_report(K, K.element(-9, 1, 0, -3))
    assert (ok.index, ok.bound, ok.bound_holds) == (72, 144, True)
