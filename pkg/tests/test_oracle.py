import pytest

from g2crt.ff import prime_field
from g2crt.igusa import GenusTwoCurve
from g2crt.jacobian import Jacobian, normalize_model
from g2crt.oracle import (
    OracleReport,
    brute_curve_census,
    census_check,
    enumerate_jacobian,
    naive_group_check,
    naive_torsion_check,
    run_standing_corpus,
    standing_corpus,
)

CORPUS = standing_corpus()
IDS = [f"F{c.field.p}-{i}" for i, c in enumerate(CORPUS)]


def test_corpus_shape():
    assert [c.field.p for c in CORPUS] == [7, 7, 7, 11, 11]


def test_census_7():
    rep = census_check(7)
    assert rep.agreement, rep.counterexample
    assert rep.details["census"] == rep.details["mestre"] > 0


def test_census_caps():
    with pytest.raises(ValueError):
        brute_curve_census(17)


@pytest.mark.parametrize("curve", CORPUS, ids=IDS)
def test_group_m1(curve):
    rep = naive_group_check(curve, 1)
    assert rep.agreement, rep.counterexample


@pytest.mark.parametrize("curve", [c for c in CORPUS if c.field.p == 7], ids=IDS[:3])
def test_group_m2(curve):
    rep = naive_group_check(curve, 2)
    assert rep.agreement, rep.counterexample


def test_group_caps():
    with pytest.raises(ValueError):
        naive_group_check(CORPUS[3], 3)
    with pytest.raises(ValueError):
        naive_torsion_check(CORPUS[3], 2, 3)


@pytest.mark.parametrize("curve", CORPUS, ids=IDS)
def test_torsion_2(curve):
    rep = naive_torsion_check(curve, 2, 1)
    assert rep.agreement, rep.counterexample


def test_full_two_torsion_split_curve():
    rep = naive_torsion_check(CORPUS[0], 2, 1)
    assert rep.details["enumerated"] == 16 == rep.details["span"]


@pytest.mark.parametrize("curve", CORPUS[:2], ids=IDS[:2])
def test_torsion_trivial(curve):
    rep = naive_torsion_check(curve, 1, 1)
    assert rep.agreement and rep.details["enumerated"] == 1


def test_torsion_degree_2():
    rep = naive_torsion_check(CORPUS[1], 2, 2)
    assert rep.agreement, rep.counterexample


def test_corrupted_basis_reported():
    C = CORPUS[0]
    J = Jacobian(normalize_model(C))
    two = [k for k in enumerate_jacobian(J) if J.is_identity(J.mul(k, 2))]
    good = naive_torsion_check(C, 2, 1)
    assert good.agreement
    bad = [J.zero_key, two[1], two[2], two[3]]
    rep = naive_torsion_check(C, 2, 1, basis=bad)
    assert not rep.agreement and rep.counterexample is not None


def test_report_invariant():
    with pytest.raises(ValueError):
        OracleReport("x", True, counterexample="boom")
    with pytest.raises(ValueError):
        OracleReport("x", False)


def test_standing_corpus_all_agree():
    reports = run_standing_corpus()
    bad = [r.to_dict() for r in reports if not r.agreement]
    assert not bad


def test_enumeration_counts_deg6_nonsquare():
    """A degree-6 model with non-square leading coefficient is moved before enumeration."""
    F = prime_field(7)
    C = GenusTwoCurve(F, [2, 0, 1, 5, 0, 0, 3])
    rep = naive_group_check(C, 1)
    assert rep.details["enumerated"] == rep.details["resultant"]
