"""Deciding End(J) = O_K through the action on torsion.

An element alpha of O_K is written as g/s with g in Z[pi, pibar], using the
Z-basis {1, beta, pi, beta*pi} where beta = pi + pibar.  alpha is an
endomorphism exactly when g kills J[s]; on a torsion basis this is the
matrix statement

    g0 + g1 (F + V) + g2 F + g3 (F + V) F = 0  (mod s).

Composite s is handled one prime power at a time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from .cmfield import CMElement, basis_discriminant, class_number_K0, conj, to_basis
from .igusa import GenusTwoCurve
from .jacobian import (
    FrobMatrix,
    Jacobian,
    JacobianError,
    TorsionBasis,
    _matmul,
    ell_torsion_basis,
    frobenius_matrix,
    jacobian_order,
    multiplicative_order_mod,
    normalize_model,
)
from .weil import FrobeniusCandidate, _field

__all__ = [
    "EndoError",
    "EndoCheck",
    "IndexReport",
    "pi_pibar_basis",
    "to_pi_pibar_basis",
    "index_report",
    "torsion_filters",
    "torsion_field_filter",
    "EndoTester",
    "is_endomorphism",
    "endo_ring_is_maximal",
]


class EndoError(ValueError):
    pass


def _pi_of(pi) -> CMElement:
    return pi.pi if isinstance(pi, FrobeniusCandidate) else pi


def pi_pibar_basis(pi) -> list:
    """Z-basis {1, beta, pi, beta*pi} of Z[pi, pibar]."""
    pi = _pi_of(pi)
    beta = pi + conj(pi)
    return [pi.K.one, beta, pi, beta * pi]


def to_pi_pibar_basis(alpha: CMElement, pi) -> Tuple[list, int]:
    return to_basis(alpha, pi_pibar_basis(pi))


@dataclass
class EndoCheck:
    alpha: CMElement
    g: list
    s: int
    result: bool


@dataclass
class IndexReport:
    index: int
    bound: Optional[int]
    bound_applicable: bool
    reason: str = ""

    @property
    def bound_holds(self) -> Optional[bool]:
        if not self.bound_applicable or not self.bound:
            return None
        return self.bound % self.index == 0


def index_report(params, pi) -> IndexReport:
    """Exact [O_K : Z[pi, pibar]] from discriminants, with the c-coordinate bound when it applies."""
    K = _field(params)
    pi = _pi_of(pi)
    OK = K.integral_basis
    ratio = basis_discriminant(pi_pibar_basis(pi)) / OK.disc_K
    if ratio.denominator != 1 or isqrt(int(ratio)) ** 2 != int(ratio):
        raise EndoError("discriminant ratio is not a square")  # pragma: no cover
    index = isqrt(int(ratio))
    c1, c2, c3, c4 = pi.c
    a, b, d = K.a, K.b, K.d
    reasons = []
    if any(Fraction(c).denominator != 1 for c in pi.c):
        reasons.append("c-coordinates are not integral")
    delta = a * a - b * b * d
    if any(delta % (q * q) == 0 for q in factorint(abs(delta))):
        reasons.append("a^2 - b^2 d is not squarefree")
    if class_number_K0(d) != 1:
        reasons.append("h(K0) > 1")
    if reasons:
        return IndexReport(index, None, False, "; ".join(reasons))
    factor = 16 if d % 4 == 1 else 8
    bound = abs(factor * int(c2) * int(c3 * c3 - c4 * c4 * d))
    return IndexReport(index, bound, True, "")


# --------------------------------------------------------------------------
# Torsion-field filters
# --------------------------------------------------------------------------


def torsion_filters(params, pi, kmax: int = 12) -> List[Tuple[int, int]]:
    """Pairs (k, gamma_k) with gamma_k the largest integer making (pi^k - 1)/gamma_k integral, gamma_k > 1."""
    K = _field(params)
    pi = _pi_of(pi)
    OK = K.integral_basis
    out = []
    pk = K.one
    for k in range(1, kmax + 1):
        pk = pk * pi
        g = 0
        for c in OK.coords(pk - 1):
            g = gcd(g, c)
        if g > 1:
            out.append((k, g))
    return out


def primary_filter(params, pi, index: int, kmax: int = 12, cap: int = 10**6) -> Optional[Tuple[int, int]]:
    """The first (k, gamma_k) whose gamma_k carries every prime of the index (gamma^4 <= cap)."""
    primes = set(factorint(index)) if index > 1 else set()
    for k, g in torsion_filters(params, pi, kmax):
        if g**4 > cap:
            continue
        if primes <= set(factorint(g)):
            return k, g
    return None


def torsion_field_filter(curve: GenusTwoCurve, psi: Sequence[int], k: int, gamma: int,
                         seed: int = 0) -> bool:
    """True iff J[gamma] is contained in J(F_{p^k})."""
    if gamma == 1:
        return True
    p = curve.field.p
    if gcd(gamma, p) != 1:
        raise EndoError("gamma must be coprime to p")
    N = jacobian_order(psi, k)
    if N % gamma**4:
        return False
    J = Jacobian(normalize_model(curve), k)
    rng = random.Random(seed)
    for ell, e in factorint(gamma).items():
        if ell_torsion_basis(J, N, ell, e, rng) is None:
            return False
    return True


# --------------------------------------------------------------------------
# Endomorphism tests
# --------------------------------------------------------------------------


class EndoTester:
    """Caches torsion bases and Frobenius matrices per prime power for one curve."""

    def __init__(self, curve: GenusTwoCurve, psi: Sequence[int], seed: int = 0):
        self.curve = normalize_model(curve)
        self.psi = [int(c) for c in psi]
        self.p = curve.field.p
        self.seed = seed
        self._mats: Dict[int, Optional[FrobMatrix]] = {}
        self._jac: Dict[int, Jacobian] = {}
        self.levels: Dict[int, int] = {}  # prime power -> torsion field degree

    def frob_matrix(self, q: int) -> FrobMatrix:
        """Frobenius on J[q], q a prime power."""
        if q in self._mats:
            return self._mats[q]
        ell = next(iter(factorint(q)))
        e = factorint(q)[ell]
        M = multiplicative_order_mod(self.psi, q)
        rng = random.Random(self.seed * 1000003 + q)
        for m in range(1, M + 1):
            if M % m:
                continue
            N = jacobian_order(self.psi, m)
            if N % q**4:
                continue
            J = self._jac.get(m) or Jacobian(self.curve, m)
            self._jac[m] = J
            basis = ell_torsion_basis(J, N, ell, e, rng)
            if basis is None:
                continue
            tb = TorsionBasis(q, m, J, basis)
            fm = frobenius_matrix(tb)
            self._mats[q] = fm
            self.levels[q] = m
            return fm
        raise JacobianError(f"J[{q}] not found up to degree {M}")  # pragma: no cover

    def kills(self, g: Sequence[int], s: int) -> bool:
        """Does g0 + g1 beta + g2 pi + g3 beta pi act as zero on J[s]?"""
        if gcd(s, self.p) != 1:
            raise EndoError(f"denominator {s} is not coprime to p = {self.p}; outside the ordinary method")
        for ell, e in factorint(s).items():
            q = ell**e
            fm = self.frob_matrix(q)
            F, V = fm.F, fm.V
            B = [[(F[i][j] + V[i][j]) % q for j in range(4)] for i in range(4)]
            BF = _matmul(B, F, q)
            for i in range(4):
                for j in range(4):
                    val = g[0] * (i == j) + g[1] * B[i][j] + g[2] * F[i][j] + g[3] * BF[i][j]
                    if val % q:
                        return False
        return True

    def check(self, alpha: CMElement, pi) -> EndoCheck:
        g, s = to_pi_pibar_basis(alpha, pi)
        ok = True if s == 1 else self.kills(g, s)
        return EndoCheck(alpha, g, s, ok)


def is_endomorphism(curve: GenusTwoCurve, psi: Sequence[int], alpha: CMElement, pi, seed: int = 0,
                    tester: Optional[EndoTester] = None) -> bool:
    return (tester or EndoTester(curve, psi, seed)).check(alpha, pi).result


@dataclass
class MaximalityReport:
    maximal: bool
    index: int
    filter: Optional[Tuple[int, int]]
    filter_passed: Optional[bool]
    checks: List[EndoCheck] = field(default_factory=list)
    levels: Dict[int, int] = field(default_factory=dict)
    reason: str = ""


def endo_ring_is_maximal(curve: GenusTwoCurve, params, pi, seed: int = 0,
                         report: bool = False, use_filter: bool = True):
    """End(J) = O_K?  ``pi`` must be the Frobenius of this very model."""
    K = _field(params)
    pi = _pi_of(pi)
    from .weil import _int_charpoly

    psi = list(_int_charpoly(pi))
    idx = index_report(K, pi).index
    rep = MaximalityReport(True, idx, None, None)
    if idx == 1:
        rep.reason = "index 1"
        return rep if report else True
    if use_filter:
        filt = primary_filter(K, pi, idx)
        rep.filter = filt
        if filt is not None:
            passed = torsion_field_filter(curve, psi, filt[0], filt[1], seed)
            rep.filter_passed = passed
            if not passed:
                rep.maximal = False
                rep.reason = f"J[{filt[1]}] not defined over F_p^{filt[0]}"
                return rep if report else False
    tester = EndoTester(curve, psi, seed)
    for b in K.integral_basis.basis:
        chk = tester.check(b, pi)
        rep.checks.append(chk)
        if not chk.result:
            rep.maximal = False
            rep.reason = f"basis element with denominator {chk.s} is not an endomorphism"
            break
    rep.levels = dict(tester.levels)
    return rep if report else rep.maximal
