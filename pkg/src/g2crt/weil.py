"""Weil numbers in a quartic CM field: the relative norm equation, splitting
types, candidate group orders, and the prime conditions for the CRT method.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional

from sympy import factorint, isprime, nextprime
from sympy.functions.combinatorial.numbers import legendre_symbol

from .cmfield import (
    CMElement,
    CMField,
    CMFieldParams,
    charpoly,
    classify,
    conj,
    fundamental_unit,
    k0_elements_of_norm,
    k0_mul,
)

log = logging.getLogger(__name__)

MIN_PRIME = 7


class WeilError(ValueError):
    pass


def _field(params) -> CMField:
    if isinstance(params, CMField):
        return params
    if isinstance(params, tuple):
        return get_field(*params)
    return get_field(params.a, params.b, params.d)


@lru_cache(maxsize=None)
def get_field(a: int, b: int, d: int) -> CMField:
    return CMField(a, b, d)


# --------------------------------------------------------------------------
# Frobenius candidates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusCandidate:
    pi: CMElement
    p: int
    charpoly: tuple  # integer coefficients, lowest degree first, monic quartic

    @property
    def coords(self) -> tuple:
        return self.pi.c

    @property
    def s1(self) -> int:
        return -self.charpoly[3]

    @property
    def s2(self) -> int:
        return self.charpoly[2]

    def order_at(self, t: int) -> int:
        return sum(c * t**i for i, c in enumerate(self.charpoly))

    def negate(self) -> "FrobeniusCandidate":
        cp = tuple(c * (-1) ** i for i, c in enumerate(self.charpoly))
        return FrobeniusCandidate(-self.pi, self.p, cp)

    def is_weil(self) -> bool:
        c = self.charpoly
        p = self.p
        return c[0] == p * p and c[1] == p * c[3] and c[4] == 1

    def __repr__(self):
        return f"FrobeniusCandidate(p={self.p}, coords={tuple(str(x) for x in self.coords)}, charpoly={self.charpoly})"


def _int_charpoly(x: CMElement) -> tuple:
    cp = charpoly(x)
    if any(c.denominator != 1 for c in cp):
        raise WeilError("candidate is not integral")
    return tuple(int(c) for c in cp)


def _embed_k0(d: int, x1, x2, sign: int) -> float:
    return float(x1) + sign * float(x2) * math.sqrt(d)


def _omega_embeddings(d: int) -> tuple:
    r = math.sqrt(d)
    if d % 4 == 1:
        return ((1 + r) / 2, (1 - r) / 2)
    return (r, -r)


def solve_norm_equation(K: CMField, target: CMElement) -> list:
    """All x in O_K with x * conj(x) = target (target a totally positive element of K0)."""
    if not target.is_real():
        raise WeilError("target must lie in K0")
    d, a, b = K.d, K.a, K.b
    basis = K.integral_basis.basis
    kappa = basis[2]
    gam = (kappa.c[0], kappa.c[1])  # K0-part of kappa
    ycoef = (kappa.c[2], kappa.c[3])  # eta-coefficient of kappa
    w1, w2 = _omega_embeddings(d)
    sd = math.sqrt(d)
    t1 = _embed_k0(d, *target.c[:2], 1)
    t2 = _embed_k0(d, *target.c[:2], -1)
    if t1 <= 0 or t2 <= 0:
        return []
    e1 = a + b * sd  # -eta^2 under the two real embeddings
    e2 = a - b * sd
    yc1 = abs(_embed_k0(d, *ycoef, 1))
    yc2 = abs(_embed_k0(d, *ycoef, -1))
    # |Y_i| <= sqrt(t_i / e_i) and Y = B * ycoef, with slack
    L1 = math.sqrt(t1 / e1) / yc1 * 1.0000001 + 1e-9
    L2 = math.sqrt(t2 / e2) / yc2 * 1.0000001 + 1e-9
    g1 = _embed_k0(d, *gam, 1)
    g2 = _embed_k0(d, *gam, -1)
    out = []
    seen = set()
    vmax = int((L1 + L2) / abs(w1 - w2)) + 2
    for v in range(-vmax, vmax + 1):
        lo = max(-L1 - v * w1, -L2 - v * w2)
        hi = min(L1 - v * w1, L2 - v * w2)
        if lo > hi:
            continue
        for u in range(math.floor(lo), math.ceil(hi) + 1):
            B1 = u + v * w1
            B2 = u + v * w2
            Y1 = B1 * _embed_k0(d, *ycoef, 1)
            Y2 = B2 * _embed_k0(d, *ycoef, -1)
            R1 = t1 - Y1 * Y1 * e1
            R2 = t2 - Y2 * Y2 * e2
            tol = 1e-7 * (1 + t1 + t2)
            if R1 < -tol or R2 < -tol:
                continue
            X1m = math.sqrt(max(R1, 0.0))
            X2m = math.sqrt(max(R2, 0.0))
            for s1 in (1, -1) if X1m > 0 else (1,):
                for s2 in (1, -1) if X2m > 0 else (1,):
                    A1 = s1 * X1m - B1 * g1
                    A2 = s2 * X2m - B2 * g2
                    vv = (A1 - A2) / (w1 - w2)
                    uu = A1 - vv * w1
                    ru, rv = round(uu), round(vv)
                    if abs(ru - uu) > 1e-4 or abs(rv - vv) > 1e-4:
                        continue
                    key = (ru, rv, u, v)
                    if key in seen:
                        continue
                    seen.add(key)
                    x = K.k0(ru, rv) + K.k0(u, v) * kappa
                    if x * conj(x) == target:
                        out.append(x)
    return out


def _check_unramified(K: CMField, p: int):
    if not isprime(p):
        raise WeilError(f"{p} is not prime")
    if K.disc % p == 0:
        raise WeilError(f"{p} ramifies in K")


def _orbit_key(cp: tuple) -> tuple:
    neg = tuple(c * (-1) ** i for i, c in enumerate(cp))
    return min(cp, neg)


def _sort_key(x: CMElement):
    return tuple(x.c)


def solve_relative_norm(params, p: int) -> list:
    """Solutions of pi * conj(pi) = p up to sign, complex conjugation, and Aut(K).

    Each orbit is represented by one FrobeniusCandidate.  Orbits are keyed
    by the characteristic polynomial up to t -> -t: two Weil numbers in K
    with the same characteristic polynomial differ by an automorphism of K.
    """
    K = _field(params)
    _check_unramified(K, p)
    sols = solve_norm_equation(K, K.one * p)
    orbits: dict = {}
    for x in sols:
        cp = _int_charpoly(x)
        orbits.setdefault(_orbit_key(cp), []).append(x)
    out = []
    for key in sorted(orbits):
        members = sorted(orbits[key], key=_sort_key)
        rep = members[0]
        out.append(FrobeniusCandidate(rep, p, _int_charpoly(rep)))
    return out


def all_norm_solutions(params, p: int) -> list:
    """Every pi in O_K with pi * conj(pi) = p (no orbit reduction)."""
    K = _field(params)
    _check_unramified(K, p)
    return solve_norm_equation(K, K.one * p)


# --------------------------------------------------------------------------
# Splitting of p
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _structure_constants(a: int, b: int, d: int) -> tuple:
    K = get_field(a, b, d)
    ib = K.integral_basis
    T = [[ib.coords(bi * bj) for bj in ib.basis] for bi in ib.basis]
    return tuple(tuple(tuple(r) for r in row) for row in T)


def _ok_mul_mod(T, x, y, p):
    out = [0] * 4
    for i in range(4):
        if x[i] == 0:
            continue
        for j in range(4):
            if y[j] == 0:
                continue
            c = x[i] * y[j]
            row = T[i][j]
            for k in range(4):
                out[k] += c * row[k]
    return [v % p for v in out]


def _ok_pow_mod(T, x, e, p):
    r = [1, 0, 0, 0]
    while e:
        if e & 1:
            r = _ok_mul_mod(T, r, x, p)
        e >>= 1
        if e:
            x = _ok_mul_mod(T, x, x, p)
    return r


def _rank_mod_p(M, p):
    M = [[v % p for v in row] for row in M]
    rank = 0
    rows, cols = len(M), len(M[0])
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [v * inv % p for v in M[rank]]
        for r in range(rows):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(vr - f * vc) % p for vr, vc in zip(M[r], M[rank])]
        rank += 1
    return rank


def primes_above(params, p: int) -> int:
    """Number of primes of O_K above an unramified p (dim of the Frobenius-fixed space mod p)."""
    K = _field(params)
    _check_unramified(K, p)
    T = _structure_constants(K.a, K.b, K.d)
    cols = []
    for j in range(4):
        e = [0] * 4
        e[j] = 1
        cols.append(_ok_pow_mod(T, e, p, p))
    M = [[cols[j][i] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
    return 4 - _rank_mod_p(M, p)


def k0_splits(params, p: int) -> bool:
    K = _field(params)
    D = K.disc_K0
    if p == 2:  # Kronecker symbol (D/2) for odd D
        return D % 8 in (1, 7)
    return legendre_symbol(D % p, p) == 1


def splitting_type(params, p: int) -> str:
    """'none' (Prop 4.1 case 1), 'inert-split', 'cyclic-split' or 'dihedral-split'."""
    K = _field(params)
    _check_unramified(K, p)
    g = primes_above(K, p)
    split0 = k0_splits(K, p)
    if g == 4:
        return "cyclic-split" if K.params.galois_type == "cyclic" else "dihedral-split"
    if not split0 and g == 2:
        return "inert-split"
    return "none"


# --------------------------------------------------------------------------
# Group orders
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupOrderEntry:
    N1: int
    N: int
    candidate: FrobeniusCandidate  # already multiplied by the sign
    sign: int
    ideal_class_tag: str

    @property
    def pair(self) -> tuple:
        return (self.N1, self.N)


@dataclass
class GroupOrderSet:
    p: int
    case_label: str
    entries: list = field(default_factory=list)

    def pairs(self) -> set:
        return {e.pair for e in self.entries}

    def orders(self) -> set:
        return {e.N for e in self.entries}

    def __len__(self):
        return len(self.entries)


def group_orders(params, p: int) -> GroupOrderSet:
    K = _field(params)
    label = splitting_type(K, p)
    orbits = solve_relative_norm(K, p)
    if len(orbits) > 2:
        raise WeilError(f"unexpected number of solution orbits: {len(orbits)}")  # pragma: no cover
    tags = ["single"] if len(orbits) == 1 else ["P", "Q"]
    entries = []
    for cand, tag in zip(orbits, tags):
        for sign in (1, -1):
            c = cand if sign == 1 else cand.negate()
            N = c.order_at(1)
            N1 = p + 1 - c.s1
            entries.append(GroupOrderEntry(N1, N, c, sign, tag))
    return GroupOrderSet(p, label, entries)


# --------------------------------------------------------------------------
# Theorem 1 prime conditions
# --------------------------------------------------------------------------


def _k0_totally_positive(d: int, x: tuple) -> bool:
    w1, w2 = _omega_embeddings(d)
    return x[0] + x[1] * w1 > 0 and x[0] + x[1] * w2 > 0


def primes_above_principal(params, p: int) -> bool:
    """True iff every prime of K above p is principal (p split completely, K cyclic).

    For each prime q of K0 over p (generated by g, since h(K0) = 1) we look
    for alpha with alpha * conj(alpha) = g*u, u running over units modulo
    squares; alpha then generates a prime of K above q, and conj(alpha)
    generates the other one.
    """
    K = _field(params)
    d = K.d
    eps = fundamental_unit(d)
    units = [(1, 0), (-1, 0), eps, (-eps[0], -eps[1])]
    gens = k0_elements_of_norm(d, p)
    if len(gens) != 2:
        return False
    for g in gens:
        ok = False
        for u in units:
            beta = k0_mul(d, g, u)
            if not _k0_totally_positive(d, beta):
                continue
            if solve_norm_equation(K, K.k0(*beta)):
                ok = True
                break
        if not ok:
            return False
    return True


def theorem1_prime_test(params, p: int, excluded: Iterable = (), strict: bool = False) -> bool:
    """Prime condition of the CRT method.

    Both cases require p to split completely in K.  Cyclic K: the relative
    norm equation pi * conj(pi) = p must be solvable (one orbit, two group
    orders); with ``strict=True`` every prime of K above p must in addition
    be principal.  Dihedral K: both relative-norm-p ideal classes must be
    principal, i.e. two solution orbits and four group orders.
    """
    K = _field(params)
    if p in set(excluded):
        return False
    if isprime(p) and K.disc % p == 0:
        return False  # ramified primes never satisfy the splitting condition
    _check_unramified(K, p)
    label = splitting_type(K, p)
    if label == "cyclic-split":
        if strict and not primes_above_principal(K, p):
            return False
        return len(solve_relative_norm(K, p)) >= 1
    if label == "dihedral-split":
        return len(solve_relative_norm(K, p)) == 2
    return False


@dataclass
class PrimeSelection:
    primes: list
    product: int
    complete: bool
    tested: int


def select_primes(params, target_product: int, excluded: Iterable = (), bound: int = 10**6,
                  start: int = MIN_PRIME, strict: bool = False) -> PrimeSelection:
    """Increasing primes passing theorem1_prime_test until their product exceeds target_product."""
    if target_product < 1:
        raise WeilError("target_product must be >= 1")
    K = _field(params)
    excluded = set(excluded)
    chosen = []
    prod = 1
    tested = 0
    p = max(start, MIN_PRIME) - 1
    while prod <= target_product:
        p = nextprime(p)
        if p > bound:
            log.warning("prime search bound %d reached with product %d", bound, prod)
            return PrimeSelection(chosen, prod, False, tested)
        if K.disc % p == 0 or p in excluded:
            continue
        tested += 1
        if theorem1_prime_test(K, p, strict=strict):
            chosen.append(p)
            prod *= p
    return PrimeSelection(chosen, prod, True, tested)


def passing_primes(params, limit: int, start: int = MIN_PRIME, strict: bool = False) -> list:
    K = _field(params)
    out = []
    p = max(start, MIN_PRIME) - 1
    while True:
        p = nextprime(p)
        if p >= limit:
            return out
        if K.disc % p and theorem1_prime_test(K, p, strict=strict):
            out.append(p)


# --------------------------------------------------------------------------
# From a zeta function to a field
# --------------------------------------------------------------------------


def _squarefree_part(n: int) -> tuple:
    """(s, f) with n = s * f^2 and s squarefree."""
    s, f = 1, 1
    for q, e in factorint(n).items():
        if e % 2:
            s *= q
        f *= q ** (e // 2)
    return s, f


def _is_k0_square(d: int, r1: Fraction, r2: Fraction) -> bool:
    """Is r1 + r2 sqrt d a square in Q(sqrt d)?"""
    N = r1 * r1 - d * r2 * r2
    if N < 0:
        return False
    nn = _frac_sqrt(N)
    if nn is None:
        return False
    for s in (nn, -nn):
        x2 = (r1 + s) / 2
        x = _frac_sqrt(x2) if x2 >= 0 else None
        if x is None:
            continue
        if x == 0:
            y2 = r1 / d if r2 == 0 else None
            if y2 is not None and y2 >= 0 and _frac_sqrt(y2) is not None:
                return True
            continue
        y = r2 / (2 * x)
        if x * x + d * y * y == r1:
            return True
    return False


def _frac_sqrt(x: Fraction) -> Optional[Fraction]:
    x = Fraction(x)
    if x < 0:
        return None
    n, m = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and m * m == x.denominator:
        return Fraction(n, m)
    return None


def same_field(p1: tuple, p2: tuple) -> bool:
    """Do (a, b, d) and (a', b', d') define the same CM field (up to isomorphism)?"""
    a1, b1, d1 = p1
    a2, b2, d2 = p2
    if d1 != d2:
        return False
    d = d1
    for sgn in (1, -1):
        # ratio (a1 + b1 r) / (a2 + sgn b2 r) as r1 + r2 r
        num = (Fraction(a1), Fraction(b1))
        den = (Fraction(a2), Fraction(sgn * b2))
        nd = den[0] ** 2 - d * den[1] ** 2
        r1 = (num[0] * den[0] - d * num[1] * den[1]) / nd
        r2 = (num[1] * den[0] - num[0] * den[1]) / nd
        if _is_k0_square(d, r1, r2):
            return True
    return False


def _reduce_params(A: int, B: int, d: int) -> tuple:
    """Small representative (a, b) of A + B sqrt d modulo squares of K0^*."""
    def strip(a, b):
        g = gcd(a, b)
        for q, e in factorint(g).items():
            k = e // 2
            a //= q ** (2 * k)
            b //= q ** (2 * k)
        return a, b

    best = strip(A, B)
    norm = abs(best[0] ** 2 - d * best[1] ** 2)
    improved = True
    while improved:
        improved = False
        a0, b0 = best
        norm = abs(a0 * a0 - d * b0 * b0)
        cands = []
        for k in range(1, isqrt(norm) + 1):
            if norm % (k * k):
                continue
            for g in k0_elements_of_norm(d, k):
                cands.append(g)
        eps = fundamental_unit(d)
        cands.append(eps)
        for g in cands:
            # divide a0 + b0 sqrt d by g^2 (g = u + v omega), keep if integral in Z[sqrt d]
            gx = _omega_to_sqrt(d, g)
            g2 = (gx[0] ** 2 + d * gx[1] ** 2, 2 * gx[0] * gx[1])
            for g2c in (g2, (g2[0], -g2[1])):
                den = g2c[0] ** 2 - d * g2c[1] ** 2
                r1 = (Fraction(a0) * g2c[0] - d * Fraction(b0) * g2c[1]) / den
                r2 = (Fraction(b0) * g2c[0] - Fraction(a0) * g2c[1]) / den
                for scale in (1, 4):
                    s1, s2 = r1 * scale, r2 * scale
                    if s1.denominator != 1 or s2.denominator != 1:
                        continue
                    cand = strip(int(s1), int(s2))
                    if cand[0] > 0 and cand[0] ** 2 - d * cand[1] ** 2 > 0 and (cand[0], abs(cand[1])) < (best[0], abs(best[1])):
                        best = cand
                        improved = True
    a, b = best
    return a, abs(b)


def _omega_to_sqrt(d: int, g: tuple) -> tuple:
    u, v = g
    if d % 4 == 1:
        return (Fraction(u) + Fraction(v, 2), Fraction(v, 2))
    return (Fraction(u), Fraction(v))


@dataclass(frozen=True)
class ZetaField:
    params: CMFieldParams
    s1: int
    s2: int
    raw_params: tuple  # before reduction


def field_from_zeta(n: int, N1: int, N2: int) -> ZetaField:
    """CM field generated by Frobenius for a curve with N1, N2 points over F_n, F_{n^2}."""
    s1 = n + 1 - N1
    twice = N2 - n * n - 1 + s1 * s1
    if twice % 2:
        raise WeilError("N2 gives a non-integral s2")
    s2 = twice // 2
    if gcd(s2, n) != 1:
        raise WeilError("gcd(s2, n) != 1: the Jacobian is not ordinary")
    disc = s1 * s1 - 4 * (s2 - 2 * n)
    if disc <= 0:
        raise WeilError("real subfield is not real quadratic; quartic is reducible or degenerate")
    d, f = _squarefree_part(disc)
    if d == 1:
        raise WeilError("pi + conj(pi) is rational: the quartic is reducible")
    # beta = (s1 + f sqrt d)/2,  -4(beta^2 - 4n) = A + B sqrt d
    A = 16 * n - s1 * s1 - f * f * d
    B = -2 * s1 * f
    if A <= 0 or A * A - B * B * d <= 0:
        raise WeilError("not a CM field (beta^2 - 4n is not totally negative)")
    a, b = _reduce_params(A, B, d)
    params = classify(a, b, d)
    return ZetaField(params, s1, s2, (A, B, d))
