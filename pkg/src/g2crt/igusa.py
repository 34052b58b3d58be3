"""Genus-2 curve models, Igusa invariants, Mestre reconstruction and point counts.

Invariants are computed from Clebsch's transvectant invariants ``A, B, C, D``
of the binary sextic and converted to Igusa-Clebsch ``(I2, I4, I6, I10)``.
Absolute invariants use the normalisation

    j1 = I2^5 / I10,  j2 = I2^3 I4 / I10,  j3 = I2^2 I6 / I10,

which is the one that reproduces the reference data bundled with the tests.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Optional, Sequence

from .ff import (
    FieldElement,
    FiniteField,
    Poly,
    is_squarefree,
    make_ext_field,
    peval,
    pmul,
    padd,
    pscale,
    ptrim,
)

NORMALIZATION = "j1=I2^5/I10, j2=I2^3*I4/I10, j3=I2^2*I6/I10"


class CurveError(ValueError):
    pass


# --------------------------------------------------------------------------
# Transvectants of binary forms, coefficient a_i of x^i z^(deg-i)
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _transvectant_terms(m: int, n: int, k: int) -> tuple:
    """Sparse rational tensor: (f, g)_k[r] = sum c * f[i] * g[l] over (i, l, r, c)."""
    scale = Fraction(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n))
    acc: dict = {}
    for j in range(k + 1):
        sign = (-1) ** j * comb(k, j)
        # d^(k-j)/dx^(k-j) d^j/dz^j of f, times d^j/dx^j d^(k-j)/dz^(k-j) of g
        for i in range(k - j, m + 1):
            if m - i < j:
                continue
            cf = factorial(i) // factorial(i - k + j) * factorial(m - i) // factorial(m - i - j)
            for l in range(j, n + 1):
                if n - l < k - j:
                    continue
                cg = factorial(l) // factorial(l - j) * factorial(n - l) // factorial(n - l - k + j)
                r = (i - k + j) + (l - j)
                key = (i, l, r)
                acc[key] = acc.get(key, 0) + sign * cf * cg
    return tuple((i, l, r, scale * c) for (i, l, r), c in acc.items() if c)


def to_field(F, x: Fraction):
    """Image of a rational number in F (denominator must be invertible)."""
    x = Fraction(x)
    num = F.from_int(x.numerator)
    if x.denominator == 1:
        return num
    return F.mul(num, F.inv(F.from_int(x.denominator)))


_term_cache: dict = {}


def _field_terms(F, m, n, k):
    key = (id(F), m, n, k)
    t = _term_cache.get(key)
    if t is None:
        t = [(i, l, r, to_field(F, c)) for i, l, r, c in _transvectant_terms(m, n, k)]
        _term_cache[key] = t
    return t


def transvectant(F, f: Sequence, g: Sequence, k: int, m: Optional[int] = None, n: Optional[int] = None) -> list:
    """k-th transvectant of binary forms of formal degrees m and n (raw coefficients)."""
    m = len(f) - 1 if m is None else m
    n = len(g) - 1 if n is None else n
    z = F.zero
    out = [z] * (m + n - 2 * k + 1)
    add, mul = F.add, F.mul
    for i, l, r, c in _field_terms(F, m, n, k):
        a, b = f[i], g[l]
        if a == z or b == z:
            continue
        out[r] = add(out[r], mul(c, mul(a, b)))
    return out


def _binary_mul(F, a, b):
    z = F.zero
    out = [z] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            out[i + j] = add(out[i + j], mul(x, y))
    return out


def clebsch_covariants(F, f: Sequence):
    """Clebsch invariants (A, B, C, D) and the quadratic covariants (y1, y2, y3)."""
    f = list(f) + [F.zero] * (7 - len(f))
    i = transvectant(F, f, f, 4)
    delta = transvectant(F, i, i, 2)
    y1 = transvectant(F, f, i, 4)
    y2 = transvectant(F, i, y1, 2)
    y3 = transvectant(F, i, y2, 2)
    A = transvectant(F, f, f, 6)[0]
    B = transvectant(F, i, i, 4)[0]
    C = transvectant(F, i, delta, 4)[0]
    D = transvectant(F, y3, y1, 2)[0]
    return (A, B, C, D), (y1, y2, y3)


def _clebsch_to_ic(F, A, B, C, D):
    c = lambda n: F.from_int(n)
    mul, add = F.mul, F.add
    A2 = mul(A, A)
    A3 = mul(A2, A)
    A5 = mul(A3, A2)
    AB = mul(A, B)
    I2 = mul(c(-120), A)
    I4 = add(mul(c(-720), A2), mul(c(6750), B))
    I6 = add(add(mul(c(8640), A3), mul(c(-108000), AB)), mul(c(202500), C))
    terms = [
        mul(c(-62208), A5),
        mul(c(972000), mul(A3, B)),
        mul(c(1620000), mul(A2, C)),
        mul(c(-3037500), mul(AB, B)),
        mul(c(-6075000), mul(B, C)),
        mul(c(-4556250), D),
    ]
    I10 = F.zero
    for t in terms:
        I10 = add(I10, t)
    return I2, I4, I6, I10


def _ic_to_clebsch(F, I2, I4, I6, I10):
    fr = lambda x: to_field(F, Fraction(x))
    mul, add, sub = F.mul, F.add, F.sub
    A = mul(fr(Fraction(-1, 120)), I2)
    A2 = mul(A, A)
    A3 = mul(A2, A)
    B = mul(add(I4, mul(F.from_int(720), A2)), fr(Fraction(1, 6750)))
    C = mul(
        add(sub(I6, mul(F.from_int(8640), A3)), mul(F.from_int(108000), mul(A, B))),
        fr(Fraction(1, 202500)),
    )
    rest = F.neg(I10)
    for coeff, mono in (
        (-62208, mul(A3, A2)),
        (972000, mul(A3, B)),
        (1620000, mul(A2, C)),
        (-3037500, mul(mul(A, B), B)),
        (-6075000, mul(B, C)),
    ):
        rest = add(rest, mul(F.from_int(coeff), mono))
    D = mul(rest, fr(Fraction(1, 4556250)))
    return A, B, C, D


# --------------------------------------------------------------------------
# Curves and invariants
# --------------------------------------------------------------------------


class GenusTwoCurve:
    """y^2 = f(x) with deg f in {5, 6} and f squarefree."""

    __slots__ = ("field", "f")

    def __init__(self, field: FiniteField, f):
        if field.p < 7:
            raise CurveError("characteristic must be at least 7")
        if not isinstance(f, Poly):
            f = Poly(field, f)
        elif f.field is not field:
            raise CurveError("polynomial is over a different field")
        if f.degree not in (5, 6):
            raise CurveError(f"genus-2 model needs degree 5 or 6, got {f.degree}")
        if not is_squarefree(f):
            raise CurveError("f is not squarefree; the model is singular")
        self.field = field
        self.f = f

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def raw(self) -> list:
        return list(self.f.coeffs)

    def __eq__(self, other):
        return isinstance(other, GenusTwoCurve) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"GenusTwoCurve(y^2 = {self.f!r} over {self.field!r})"

    def to_dict(self) -> dict:
        F = self.field
        return {
            "p": F.p,
            "m": F.m,
            "modulus": list(F.modulus),
            "f": [list(F.to_coords(c)) if F.m > 1 else F.to_prime(c) for c in self.f.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenusTwoCurve":
        F = make_ext_field(d["p"], d["m"])
        if tuple(d["modulus"]) != tuple(F.modulus):
            raise CurveError("serialized modulus does not match the canonical model")
        raw = [F.from_coords(c) if isinstance(c, list) else F.from_int(c) for c in d["f"]]
        return cls(F, Poly.from_raw(F, raw))


@dataclass(frozen=True)
class IgusaClebsch:
    I2: FieldElement
    I4: FieldElement
    I6: FieldElement
    I10: FieldElement

    def as_tuple(self):
        return (self.I2, self.I4, self.I6, self.I10)


@dataclass(frozen=True)
class IgusaTriple:
    j1: FieldElement
    j2: FieldElement
    j3: FieldElement

    def as_ints(self) -> tuple:
        return (int(self.j1), int(self.j2), int(self.j3))

    def __iter__(self):
        return iter((self.j1, self.j2, self.j3))


def igusa_clebsch_raw(F, f: Sequence) -> tuple:
    (A, B, C, D), _ = clebsch_covariants(F, f)
    return _clebsch_to_ic(F, A, B, C, D)


def igusa_clebsch(curve: GenusTwoCurve) -> IgusaClebsch:
    F = curve.field
    vals = igusa_clebsch_raw(F, curve.raw)
    return IgusaClebsch(*(FieldElement(F, v) for v in vals))


def absolute_from_ic_raw(F, I2, I4, I6, I10) -> tuple:
    if I10 == F.zero:
        raise CurveError("I10 vanishes; the sextic is singular")
    iv = F.inv(I10)
    mul = F.mul
    I2_2 = mul(I2, I2)
    I2_3 = mul(I2_2, I2)
    j1 = mul(mul(I2_3, I2_2), iv)
    j2 = mul(mul(I2_3, I4), iv)
    j3 = mul(mul(I2_2, I6), iv)
    return j1, j2, j3


def absolute_invariants(ic) -> IgusaTriple:
    """Absolute invariants of an IgusaClebsch tuple (or of a curve, for convenience)."""
    if isinstance(ic, GenusTwoCurve):
        ic = igusa_clebsch(ic)
    F = ic.I2.field
    vals = absolute_from_ic_raw(F, *(x.raw for x in ic.as_tuple()))
    return IgusaTriple(*(FieldElement(F, v) for v in vals))


def triple_raw(F, f: Sequence) -> Optional[tuple]:
    """Absolute invariants of y^2 = f as raw values, or None if I10 = 0."""
    I = igusa_clebsch_raw(F, f)
    if I[3] == F.zero:
        return None
    return absolute_from_ic_raw(F, *I)


# --------------------------------------------------------------------------
# Mestre reconstruction
# --------------------------------------------------------------------------


_table_cache: dict = {}


def _field_tables(F):
    t = _table_cache.get(id(F))
    if t is None:
        from . import _mestre_tables as tables

        conv = lambda poly: [(m, to_field(F, c)) for m, c in poly.items()]
        t = ({k: conv(v) for k, v in tables.CONIC.items()}, {k: conv(v) for k, v in tables.CUBIC.items()})
        _table_cache[id(F)] = t
    return t


def _eval_table(F, poly, powers):
    mul, add = F.mul, F.add
    total = F.zero
    for (a, b, c, e), coeff in poly:
        mono = mul(mul(powers[0][a], powers[1][b]), mul(powers[2][c], powers[3][e]))
        total = add(total, mul(coeff, mono))
    return total


def mestre_conic_cubic(F, A, B, C, D):
    """Conic matrix G (symmetric 3x3) and symmetric cubic tensor T in raw values."""
    conic, cubic = _field_tables(F)
    powers = []
    for x in (A, B, C, D):
        row = [F.one]
        for _ in range(5):
            row.append(F.mul(row[-1], x))
        powers.append(row)
    G = [[F.zero] * 3 for _ in range(3)]
    for (i, j), poly in conic.items():
        v = _eval_table(F, poly, powers)
        G[i][j] = G[j][i] = v
    T = {}
    for key, poly in cubic.items():
        v = _eval_table(F, poly, powers)
        for perm in set(itertools.permutations(key)):
            T[perm] = v
    return G, T


def _det3(F, M):
    mul, sub, add = F.mul, F.sub, F.add
    a = mul(M[0][0], sub(mul(M[1][1], M[2][2]), mul(M[1][2], M[2][1])))
    b = mul(M[0][1], sub(mul(M[1][0], M[2][2]), mul(M[1][2], M[2][0])))
    c = mul(M[0][2], sub(mul(M[1][0], M[2][1]), mul(M[1][1], M[2][0])))
    return add(sub(a, b), c)


def _qform(F, G, u, v):
    s = F.zero
    for i in range(3):
        if u[i] == F.zero:
            continue
        for j in range(3):
            s = F.add(s, F.mul(G[i][j], F.mul(u[i], v[j])))
    return s


def conic_point(F, G, rng: random.Random):
    """A nonzero rational point of w^T G w = 0 for a nondegenerate conic."""
    z, one = F.zero, F.one
    if G[2][2] == z:
        return [z, z, one]
    for _ in range(64 * F.q + 64):
        w0, w1 = F.random(rng), F.random(rng)
        # G22 w2^2 + 2 (G02 w0 + G12 w1) w2 + Q(w0, w1, 0) = 0
        b = F.add(F.mul(G[0][2], w0), F.mul(G[1][2], w1))
        c = _qform(F, G, [w0, w1, z], [w0, w1, z])
        disc = F.sub(F.mul(b, b), F.mul(G[2][2], c))
        r = F.sqrt(disc)
        if r is None:
            continue
        w2 = F.div(F.sub(r, b), G[2][2])
        w = [w0, w1, w2]
        if any(x != z for x in w):
            return w
    raise CurveError("no point found on conic")  # pragma: no cover


def _sextic_from_conic(F, G, T, P0):
    z, one = F.zero, F.one
    basis = [[one, z, z], [z, one, z], [z, z, one]]
    # choose Q1, Q2 with det[P0, Q1, Q2] != 0
    for a, b in ((0, 1), (0, 2), (1, 2)):
        Q1, Q2 = basis[a], basis[b]
        if _det3(F, [P0, Q1, Q2]) != z:
            break
    # D(t) = Q1 + t Q2 as linear polys in t
    Dt = [[Q1[i], Q2[i]] for i in range(3)]
    Dt = [ptrim(F, list(x)) for x in Dt]
    qd: list = []
    bd: list = []
    for i in range(3):
        for j in range(3):
            if G[i][j] == z:
                continue
            qd = padd(F, qd, pscale(F, pmul(F, Dt[i], Dt[j]), G[i][j]))
            bd = padd(F, bd, pscale(F, Dt[j], F.mul(G[i][j], P0[i])))
    two_bd = pscale(F, bd, F.from_int(2))
    w = [padd(F, pscale(F, qd, P0[i]), pscale(F, pmul(F, two_bd, Dt[i]), F.neg(one))) for i in range(3)]
    f: list = []
    ww = {}
    for i in range(3):
        for j in range(3):
            ww[(i, j)] = pmul(F, w[i], w[j])
    for (i, j, k), c in T.items():
        if c == z:
            continue
        f = padd(F, f, pscale(F, pmul(F, ww[(i, j)], w[k]), c))
    return f


@dataclass
class MestreResult:
    curve: Optional[GenusTwoCurve]
    status: str  # "conic", "fallback", "degenerate-exhausted", "i2-zero", "not-invertible"


def _triple_to_clebsch(F, triple):
    j1, j2, j3 = triple
    if j1 == F.zero:
        return None
    ij = F.inv(j1)
    I = (F.one, F.mul(j2, ij), F.mul(j3, ij), ij)
    return _ic_to_clebsch(F, *I)


def mestre_raw(F, triple, rng: random.Random) -> Optional[list]:
    """Sextic with the given absolute invariants via the conic route, or None if degenerate."""
    abcd = _triple_to_clebsch(F, triple)
    if abcd is None:
        return None
    G, T = mestre_conic_cubic(F, *abcd)
    if _det3(F, G) == F.zero:
        return None
    P0 = conic_point(F, G, rng)
    f = _sextic_from_conic(F, G, T, P0)
    if len(f) - 1 not in (5, 6):
        return None
    fp = Poly.from_raw(F, f)
    if not is_squarefree(fp):
        return None
    if triple_raw(F, f) != tuple(triple):
        return None
    return f


def ic_equivalent(F, I, J) -> bool:
    """Do two Igusa-Clebsch tuples agree in weighted projective space (weights 1, 2, 3, 5)?"""
    w = (1, 2, 3, 5)
    z = F.zero
    if any((a == z) != (b == z) for a, b in zip(I, J)):
        return False
    idx = [k for k in range(4) if I[k] != z]
    for x in idx:
        for y in idx:
            if x < y:
                lhs = F.mul(F.pow(I[x], w[y]), F.pow(J[y], w[x]))
                rhs = F.mul(F.pow(I[y], w[x]), F.pow(J[x], w[y]))
                if lhs != rhs:
                    return False
    return True


def mestre_from_ic_raw(F, ic, rng: random.Random) -> Optional[list]:
    """Sextic with Igusa-Clebsch invariants equivalent to ``ic`` (any I2), or None if degenerate."""
    G, T = mestre_conic_cubic(F, *_ic_to_clebsch(F, *ic))
    if _det3(F, G) == F.zero:
        return None
    f = _sextic_from_conic(F, G, T, conic_point(F, G, rng))
    if len(f) - 1 not in (5, 6) or not is_squarefree(Poly.from_raw(F, f)):
        return None
    I = igusa_clebsch_raw(F, f)
    if I[3] == F.zero or not ic_equivalent(F, I, tuple(ic)):
        return None
    return f


def i2_zero_classes(F) -> list:
    """One Igusa-Clebsch representative (0, I4, I6, I10) per class with I2 = 0 and I10 != 0."""
    z = F.zero
    g = 5 if (F.q - 1) % 5 == 0 else 1
    gen = None
    if g > 1:
        for c in F.elements():
            if c != z and F.pow(c, (F.q - 1) // 5) != F.one:
                gen = c
                break
    tens = [F.one] if g == 1 else [F.pow(gen, i) for i in range(5)]
    seen = set()
    out = []
    for I10 in tens:
        iv = F.inv(I10)
        iv2, iv3 = F.mul(iv, iv), F.pow(iv, 3)
        for I4 in F.elements():
            for I6 in F.elements():
                # complete invariants of the weighted class
                key = (F.mul(F.pow(I4, 5), iv2), F.mul(F.pow(I6, 5), iv3), F.mul(F.mul(I4, I6), iv))
                if key in seen:
                    continue
                seen.add(key)
                out.append((z, I4, I6, I10))
    return out


def _normalize_triple(field, triple):
    out = []
    for t in triple:
        if isinstance(t, FieldElement):
            out.append(t.raw)
        else:
            out.append(field.from_int(int(t)))
    return tuple(out)


def mestre_construct(triple, field: FiniteField, seed: int = 0, budget: Optional[int] = None,
                     return_status: bool = False):
    """A curve over ``field`` whose absolute invariants equal ``triple``.

    The conic/cubic construction is tried first.  If it degenerates (the
    curve would have extra automorphisms) a seeded search over the even
    sextics x^6 + a x^4 + b x^2 + c and then over random sextics is run, at
    most ``budget`` trials (default 50 p^3).
    """
    F = field
    rng = random.Random(seed)
    t = _normalize_triple(F, triple)
    res = _mestre(F, t, rng, budget)
    return res if return_status else res.curve


def _mestre(F, t, rng, budget) -> MestreResult:
    if t[0] == F.zero:
        return MestreResult(None, "i2-zero")
    f = mestre_raw(F, t, rng)
    if f is not None:
        return MestreResult(GenusTwoCurve(F, Poly.from_raw(F, f)), "conic")
    budget = 50 * F.p**3 if budget is None else budget
    trials = 0
    one, z = F.one, F.zero
    order = list(range(F.q**3)) if F.q**3 <= budget else None
    if order is not None:
        rng.shuffle(order)
        for code in order:
            trials += 1
            a = F.from_index(code % F.q)
            b = F.from_index(code // F.q % F.q)
            c = F.from_index(code // (F.q * F.q))
            f = [c, z, b, z, a, z, one]
            if _match(F, f, t):
                return MestreResult(GenusTwoCurve(F, Poly.from_raw(F, f)), "fallback")
    while trials < budget:
        trials += 1
        f = [F.random(rng) for _ in range(6)] + [one]
        if _match(F, f, t):
            return MestreResult(GenusTwoCurve(F, Poly.from_raw(F, f)), "fallback")
    return MestreResult(None, "degenerate-exhausted")


def _match(F, f, t):
    tr = triple_raw(F, f)
    return tr is not None and tr == t


# --------------------------------------------------------------------------
# Point counting and twists
# --------------------------------------------------------------------------


def points_at_infinity(F, f_raw: Sequence) -> int:
    if len(f_raw) - 1 == 5:
        return 1
    return 2 if F.is_square(f_raw[-1]) else 0


def count_points_raw(F, f_raw: Sequence) -> int:
    """#C(F) for y^2 = f over the field F itself."""
    total = points_at_infinity(F, f_raw)
    z = F.zero
    if F.m == 1:
        p = F.p
        leg = F.legendre_table()
        cs = list(f_raw)
        for x in range(p):
            v = 0
            for c in reversed(cs):
                v = (v * x + c) % p
            total += 1 + leg[v]
        return total
    sq = F.is_square
    for x in F.elements():
        v = peval(F, f_raw, x)
        total += 1 if v == z else (2 if sq(v) else 0)
    return total


def count_points(curve: GenusTwoCurve, k: int) -> int:
    """N_k = #C(F_{p^k}) for a curve over a prime field, k in {1, 2}."""
    F = curve.field
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if F.m != 1:
        raise CurveError("count_points expects a curve over a prime field")
    if k == 1:
        return count_points_raw(F, curve.raw)
    E = make_ext_field(F.p, 2)
    f2 = [E.from_int(c) for c in curve.raw]
    return count_points_raw(E, f2)


def jacobian_order_from_counts(N1: int, N2: int, p: int) -> int:
    s = N1 * N1 + N2
    if s % 2:
        raise ValueError("N1 and N2 have inconsistent parity")
    return s // 2 - p


def lpoly_from_counts(N1: int, N2: int, p: int) -> tuple:
    """(a1, a2) with L(T) = 1 + a1 T + a2 T^2 + p a1 T^3 + p^2 T^4."""
    s1 = N1 - p - 1
    s2 = N2 - p * p - 1
    a1 = s1
    a2 = (s1 * s1 + s2) // 2
    return a1, a2


def charpoly_from_counts(N1: int, N2: int, p: int) -> list:
    """Frobenius characteristic polynomial t^4 - s t^3 + ... lowest first."""
    a1, a2 = lpoly_from_counts(N1, N2, p)
    return [p * p, p * a1, a2, a1, 1]


def quadratic_twist(curve: GenusTwoCurve) -> GenusTwoCurve:
    F = curve.field
    u = F.smallest_nonresidue()
    return GenusTwoCurve(F, Poly.from_raw(F, pscale(F, curve.raw, u)))


def mobius_transform(curve: GenusTwoCurve, alpha, beta, gamma, delta) -> GenusTwoCurve:
    """Model (gamma x + delta)^6 f((alpha x + beta)/(gamma x + delta)) of the same curve."""
    F = curve.field
    a, b, c, d = (F.from_int(v) if isinstance(v, int) else v for v in (alpha, beta, gamma, delta))
    if F.sub(F.mul(a, d), F.mul(b, c)) == F.zero:
        raise CurveError("singular substitution")
    num = ptrim(F, [b, a])
    den = ptrim(F, [d, c])
    coeffs = list(curve.raw) + [F.zero] * (7 - len(curve.raw))
    out: list = []
    for i, ci in enumerate(coeffs):
        if ci == F.zero:
            continue
        term = [F.one]
        for _ in range(i):
            term = pmul(F, term, num)
        for _ in range(6 - i):
            term = pmul(F, term, den)
        out = padd(F, out, pscale(F, term, ci))
    return GenusTwoCurve(F, Poly.from_raw(F, out))
