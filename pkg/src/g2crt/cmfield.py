"""Quartic CM fields K = Q(eta), eta = i*sqrt(a + b*sqrt(d)).

Elements are stored as exact rational coordinates over the Q-basis
{1, sqrt(d), eta, sqrt(d)*eta}.  Writing x = X + Y*eta with X, Y in the real
quadratic subfield K0 = Q(sqrt d), multiplication uses eta^2 = -(a + b sqrt d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Optional, Sequence

from sympy import Poly as SymPoly
from sympy import ZZ, factorint, symbols
from sympy.polys.numberfields.basis import round_two

__all__ = [
    "CMFieldError",
    "CMFieldParams",
    "CMField",
    "CMElement",
    "IntegralBasis",
    "classify",
    "ring_of_integers",
    "conj",
    "norms_and_minpoly",
    "to_pi_basis",
    "to_basis",
    "class_number_K0",
    "fundamental_unit",
]


class CMFieldError(ValueError):
    pass


def _squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class CMFieldParams:
    a: int
    b: int
    d: int
    delta: int
    galois_type: str
    primitive: bool

    def __str__(self):
        sign = "+" if self.b >= 0 else "-"
        return f"Q(i*sqrt({self.a}{sign}{abs(self.b)}*sqrt({self.d})))"


def classify(a: int, b: int, d: int) -> CMFieldParams:
    """Validate (a, b, d) and determine primitivity and the Galois type."""
    if d <= 1 or not _squarefree(d):
        raise CMFieldError(f"d = {d} must be a squarefree integer > 1")
    g = gcd(a, b)
    if g > 1 and not _squarefree(g):
        raise CMFieldError(f"(a, b) = ({a}, {b}) is divisible by a square")
    if b == 0:
        raise CMFieldError("b = 0 gives a biquadratic field")
    delta = a * a - b * b * d
    if a <= 0 or delta <= 0:
        raise CMFieldError("a + b*sqrt(d) must be totally positive (eta totally imaginary)")
    if _is_square(delta):
        raise CMFieldError(f"non-primitive field: a^2 - b^2 d = {delta} is a square (biquadratic)")
    if delta % d == 0 and _is_square(delta // d):
        galois = "cyclic"
    else:
        galois = "dihedral"
    params = CMFieldParams(a, b, d, delta, galois, True)
    if _field_disc(a, b, d) == 125:
        raise CMFieldError("K = Q(zeta_5) is excluded")
    return params


@lru_cache(maxsize=None)
def _field_disc(a: int, b: int, d: int) -> int:
    """Discriminant of K from the minimal polynomial of eta (sympy Round Two)."""
    t = symbols("t")
    T = SymPoly(t**4 + 2 * a * t**2 + (a * a - b * b * d), t, domain=ZZ)
    _, dK = round_two(T)
    return int(dK)


# --------------------------------------------------------------------------
# Elements
# --------------------------------------------------------------------------


class CMElement:
    """x1 + x2 sqrt(d) + (x3 + x4 sqrt(d)) eta with rational x_i."""

    __slots__ = ("K", "c")

    def __init__(self, K: "CMField", coords: Sequence):
        if len(coords) != 4:
            raise CMFieldError("CMElement needs four coordinates")
        self.K = K
        self.c = tuple(Fraction(x) for x in coords)

    def _lift(self, other):
        if isinstance(other, CMElement):
            if other.K != self.K:
                raise CMFieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return CMElement(self.K, (other, 0, 0, 0))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CMElement(self.K, [x + y for x, y in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CMElement(self.K, [x - y for x, y in zip(self.c, o.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CMElement(self.K, [-x for x in self.c])

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        K = self.K
        X1, Y1 = (self.c[0], self.c[1]), (self.c[2], self.c[3])
        X2, Y2 = (o.c[0], o.c[1]), (o.c[2], o.c[3])
        m = K._k0mul
        e2 = K._eta2
        X = _k0add(m(X1, X2), m(e2, m(Y1, Y2)))
        Y = _k0add(m(X1, Y2), m(Y1, X2))
        return CMElement(K, (X[0], X[1], Y[0], Y[1]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.K.one
        base = self
        while e:
            if e & 1:
                r = r * base
            e >>= 1
            if e:
                base = base * base
        return r

    def inverse(self):
        n = self * conj(self)  # in K0
        u, v = n.c[0], n.c[1]
        nn = u * u - self.K.d * v * v
        if nn == 0:
            raise ZeroDivisionError("inverse of zero in K")
        inv_n = CMElement(self.K, (u / nn, -v / nn, 0, 0))
        return conj(self) * inv_n

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash((self.K.a, self.K.b, self.K.d, self.c))

    def is_real(self):
        return self.c[2] == 0 and self.c[3] == 0

    def is_zero(self):
        return not any(self.c)

    def real_conj(self):
        """Image under sqrt(d) -> -sqrt(d), eta -> eta' with eta'^2 = -(a - b sqrt d).

        Only meaningful on K0; for general x use the complex embeddings.
        """
        if not self.is_real():
            raise CMFieldError("real conjugation is only defined on K0 here")
        return CMElement(self.K, (self.c[0], -self.c[1], 0, 0))

    def embeddings(self) -> list:
        """The four complex embeddings, ordered (phi1, conj phi1, phi2, conj phi2)."""
        K = self.K
        out = []
        for s in (1, -1):
            sd = s * math.sqrt(K.d)
            eta = 1j * math.sqrt(K.a + K.b * sd)
            for sign in (1, -1):
                x1, x2, x3, x4 = (float(v) for v in self.c)
                out.append(x1 + x2 * sd + (x3 + x4 * sd) * eta * sign)
        return out

    def __repr__(self):
        return f"CMElement{tuple(str(x) for x in self.c)}"


def _k0add(x, y):
    return (x[0] + y[0], x[1] + y[1])


class CMField:
    """The field K with its standard elements."""

    def __init__(self, a: int, b: int, d: int, params: Optional[CMFieldParams] = None):
        self.params = params or classify(a, b, d)
        self.a, self.b, self.d = a, b, d
        self._eta2 = (Fraction(-a), Fraction(-b))

    def _k0mul(self, x, y):
        return (x[0] * y[0] + self.d * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def __eq__(self, other):
        return isinstance(other, CMField) and (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return str(self.params)

    def element(self, x1=0, x2=0, x3=0, x4=0) -> CMElement:
        return CMElement(self, (x1, x2, x3, x4))

    @property
    def one(self):
        return self.element(1)

    @property
    def sqrt_d(self):
        return self.element(0, 1)

    @property
    def eta(self):
        return self.element(0, 0, 1)

    @property
    def omega(self):
        """Generator of O_K0 over Z: (1 + sqrt d)/2 if d = 1 mod 4, else sqrt d."""
        if self.d % 4 == 1:
            return self.element(Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_d

    def k0(self, u, v) -> CMElement:
        """u + v*omega."""
        return self.one * u + self.omega * v

    @property
    def disc_K0(self):
        return self.d if self.d % 4 == 1 else 4 * self.d

    @cached_property
    def disc(self):
        return _field_disc(self.a, self.b, self.d)

    @cached_property
    def integral_basis(self) -> "IntegralBasis":
        return ring_of_integers(self.params)


def conj(x: CMElement) -> CMElement:
    """Complex conjugation eta -> -eta, the generator of Gal(K/K0)."""
    return CMElement(x.K, (x.c[0], x.c[1], -x.c[2], -x.c[3]))


# --------------------------------------------------------------------------
# Characteristic and minimal polynomials
# --------------------------------------------------------------------------


def mult_matrix(x: CMElement) -> list:
    """Matrix of y -> x*y on the coordinate basis (columns are images of basis vectors)."""
    K = x.K
    basis = [K.element(*[1 if i == j else 0 for i in range(4)]) for j in range(4)]
    cols = [(x * e).c for e in basis]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def charpoly(x: CMElement) -> list:
    """Characteristic polynomial over Q, lowest degree first (Faddeev-LeVerrier)."""
    M = mult_matrix(x)
    n = 4
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        AM = [[sum(M[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def _qpoly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _qpoly_gcd(a, b):
    a, b = list(a), list(b)
    while b and any(b):
        _, r = _qpoly_divmod(a, b)
        a, b = b, r
    lc = a[-1]
    return [c / lc for c in a]


def minpoly(x: CMElement) -> list:
    cp = charpoly(x)
    deriv = [i * cp[i] for i in range(1, len(cp))]
    g = _qpoly_gcd(cp, deriv)
    q, r = _qpoly_divmod(cp, g)
    assert not any(r)
    lc = q[-1]
    return [c / lc for c in q]


@dataclass(frozen=True)
class Norms:
    rel_norm: CMElement
    abs_norm: Fraction
    minpoly: list


def norms_and_minpoly(x: CMElement) -> Norms:
    rel = x * conj(x)
    u, v = rel.c[0], rel.c[1]
    absn = u * u - x.K.d * v * v
    return Norms(rel, absn, minpoly(x))


def is_integral(x: CMElement) -> bool:
    return all(c.denominator == 1 for c in charpoly(x))


# --------------------------------------------------------------------------
# Exact linear algebra helpers
# --------------------------------------------------------------------------


def _solve(M: list, rhs: Sequence) -> Optional[list]:
    """Solve M c = rhs over Q (M square); None if singular."""
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [vr - f * vc for vr, vc in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def _lcm_denoms(vals) -> int:
    s = 1
    for v in vals:
        s = s * v.denominator // gcd(s, v.denominator)
    return s


def to_basis(x: CMElement, basis: Sequence[CMElement]) -> tuple:
    """(g, s): integers g_i and minimal s > 0 with s*x = sum g_i basis_i."""
    M = [[basis[j].c[i] for j in range(4)] for i in range(4)]
    sol = _solve(M, x.c)
    if sol is None:
        raise CMFieldError("the given elements do not form a Q-basis of K")
    s = _lcm_denoms(sol)
    return [int(v * s) for v in sol], s


def to_pi_basis(x: CMElement, pi: CMElement) -> tuple:
    """(g, s) with s*x = g(pi), g integral of degree <= 3 (lowest first), s minimal."""
    if len(minpoly(pi)) != 5:
        raise CMFieldError("pi does not generate K over Q")
    powers = [pi**k for k in range(4)]
    return to_basis(x, powers)


def from_basis(g: Sequence[int], s: int, basis: Sequence[CMElement]) -> CMElement:
    K = basis[0].K
    acc = K.element()
    for gi, b in zip(g, basis):
        acc = acc + b * gi
    return acc / s


# --------------------------------------------------------------------------
# Ring of integers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralBasis:
    basis: tuple  # (1, omega, kappa, omega*kappa)
    disc_K: int
    kappa: CMElement
    index_over_eta: int  # [O_K : O_K0[eta]]

    @property
    def index_over_sqrt_d_eta(self) -> int:
        """[O_K : Z[sqrt d, eta]]; Z[sqrt d] has index 2 in O_K0 when d = 1 mod 4."""
        d = self.kappa.K.d
        return self.index_over_eta * (4 if d % 4 == 1 else 1)

    def __iter__(self):
        return iter(self.basis)

    def coords(self, x: CMElement) -> list:
        """Integer coordinates of x in the basis (raises if x is not integral)."""
        g, s = to_basis(x, self.basis)
        if s != 1:
            raise CMFieldError("element is not in O_K")
        return g

    def contains(self, x: CMElement) -> bool:
        _, s = to_basis(x, self.basis)
        return s == 1


def _det(M):
    n = len(M)
    A = [list(map(Fraction, r)) for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def trace(x: CMElement) -> Fraction:
    return -charpoly(x)[3]


def basis_discriminant(basis: Sequence[CMElement]) -> Fraction:
    M = [[trace(bi * bj) for bj in basis] for bi in basis]
    return _det(M)


def ring_of_integers(params: CMFieldParams) -> IntegralBasis:
    """O_K = O_K0 + O_K0*kappa, certified by the field discriminant."""
    a, b, d = params.a, params.b, params.d
    if class_number_K0(d) != 1:
        raise CMFieldError(f"h(Q(sqrt {d})) != 1; relative integral basis not available")
    K = CMField(a, b, d, params)
    dK = K.disc
    base_disc = 16 * K.disc_K0**2 * params.delta
    if base_disc % dK:
        raise CMFieldError("discriminant mismatch; cannot certify an integral basis")  # pragma: no cover
    t2 = base_disc // dK
    t = isqrt(t2)
    if t * t != t2:
        raise CMFieldError("index of O_K0[eta] is not a perfect square")  # pragma: no cover
    one, om, eta = K.one, K.omega, K.eta
    found = None
    # kappa = (alpha + eta)/c where (c) is the relative index ideal, |N(c)| = t,
    # and alpha runs over O_K0 modulo c
    residues = [(u, v) for u in range(t) for v in range(t)]
    for cu, cv in k0_ideal_generators(d, t):
        c = K.k0(cu, cv)
        for au, av in residues:
            kappa = (K.k0(au, av) + eta) / c
            if not is_integral(kappa):
                continue
            kappa = _reduce_mod_k0(K, kappa)
            basis = (one, om, kappa, om * kappa)
            if basis_discriminant(basis) == dK:
                found = basis
                break
        if found:
            break
    if found is None:
        raise CMFieldError("no relative integral basis found among candidates")
    return IntegralBasis(found, dK, found[2], t)


def _reduce_mod_k0(K: CMField, x: CMElement) -> CMElement:
    """Shift x by an element of O_K0 so its K0-part has coordinates in [0, 1) over {1, omega}."""
    x1, x2 = x.c[0], x.c[1]
    if K.d % 4 == 1:
        v = 2 * x2  # x1 + x2 sqrt d = (x1 - x2) + 2 x2 omega
        u = x1 - x2
    else:
        u, v = x1, x2
    return x - K.k0(math.floor(u), math.floor(v))


# --------------------------------------------------------------------------
# Real quadratic class numbers
# --------------------------------------------------------------------------


def _reduced_forms(D: int) -> list:
    """Reduced forms (a, b, c) of discriminant D: 0 < b < sqrt D, sqrt D - b < 2|a| < sqrt D + b."""
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (D - b * b) % 4:
            continue
        ac = (b * b - D) // 4
        for a in range(1, -ac + 1):
            if ac % a:
                continue
            # the strict window on 2|a| in integers, sqrt D being irrational
            if not (s - b < 2 * a <= s + b):
                continue
            out.append((a, b, ac // a))
            out.append((-a, b, -(ac // a)))
    return out


def _rho(D: int, f: tuple) -> tuple:
    a, b, c = f
    s = math.isqrt(D)
    m = 2 * abs(c)
    # unique r = -b mod 2|c| with sqrt D - 2|c| < r < sqrt D
    r = s - ((s + b) % m)
    return (c, r, (r * r - D) // (4 * c))


def _narrow_cycles(D: int) -> list:
    seen = set()
    cycles = []
    for f in _reduced_forms(D):
        if f in seen:
            continue
        cyc = []
        g = f
        while g not in seen:
            seen.add(g)
            cyc.append(g)
            g = _rho(D, g)
        cycles.append(cyc)
    return cycles


@lru_cache(maxsize=None)
def class_number_K0(d: int) -> int:
    """Class number of Q(sqrt d) by counting cycles of reduced indefinite forms."""
    if d <= 1 or not _squarefree(d):
        raise CMFieldError("d must be squarefree > 1")
    D = d if d % 4 == 1 else 4 * d
    cycles = _narrow_cycles(D)
    h_plus = len(cycles)
    principal = next(c for c in cycles if any(f[0] == 1 for f in c))
    neg_unit = any(f[0] == -1 for f in principal)
    return h_plus if neg_unit else h_plus // 2


@lru_cache(maxsize=None)
def fundamental_unit(d: int) -> tuple:
    """(u, v) with eps = u + v*omega the fundamental unit (> 1) of Q(sqrt d).

    Walks the continued fraction of omega; the first convergent h/k whose
    companion h - k*omega' has norm +-1 gives eps.
    """
    tr = 1 if d % 4 == 1 else 0
    P, Q = (1, 2) if tr else (0, 1)
    s = math.isqrt(d)
    h, h_prev = 1, 0
    k, k_prev = 0, 1
    while True:
        an = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        h, h_prev = an * h + h_prev, h
        k, k_prev = an * k + k_prev, k
        P = an * Q - P
        Q = (d - P * P) // Q
        u, v = h - k * tr, k
        if _k0_norm(d, u, v) in (1, -1):
            return (u, v)


def _k0_norm(d: int, u: int, v: int) -> int:
    """Norm of u + v*omega."""
    if d % 4 == 1:
        return u * u + u * v - (d - 1) // 4 * v * v
    return u * u - d * v * v


# Integer arithmetic in O_K0 = Z[omega]; elements are pairs (u, v) = u + v*omega.


def k0_mul(d: int, x: tuple, y: tuple) -> tuple:
    u1, v1 = x
    u2, v2 = y
    if d % 4 == 1:
        n = (d - 1) // 4  # omega^2 = omega + n
        return (u1 * u2 + n * v1 * v2, u1 * v2 + u2 * v1 + v1 * v2)
    return (u1 * u2 + d * v1 * v2, u1 * v2 + u2 * v1)


def k0_conj(d: int, x: tuple) -> tuple:
    u, v = x
    if d % 4 == 1:
        return (u + v, -v)
    return (u, -v)


def k0_divides(d: int, x: tuple, y: tuple) -> bool:
    """True iff x | y in O_K0."""
    n = _k0_norm(d, *x)
    if n == 0:
        return y == (0, 0)
    q = k0_mul(d, y, k0_conj(d, x))
    return q[0] % n == 0 and q[1] % n == 0


def k0_elements_of_norm(d: int, n: int) -> list:
    """Elements c of O_K0 with N(c) = +-n, one generator per principal ideal."""
    if n == 1:
        return [(1, 0)]
    eu, ev = fundamental_unit(d)
    eps = float(eu) + float(ev) * (1 + math.sqrt(d)) / 2 if d % 4 == 1 else float(eu) + float(ev) * math.sqrt(d)
    bound = math.sqrt(n * eps)
    span = 2 * math.sqrt(d) if d % 4 != 1 else math.sqrt(d)
    V = int(2 * bound / span) + 2
    tr = 1 if d % 4 == 1 else 0
    m = (d - 1) // 4 if tr else d
    cands = []
    for v in range(-V, V + 1):
        for target in (n, -n):
            # u^2 + tr*u*v - m*v^2 - target = 0
            disc = tr * tr * v * v + 4 * (m * v * v + target)
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for num in (-tr * v + r, -tr * v - r):
                if num % 2 == 0:
                    cands.append((num // 2, v))
    cands.sort(key=lambda c: (abs(c[0]) + abs(c[1]), -c[0], -c[1]))
    found: list = []
    for c in cands:
        if all(not (k0_divides(d, c, g) and k0_divides(d, g, c)) for g in found):
            found.append(c)
    return found


def k0_ideal_generators(d: int, n: int) -> list:
    """Generators of all ideals of norm n, including non-primitive ones like (2) for n = 4."""
    return k0_elements_of_norm(d, n)
