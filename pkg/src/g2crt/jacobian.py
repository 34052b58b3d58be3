"""Arithmetic on the Jacobian of a genus-2 curve y^2 = f(x).

Degree-5 models use Cantor's algorithm on Mumford pairs (u, v).  Degree-6
models must have a square leading coefficient c^2 over the base prime field;
they use the balanced representation

    D0 + n*inf_+ + (2 - deg u - n)*inf_- - (inf_+ + inf_-),   0 <= n <= 2 - deg u,

where D0 is the affine reduced divisor of (u, v).  Every class has exactly
one such representative, so (u, v, n) is a canonical key.  Curves whose
only models have a non-square leading coefficient are moved to a good model
by a change of variable over F_p first (see ``normalize_model``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence

from sympy import factorint
from sympy.matrices.normalforms import smith_normal_decomp
from sympy import Matrix, ZZ

from .ff import (
    Poly,
    make_ext_field,
    padd,
    pdivmod,
    peval,
    pmod,
    pmonic,
    pmul,
    pneg,
    psub,
    ptrim,
    pxgcd,
)
from .igusa import GenusTwoCurve, mobius_transform

__all__ = [
    "JacobianError",
    "Jacobian",
    "MumfordDivisor",
    "normalize_model",
    "jacobian_order",
    "random_point",
    "TorsionBasis",
    "torsion_basis",
    "FrobMatrix",
    "frobenius_matrix",
    "sylow_structure",
    "ell_torsion_basis",
    "ell_torsion_basis_sylow",
    "multiplicative_order_mod",
    "frobenius_power_charpoly",
    "add",
    "scalar_mul",
]


class JacobianError(ValueError):
    pass


# --------------------------------------------------------------------------
# Models
# --------------------------------------------------------------------------


def normalize_model(curve: GenusTwoCurve) -> GenusTwoCurve:
    """An F_p-isomorphic model whose arithmetic is supported here.

    Degree 5, or degree 6 with square leading coefficient, is kept.  Otherwise
    a rational Weierstrass point is sent to infinity (degree 5), or a rational
    affine point (x0, y0), y0 != 0, is sent to infinity (leading coefficient
    y0^2).
    """
    F = curve.field
    f = curve.raw
    if len(f) - 1 == 5 or F.is_square(f[-1]):
        return curve
    one, zero = F.one, F.zero
    xs = list(F.elements()) if F.q <= 1 << 16 else None
    if xs is None:
        rng = random.Random(0)
        xs = (F.random(rng) for _ in range(200))
    nonzero_square = None
    for x0 in xs:
        val = peval(F, f, x0)
        if val == zero:
            # x -> x0 + 1/x, then the model has degree 5
            return mobius_transform(curve, x0, one, one, zero)
        if nonzero_square is None and F.is_square(val):
            nonzero_square = x0
    if nonzero_square is not None:
        return mobius_transform(curve, nonzero_square, one, one, zero)
    raise JacobianError("curve has no F_p-rational point; no supported model")


def _poly_sqrt_top(F, f):
    """V with deg V = 3 and deg(f - V^2) <= 2, for deg f = 6 with square leading coefficient."""
    c = F.sqrt(f[6])
    if c is None:
        raise JacobianError("leading coefficient is not a square")
    # V = c x^3 + v2 x^2 + v1 x + v0
    two_c = F.add(c, c)
    v2 = F.div(f[5], two_c)
    v1 = F.div(F.sub(f[4], F.mul(v2, v2)), two_c)
    v0 = F.div(F.sub(f[3], F.add(F.mul(v1, v2), F.mul(v2, v1))), two_c)
    V = [v0, v1, v2, c]
    rest = psub(F, list(f), pmul(F, V, V))
    assert len(rest) <= 3
    return V


# --------------------------------------------------------------------------
# The group
# --------------------------------------------------------------------------


class Jacobian:
    """J(C)(F_{p^m}) for a curve over F_p (or over F_{p^m} directly)."""

    def __init__(self, curve: GenusTwoCurve, m: int = 1):
        base = curve.field
        if base.m != 1 and m != 1:
            raise JacobianError("extensions are taken from a prime-field curve")
        if base.m == 1:
            F = make_ext_field(base.p, m) if m > 1 else base
            f = [F.embed_prime(c) for c in curve.raw]
        else:
            F = base
            f = curve.raw
        self.curve = curve
        self.field = F
        self.m = F.m if base.m == 1 else m
        self.p = F.p
        self.f = f
        self.deg = len(f) - 1
        if self.deg == 6:
            if base.m == 1 and not base.is_square(curve.raw[-1]):
                raise JacobianError("degree-6 model needs a square leading coefficient over F_p; use normalize_model")
            self.V = _poly_sqrt_top(F, f)
            self._e = len(psub(F, list(f), pmul(F, self.V, self.V))) - 1
        else:
            self.V = None
        self.zero_key = ((F.one,), (), 1 if self.deg == 6 else 0)

    def __repr__(self):
        return f"Jacobian({self.curve!r}, m={self.m})"

    # keys are (u tuple, v tuple, n)
    @property
    def identity(self) -> "MumfordDivisor":
        return MumfordDivisor(self, *self.zero_key, check=False)

    def divisor(self, u, v, n: Optional[int] = None, check: bool = True) -> "MumfordDivisor":
        F = self.field
        u = ptrim(F, [_raw(F, c) for c in u])
        v = ptrim(F, [_raw(F, c) for c in v])
        if n is None:
            n = 0 if self.deg == 5 else (1 if len(u) == 1 else 0)
        return MumfordDivisor(self, tuple(u), tuple(v), n, check=check)

    # --- core operations on keys -------------------------------------------

    def _valid(self, u, v, n) -> bool:
        F = self.field
        if not u or u[-1] != F.one or len(u) > 3:
            return False
        if len(v) >= len(u):
            return False
        r = pmod(F, psub(F, pmul(F, list(v), list(v)), self.f), list(u))
        if r:
            return False
        if self.deg == 6:
            return 0 <= n <= 3 - len(u)
        return n == 0

    def neg(self, key):
        u, v, n = key
        F = self.field
        nv = tuple(pneg(F, v))
        if self.deg == 6:
            return (u, nv, 3 - len(u) - n)
        return (u, nv, 0)

    def add(self, k1, k2):
        F = self.field
        u1, v1, n1 = k1
        u2, v2, n2 = k2
        if len(u1) == 1 and self.deg == 5:
            return k2
        if len(u2) == 1 and self.deg == 5:
            return k1
        u1, v1, u2, v2 = list(u1), list(v1), list(u2), list(v2)
        d1, e1, e2 = pxgcd(F, u1, u2)
        if len(d1) == 1:
            d = d1
            s1, s2, s3 = e1, e2, []
        else:
            vs = padd(F, v1, v2)
            d, c1, c2 = pxgcd(F, d1, vs)
            s1 = pmul(F, c1, e1)
            s2 = pmul(F, c1, e2)
            s3 = c2
        degd = len(d) - 1
        uu = pmul(F, u1, u2)
        if degd:
            uu = pdivmod(F, uu, pmul(F, d, d))[0]
        num = padd(F, pmul(F, pmul(F, s1, u1), v2), pmul(F, pmul(F, s2, u2), v1))
        if s3:
            num = padd(F, num, pmul(F, s3, padd(F, pmul(F, v1, v2), self.f)))
        if degd:
            num = pdivmod(F, num, d)[0]
        vv = pmod(F, num, uu)
        n = n1 + n2 + degd - 1 if self.deg == 6 else 0
        return self._reduce(uu, vv, n)

    def _reduce(self, u, v, n):
        F = self.field
        f = self.f
        if self.deg == 5:
            while len(u) > 3:
                u2 = pmonic(F, pdivmod(F, psub(F, f, pmul(F, v, v)), u)[0])
                v = pmod(F, pneg(F, v), u2)
                u = u2
            return (tuple(u), tuple(pmod(F, v, u)), 0)
        V = self.V
        e3 = self._e - 3
        for _ in range(64):
            du = len(u) - 1
            m = 2 - du - n
            if du <= 2 and n >= 0 and m >= 0:
                return (tuple(u), tuple(v), n)
            if du >= 4:
                w = pmod(F, v, u)
            elif n < 0:
                # w = -V + ((V + v) mod u): raises n
                w = padd(F, pneg(F, V), pmod(F, padd(F, V, v), u))
            else:
                # w = V - ((V - v) mod u): raises m
                w = psub(F, V, pmod(F, psub(F, V, v), u))
            vm = psub(F, V, w)
            vp = padd(F, V, w)
            a = len(vm) - 1 if vm else e3
            b = len(vp) - 1 if vp else e3
            u2 = pmonic(F, pdivmod(F, psub(F, f, pmul(F, w, w)), u)[0])
            du2 = len(u2) - 1
            if a + b != du + du2:
                raise JacobianError("internal degree mismatch in reduction")  # pragma: no cover
            n = n + a - du2
            v = pmod(F, pneg(F, w), u2)
            u = u2
        raise JacobianError("reduction did not terminate")  # pragma: no cover

    def double(self, k):
        return self.add(k, k)

    def mul(self, k, e: int):
        if e < 0:
            return self.mul(self.neg(k), -e)
        result = self.zero_key
        base = k
        while e:
            if e & 1:
                result = self.add(result, base)
            e >>= 1
            if e:
                base = self.add(base, base)
        return result

    def frob(self, k, times: int = 1):
        """p-power Frobenius applied coordinatewise (points at infinity are rational)."""
        F = self.field
        u, v, n = k
        fr = F.frob
        for _ in range(times):
            u = tuple(fr(c) for c in u)
            v = tuple(fr(c) for c in v)
        return (u, v, n)

    # --- points -----------------------------------------------------------

    def point_key(self, x, y, n: int = 0):
        F = self.field
        return (tuple([F.neg(x), F.one]), tuple(ptrim(F, [y])), n if self.deg == 6 else 0)

    def random_key(self, rng: random.Random):
        F = self.field
        pts = []
        while len(pts) < 2:
            x = F.random(rng)
            val = peval(F, self.f, x)
            y = F.sqrt(val)
            if y is None:
                continue
            if rng.random() < 0.5:
                y = F.neg(y)
            pts.append(self.point_key(x, y, rng.randrange(2) if self.deg == 6 else 0))
        return self.add(pts[0], pts[1])

    def is_identity(self, k) -> bool:
        return k == self.zero_key


def _raw(F, c):
    if isinstance(c, int):
        return F.from_int(c)
    if hasattr(c, "raw"):
        return c.raw
    return c


class MumfordDivisor:
    """A reduced divisor class; (u, v, n) is its canonical key."""

    __slots__ = ("J", "key")

    def __init__(self, J: Jacobian, u, v, n: int = 0, check: bool = True):
        key = (tuple(u), tuple(v), n)
        if check and not J._valid(*key):
            raise JacobianError("malformed divisor: u must be monic of degree <= 2 dividing v^2 - f")
        self.J = J
        self.key = key

    @classmethod
    def from_key(cls, J, key):
        obj = cls.__new__(cls)
        obj.J = J
        obj.key = key
        return obj

    @property
    def u(self) -> Poly:
        return Poly.from_raw(self.J.field, self.key[0])

    @property
    def v(self) -> Poly:
        return Poly.from_raw(self.J.field, self.key[1])

    @property
    def n(self) -> int:
        return self.key[2]

    def _same(self, other):
        if not isinstance(other, MumfordDivisor) or other.J is not self.J:
            raise JacobianError("divisors on different Jacobians")

    def __add__(self, other):
        self._same(other)
        return MumfordDivisor.from_key(self.J, self.J.add(self.key, other.key))

    def __neg__(self):
        return MumfordDivisor.from_key(self.J, self.J.neg(self.key))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, e: int):
        return MumfordDivisor.from_key(self.J, self.J.mul(self.key, e))

    __mul__ = __rmul__

    def frobenius(self, times: int = 1):
        return MumfordDivisor.from_key(self.J, self.J.frob(self.key, times))

    def is_identity(self):
        return self.J.is_identity(self.key)

    def __eq__(self, other):
        return isinstance(other, MumfordDivisor) and self.J is other.J and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"MumfordDivisor(u={self.u!r}, v={self.v!r}, n={self.n})"


def add(D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    return D1 + D2


def scalar_mul(n: int, D: MumfordDivisor) -> MumfordDivisor:
    return n * D


def random_point(curve_or_jac, m: int = 1, seed: int = 0) -> MumfordDivisor:
    J = curve_or_jac if isinstance(curve_or_jac, Jacobian) else Jacobian(curve_or_jac, m)
    rng = random.Random(seed)
    return MumfordDivisor.from_key(J, J.random_key(rng))


# --------------------------------------------------------------------------
# Orders from the Frobenius polynomial
# --------------------------------------------------------------------------


def _companion(psi: Sequence[int]) -> list:
    n = len(psi) - 1
    C = [[0] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = 1
    for i in range(n):
        C[i][n - 1] = -psi[i]
    return C


def _matmul(A, B, mod=None):
    n, k, m = len(A), len(B), len(B[0])
    out = [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)] for i in range(n)]
    if mod:
        out = [[x % mod for x in row] for row in out]
    return out


def _matpow(A, e, mod=None):
    n = len(A)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            R = _matmul(R, A, mod)
        e >>= 1
        if e:
            A = _matmul(A, A, mod)
    return R


def _int_det(M) -> int:
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            fct = A[r][c] / A[c][c]
            A[r] = [x - fct * y for x, y in zip(A[r], A[c])]
    return int(det)


def jacobian_order(psi: Sequence[int], m: int = 1) -> int:
    """#J(F_{p^m}) = prod (1 - pi_i^m) = Res(psi, t^m - 1) up to sign, for monic psi (lowest first)."""
    psi = [int(c) for c in psi]
    if len(psi) != 5 or psi[-1] != 1:
        raise JacobianError("psi must be a monic quartic, lowest degree first")
    Cm = _matpow(_companion(psi), m)
    M = [[int(i == j) - Cm[i][j] for j in range(4)] for i in range(4)]
    return abs(_int_det(M))


def frobenius_power_charpoly(psi: Sequence[int], m: int) -> list:
    """Characteristic polynomial of pi^m (lowest first)."""
    Cm = _matpow(_companion(list(psi)), m)
    # Faddeev-LeVerrier over the integers via Fractions
    from fractions import Fraction

    n = 4
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        AM = _matmul(Cm, Mk)
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return [int(c) for c in coeffs]


def multiplicative_order_mod(psi: Sequence[int], s: int, limit: int = 10**6) -> int:
    """Order of t in (Z/s)[t]/(psi), the certified bound for the s-torsion field degree."""
    psi = [c % s for c in psi]
    cur = [0, 1, 0, 0]
    for k in range(1, limit + 1):
        if cur == [1, 0, 0, 0]:
            return k
        # multiply by t modulo psi
        top = cur[3]
        cur = [(-top * psi[0]) % s] + [(cur[i - 1] - top * psi[i]) % s for i in range(1, 4)]
    raise JacobianError("t is not invertible modulo (s, psi)")


# --------------------------------------------------------------------------
# Sylow subgroups and torsion bases
# --------------------------------------------------------------------------


SYLOW_CAP = 1 << 18


@dataclass
class SylowStructure:
    ell: int
    invariants: List[int]  # exponents a_i with G = prod Z/ell^{a_i}, nonincreasing
    generators: List[tuple]  # keys, generators[i] has order ell^{a_i}
    order: int


class _Closure:
    """Incrementally enumerated subgroup <g_1, ..., g_r>, keys -> mixed-radix coordinates."""

    def __init__(self, J: Jacobian):
        self.J = J
        self.elems: Dict[tuple, tuple] = {J.zero_key: ()}
        self.used: List[tuple] = []
        self.radices: List[int] = []
        self.relations: List[tuple] = []

    def __len__(self):
        return len(self.elems)

    def __contains__(self, key):
        return key in self.elems

    def coords(self, key) -> tuple:
        c = self.elems[key]
        return c + (0,) * (len(self.used) - len(c))

    def extend(self, g, cap: int) -> bool:
        """Adjoin g; False (and no change) if the result would exceed cap elements."""
        J = self.J
        if g in self.elems:
            return True
        # smallest j with j*g in the current subgroup
        j, x = 1, g
        while x not in self.elems:
            x = J.add(x, g)
            j += 1
            if len(self.elems) * j > cap:
                return False
        rel = self.coords(x)  # j*g = element with coordinates rel
        k = len(self.used)
        new = {}
        for key, coords in self.elems.items():
            y = key
            base = coords + (0,) * (k - len(coords))
            for i in range(j):
                new[y] = base + (i,)
                y = J.add(y, g)
        self.elems = new
        self.used.append(g)
        self.radices.append(j)
        self.relations.append(rel)
        return True

    def structure(self, ell: int):
        """Invariant exponents (nonincreasing) and matching generators via Smith normal form."""
        J, used = self.J, self.used
        r = len(used)
        if r == 0:
            return [], []
        # relation lattice: rows radices[i]*e_i - relations[i]
        rows = []
        for i in range(r):
            row = [-c for c in self.relations[i]] + [0] * (r - len(self.relations[i]))
            row[i] += self.radices[i]
            rows.append(row)
        D, U, V = smith_normal_decomp(Matrix(rows), domain=ZZ)
        # D = U * R * V, so the new generators are V^{-1} applied to the old ones
        Vinv = V.inv()
        out = []
        for i in range(r):
            di = int(D[i, i])
            if di == 1:
                continue
            key = J.zero_key
            for j in range(r):
                cij = int(Vinv[i, j])
                if cij:
                    key = J.add(key, J.mul(used[j], cij))
            a = 0
            while di % ell == 0:
                di //= ell
                a += 1
            out.append((a, key))
        out.sort(key=lambda t: -t[0])
        return [a for a, _ in out], [g for _, g in out]


def _subgroup_closure(J: Jacobian, gens: List[tuple], cap: int):
    """All elements of <gens> as a dict key -> coordinate vector (mixed radix)."""
    cl = _Closure(J)
    for g in gens:
        if not cl.extend(g, cap):
            raise JacobianError(f"subgroup exceeds the size cap {cap}")
    return cl.elems, cl.used, cl.radices, cl.relations


def sylow_structure(J: Jacobian, N: int, ell: int, rng: random.Random, cap: int = SYLOW_CAP,
                    max_tries: int = 200) -> SylowStructure:
    """Structure of the ell-Sylow subgroup of J(F_q), with #J(F_q) = N."""
    k = 0
    M = N
    while M % ell == 0:
        M //= ell
        k += 1
    size = ell**k
    if k == 0:
        return SylowStructure(ell, [], [], 1)
    if size > cap:
        raise JacobianError(f"{ell}-Sylow subgroup of order {size} exceeds the size cap {cap}")
    cl = _Closure(J)
    tries = 0
    while len(cl) < size:
        tries += 1
        if tries > max_tries:
            raise JacobianError("could not generate the Sylow subgroup (wrong group order?)")
        g = J.mul(J.random_key(rng), M)
        if not J.is_identity(J.mul(g, size)):
            raise JacobianError("group order does not annihilate a random point")
        if not cl.extend(g, cap):
            raise JacobianError(f"subgroup exceeds the size cap {cap}")  # pragma: no cover
    invs, gens = cl.structure(ell)
    return SylowStructure(ell, invs, gens, size)


def _ell_adic_dlog(J: Jacobian, h: List[tuple], y, ell: int, e: int, cache: dict) -> List[int]:
    """Coordinates of y in the basis h of J[ell^e], one ell-adic digit at a time."""
    q = ell**e
    if ell not in cache:
        # J[ell] spanned by ell^{e-1} h_i
        base = [J.mul(g, q // ell) for g in h]
        table = {J.zero_key: ()}
        for g in base:
            new = {}
            for k, c in table.items():
                x = k
                for d in range(ell):
                    new[x] = c + (d,)
                    x = J.add(x, g)
            table = new
        cache[ell] = table
    table = cache[ell]
    coords = [0] * 4
    rest = y
    for k in range(e):
        z = J.mul(rest, ell ** (e - 1 - k))
        digits = table.get(z)
        if digits is None:
            raise JacobianError("element is not in the span of the torsion basis")
        for i, d in enumerate(digits):
            if d:
                coords[i] += d * ell**k
                rest = J.add(rest, J.neg(J.mul(h[i], d * ell**k)))
    return coords


@dataclass
class TorsionBasis:
    s: int
    m: int
    J: Jacobian
    basis: List[tuple]  # four keys
    table: Dict[tuple, tuple] = field(default_factory=dict, repr=False)
    _ell_tables: Dict[int, Dict[tuple, tuple]] = field(default_factory=dict, repr=False)

    @property
    def divisors(self) -> List[MumfordDivisor]:
        return [MumfordDivisor.from_key(self.J, k) for k in self.basis]

    def dlog(self, key) -> tuple:
        """Coordinates of key in the basis, mod s."""
        if self.table:
            try:
                return self.table[key]
            except KeyError:
                raise JacobianError("element is not in the span of the torsion basis") from None
        J, s = self.J, self.s
        coords = [0] * 4
        mod = 1
        for ell, e in factorint(s).items():
            q = ell**e
            u = s // q
            h = [J.mul(g, u) for g in self.basis]  # a basis of J[q]
            cq = _ell_adic_dlog(J, h, J.mul(key, u), ell, e, self._ell_tables)
            # combine mod * q by CRT
            t = pow(mod, -1, q)
            coords = [c + mod * ((x - c) * t % q) for c, x in zip(coords, cq)]
            mod *= q
        coords = tuple(c % s for c in coords)
        acc = J.zero_key
        for c, g in zip(coords, self.basis):
            if c:
                acc = J.add(acc, J.mul(g, c))
        if acc != key:
            raise JacobianError("element is not in the span of the torsion basis")
        return coords

    def _build_table(self):
        J, s = self.J, self.s
        layer = {J.zero_key: ()}
        for i, g in enumerate(self.basis):
            new = {}
            for key, coords in layer.items():
                y = key
                for c in range(s):
                    new[y] = coords + (c,)
                    y = J.add(y, g)
            layer = new
        if len(layer) != s**4:
            raise JacobianError("torsion basis elements are not independent")
        self.table = layer

    def certify(self) -> bool:
        J = self.J
        if not all(J.is_identity(J.mul(g, self.s)) for g in self.basis):
            return False
        self._build_table()
        return len(self.table) == self.s**4


def ell_torsion_basis_sylow(J: Jacobian, N: int, ell: int, e: int, rng) -> Optional[List[tuple]]:
    """Basis of J[ell^e] read off the full ell-Sylow structure (reference version)."""
    st = sylow_structure(J, N, ell, rng)
    big = [(a, g) for a, g in zip(st.invariants, st.generators) if a >= e]
    if len(big) < 4:
        return None
    return [J.mul(g, ell ** (a - e)) for a, g in big[:4]]


def ell_torsion_basis(J: Jacobian, N: int, ell: int, e: int, rng, max_tries: int = 400) -> Optional[List[tuple]]:
    """Basis of J[ell^e] if it is contained in J(F_q) (else None), with #J(F_q) = N.

    S is the ell-Sylow subgroup and q = ell^e; only subgroups of qS and J[ell]
    are enumerated. J[q] is rational iff #(qS) = #S / q^4. Points qP fill out
    L inside qS, and a larger L proves the answer is no. Once qP lies in L,
    subtracting the stored preimage leaves a uniform element Q of S[q]; four
    of them with ell^{e-1} Q independent in J[ell] prove the answer is yes.
    """
    q = ell**e
    M, v = N, 0
    while M % ell == 0:
        M //= ell
        v += 1
    if v < 4 * e:
        return None
    target = q**4
    co = ell**v // target  # #(qS) when J[q] is rational
    L = _Closure(J)
    pre: List[tuple] = []  # pre[j] with q * pre[j] = L.used[j]
    # Q_1..Q_4 in S[q] are a basis of J[q] iff ell^{e-1} Q_i span J[ell]
    chosen: List[tuple] = []
    T = _Closure(J)
    for _ in range(max_tries):
        P = J.mul(J.random_key(rng), M)
        R = J.mul(P, q)
        if R not in L:
            if not L.extend(R, co):
                return None
            pre.append(P)
            continue
        Q = P
        for c, g in zip(L.coords(R), pre):
            if c:
                Q = J.add(Q, J.neg(J.mul(g, c)))
        top = J.mul(Q, q // ell)
        if top in T:
            continue
        T.extend(top, ell**4)
        chosen.append(Q)
        if len(T) == ell**4:
            return chosen
    raise JacobianError(f"could not decide whether J[{q}] is rational (wrong group order?)")


def _crt_keys(J, parts: List[List[tuple]]) -> List[tuple]:
    out = []
    for i in range(4):
        k = J.zero_key
        for part in parts:
            k = J.add(k, part[i])
        out.append(k)
    return out


def torsion_basis(curve: GenusTwoCurve, psi: Sequence[int], s: int, seed: int = 0,
                  max_degree: Optional[int] = None) -> TorsionBasis:
    """Basis of J[s] over the smallest F_{p^m} containing it."""
    p = curve.field.p
    if gcd(s, p) != 1:
        raise JacobianError("s must be coprime to p")
    if s**4 > 10**6:
        raise JacobianError("s^4 exceeds the desk-scale bound 10^6")
    curve = normalize_model(curve)
    M = multiplicative_order_mod(psi, s)
    if max_degree is not None:
        M = min(M, max_degree)
    rng = random.Random(seed)
    for m in range(1, M + 1):
        N = jacobian_order(psi, m)
        if N % s**4:
            continue
        J = Jacobian(curve, m)
        parts = []
        ok = True
        for ell, e in factorint(s).items():
            b = ell_torsion_basis(J, N, ell, e, rng)
            if b is None:
                ok = False
                break
            parts.append(b)
        if not ok:
            continue
        basis = _crt_keys(J, parts) if parts else [J.zero_key] * 4
        tb = TorsionBasis(s, m, J, basis)
        return tb
    raise JacobianError(f"J[{s}] not found over F_p^m for m <= {M}")


@dataclass
class FrobMatrix:
    s: int
    F: List[List[int]]
    V: List[List[int]]

    def apply_poly(self, coeffs: Sequence[int]) -> List[List[int]]:
        """sum c_i F^i mod s."""
        s = self.s
        out = [[0] * 4 for _ in range(4)]
        P = [[int(i == j) for j in range(4)] for i in range(4)]
        for c in coeffs:
            out = [[(out[i][j] + c * P[i][j]) % s for j in range(4)] for i in range(4)]
            P = _matmul(P, self.F, s)
        return out


def _mat_inv_mod(A, s):
    M = Matrix(A)
    return [[int(x) % s for x in row] for row in M.inv_mod(s).tolist()]


def frobenius_matrix(tb: TorsionBasis) -> FrobMatrix:
    """Matrix of Frobenius on J[s]; column j holds the coordinates of Frob(D_j)."""
    J, s = tb.J, tb.s
    cols = [tb.dlog(J.frob(k)) for k in tb.basis]
    F = [[cols[j][i] % s for j in range(4)] for i in range(4)]
    p = J.p
    Finv = _mat_inv_mod(F, s)
    V = [[(p * x) % s for x in row] for row in Finv]
    return FrobMatrix(s, F, V)
