"""Exact arithmetic in F_p, F_{p^m}, and univariate polynomials over them.

Field objects expose arithmetic on *raw* values so that hot loops (Cantor
reduction, point counting) avoid per-element object overhead.  The raw value
depends on the backend:

* ``PrimeField``: an ``int`` in ``[0, p)``;
* ``ZechField`` (small extensions): a discrete logarithm with respect to a
  fixed primitive element, ``q - 1`` standing in for zero;
* ``PolyField`` (large extensions): a tuple of ``m`` residues.

``FieldElement`` and ``Poly`` wrap raw values with operator overloading for
everything that is not performance critical.
"""

from __future__ import annotations

import array
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

__all__ = [
    "FieldError",
    "FiniteField",
    "PrimeField",
    "ExtField",
    "ZechField",
    "PolyField",
    "RationalField",
    "QQ",
    "FieldElement",
    "Poly",
    "make_ext_field",
    "prime_field",
    "poly_roots",
    "is_squarefree",
]

ZECH_LIMIT = 1 << 22
EXHAUSTIVE_ROOTS_LIMIT = 1 << 16
EXHAUSTIVE_SQRT_LIMIT = 1000


class FieldError(ValueError):
    pass


# --------------------------------------------------------------------------
# Modular polynomial helpers over F_p on plain int lists (lowest degree first)
# --------------------------------------------------------------------------


def _zp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_mulmod(a, b, mod, p):
    m = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _zp_reduce(prod, mod, p, m)


def _zp_reduce(prod, mod, p, m):
    # mod is monic of degree m
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k] % p
        if c:
            base = k - m
            for i in range(m):
                prod[base + i] -= c * mod[i]
        prod[k] = 0
    res = [c % p for c in prod[:m]]
    return _zp_trim(res)


def _zp_invmod(a, mod, p):
    """Inverse of a nonzero a modulo an irreducible mod, by the extended Euclidean algorithm."""
    r0, r1 = list(mod), _zp_trim([c % p for c in a])
    s0, s1 = [], [1]
    while len(r1) > 1:
        # one division step r0 = q r1 + r, accumulating s0 - q s1
        inv_lc = pow(r1[-1], p - 2, p)
        r = list(r0)
        q = [0] * (len(r0) - len(r1) + 1)
        for k in range(len(r0) - len(r1), -1, -1):
            c = r[k + len(r1) - 1] * inv_lc % p
            q[k] = c
            if c:
                for i, y in enumerate(r1):
                    r[k + i] = (r[k + i] - c * y) % p
        r = _zp_trim(r[: len(r1) - 1])
        qs = [0] * (len(q) + len(s1) - 1)
        for i, x in enumerate(q):
            if x:
                for j, y in enumerate(s1):
                    qs[i + j] += x * y
        n = max(len(s0), len(qs))
        s_new = _zp_trim([((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p for i in range(n)])
        r0, r1, s0, s1 = r1, r, s1, s_new
    if not r1:
        raise FieldError("element is not invertible modulo the field polynomial")
    c = pow(r1[0], p - 2, p)
    return _zp_trim([x * c % p for x in s1])


def _zp_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _zp_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _zp_mulmod(base, base, mod, p)
    return result


def _zp_gcd(a, b, p):
    a = _zp_trim([x % p for x in a])
    b = _zp_trim([x % p for x in b])
    while b:
        a = _zp_divmod(a, b, p)[1]
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _zp_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            q[k - db] = c
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return _zp_trim(q), _zp_trim([x % p for x in a[:db]])


def _is_irreducible_mod_p(f, p):
    """Rabin's test for a monic f over F_p."""
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1]
    # x^{p^n} == x mod f
    h = x
    powers = []
    for _ in range(n):
        h = _zp_powmod(h, p, f, p)
        powers.append(h)
    if _zp_trim([(c - d) % p for c, d in _zip_longest(powers[-1], x)]):
        return False
    for r in factorint(n):
        hk = powers[n // r - 1]
        diff = _zp_trim([(c - d) % p for c, d in _zip_longest(hk, x)])
        if len(_zp_gcd(f, diff, p)) != 1:
            return False
    return True


def _zip_longest(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def _smallest_irreducible(p, m):
    if m == 1:
        return (0, 1)
    # enumerate lower coefficients as a base-p integer; the highest of them
    # is the most significant, i.e. lexicographic in printed order
    for code in range(1, p**m):
        low = []
        c = code
        for _ in range(m):
            low.append(c % p)
            c //= p
        if low[0] == 0:
            continue
        f = low + [1]
        if _is_irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


# --------------------------------------------------------------------------
# Fields
# --------------------------------------------------------------------------


class FiniteField:
    """Common interface; subclasses implement raw arithmetic."""

    p: int
    m: int
    q: int
    modulus: tuple
    zero: object
    one: object

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return (make_ext_field, (self.p, self.m, self.p < 7))

    # generic derived operations -------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def square(self, a):
        return self.mul(a, a)

    def pow(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def is_zero(self, a):
        return a == self.zero

    def from_int(self, n):
        raise NotImplementedError

    def index(self, a):
        """Integer encoding sum c_i p^i of the coordinates (total order)."""
        n = 0
        for c in reversed(self.to_coords(a)):
            n = n * self.p + c
        return n

    def from_index(self, n):
        coords = []
        for _ in range(self.m):
            coords.append(n % self.p)
            n //= self.p
        return self.from_coords(coords)

    def elements(self) -> Iterator:
        for n in range(self.q):
            yield self.from_index(n)

    def random(self, rng: random.Random):
        return self.from_index(rng.randrange(self.q))

    def random_nonzero(self, rng: random.Random):
        return self.from_index(rng.randrange(1, self.q))

    def is_square(self, a) -> bool:
        if a == self.zero:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one

    def sqrt(self, a):
        """A square root of ``a`` or ``None``; the root of smaller index is returned."""
        if a == self.zero:
            return self.zero
        if not self.is_square(a):
            return None
        if self.q < EXHAUSTIVE_SQRT_LIMIT:
            table = self._sqrt_table()
            return table.get(a)
        r = self._tonelli_shanks(a)
        r2 = self.neg(r)
        return r if self.index(r) <= self.index(r2) else r2

    @lru_cache(maxsize=None)
    def _sqrt_table(self):
        table = {}
        for n in range(self.q - 1, -1, -1):
            x = self.from_index(n)
            table[self.mul(x, x)] = x  # descending order, smallest index wins
        return table

    def _tonelli_shanks(self, a):
        q = self.q
        s, t = 0, q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = self._nonresidue()
        c = self.pow(z, t)
        x = self.pow(a, (t + 1) // 2)
        b = self.pow(a, t)
        m = s
        while b != self.one:
            i, b2 = 0, b
            while b2 != self.one:
                b2 = self.mul(b2, b2)
                i += 1
            w = self.pow(c, 1 << (m - i - 1))
            x = self.mul(x, w)
            c = self.mul(w, w)
            b = self.mul(b, c)
            m = i
        return x

    @lru_cache(maxsize=None)
    def _nonresidue(self):
        for n in range(2, self.q):
            z = self.from_index(n)
            if not self.is_square(z):
                return z
        raise FieldError("field has no non-residue")  # pragma: no cover

    def smallest_nonresidue(self):
        return self._nonresidue()

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        return FieldElement(self, self.from_coords(value))

    def __call__(self, value):
        return self.element(value)

    def embed_prime(self, a):
        """Raw value of the image of a raw F_p value."""
        return self.from_int(a)


class PrimeField(FiniteField):
    def __init__(self, p: int):
        self.p = self.q = p
        self.m = 1
        self.modulus = (0, 1)
        self.zero = 0
        self.one = 1
        self.generator = None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def frob(self, a):
        return a

    def from_int(self, n):
        return n % self.p

    def to_coords(self, a):
        return (a,)

    def from_coords(self, coords):
        coords = list(coords)
        if len(coords) != 1:
            raise FieldError("prime-field element takes one coordinate")
        return coords[0] % self.p

    def index(self, a):
        return a

    def from_index(self, n):
        return n

    def to_prime(self, a):
        return a

    def is_square(self, a):
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    @lru_cache(maxsize=None)
    def legendre_table(self):
        t = [-1] * self.p
        t[0] = 0
        for x in range(1, (self.p + 1) // 2):
            t[x * x % self.p] = 1
        return t


class ExtField(FiniteField):
    """F_{p^m} = F_p[x]/(modulus) for m >= 2."""

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = tuple(modulus)

    def to_prime(self, a):
        """Raw F_p value of an element of the prime subfield."""
        c = self.to_coords(a)
        if any(c[1:]):
            raise FieldError("element is not in the prime field")
        return c[0]

    def _coords_mul(self, a, b):
        return tuple(_pad(_zp_mulmod(list(a), list(b), self.modulus, self.p), self.m))


def _pad(c, m):
    c = list(c)
    return c + [0] * (m - len(c))


class PolyField(ExtField):
    """Coordinate-tuple backend for extensions too large for log tables."""

    def __init__(self, p, m, modulus):
        super().__init__(p, m, modulus)
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        return self._coords_mul(a, b)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return tuple(_pad(_zp_invmod(list(a), self.modulus, self.p), self.m))

    def frob(self, a):
        return self.pow(a, self.p)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.m - 1)

    def to_coords(self, a):
        return a

    def from_coords(self, coords):
        c = [x % self.p for x in coords]
        if len(c) > self.m:
            raise FieldError("too many coordinates")
        return tuple(_pad(c, self.m))


class ZechField(ExtField):
    """Log-table backend: raw value k means g^k, raw value q-1 means zero."""

    def __init__(self, p, m, modulus):
        super().__init__(p, m, modulus)
        n = self.q - 1
        self.n = n
        self.zero = n
        self.one = 0
        self._half = n // 2
        self._build_tables()

    def _find_generator(self):
        n = self.q - 1
        primes = list(factorint(n))
        for code in range(2, self.q):
            g = _pad(self._index_to_coords(code), self.m)
            g = _zp_trim(list(g))
            if all(
                _zp_powmod(g, n // r, self.modulus, self.p) != [1] for r in primes
            ):
                return tuple(_pad(g, self.m))
        raise FieldError("no primitive element found")  # pragma: no cover

    def _index_to_coords(self, code):
        c = []
        for _ in range(self.m):
            c.append(code % self.p)
            code //= self.p
        return c

    def _build_tables(self):
        p, m, n = self.p, self.m, self.n
        g = self._find_generator()
        self.generator_coords = g
        # multiplication by g as an F_p-linear map on coordinate row vectors
        mat = np.zeros((m, m), dtype=np.int64)
        for j in range(m):
            e = [0] * m
            e[j] = 1
            mat[j] = self._coords_mul(e, g)
        block = 1024
        first = np.zeros((min(block, n), m), dtype=np.int64)
        cur = np.zeros(m, dtype=np.int64)
        cur[0] = 1
        for k in range(first.shape[0]):
            first[k] = cur
            cur = (cur @ mat) % p
        step = np.eye(m, dtype=np.int64)
        # step = mat^block
        e, base = block, mat.copy()
        while e:
            if e & 1:
                step = (step @ base) % p
            e >>= 1
            base = (base @ base) % p
        chunks = [first]
        done = first.shape[0]
        cur_block = first
        while done < n:
            cur_block = (cur_block @ step) % p
            take = min(block, n - done)
            chunks.append(cur_block[:take])
            done += take
        powers = np.concatenate(chunks)[:n]
        weights = p ** np.arange(m, dtype=np.int64)
        idx_of_log = powers @ weights
        log_of_idx = np.full(self.q, n, dtype=np.int64)
        log_of_idx[idx_of_log] = np.arange(n, dtype=np.int64)
        c0 = idx_of_log % p
        plus_one = idx_of_log - c0 + (c0 + 1) % p
        zech = log_of_idx[plus_one]
        self._idx_of_log = array.array("q", idx_of_log.tolist())
        self._log_of_idx = array.array("q", log_of_idx.tolist())
        self._zech = array.array("q", zech.tolist())
        # logs of prime-field elements, for fast embedding
        self._prime_logs = [int(log_of_idx[c]) for c in range(p)]

    def add(self, a, b):
        n = self.n
        if a == n:
            return b
        if b == n:
            return a
        z = self._zech[(b - a) % n]
        if z == n:
            return n
        return (a + z) % n

    def neg(self, a):
        if a == self.n:
            return a
        return (a + self._half) % self.n

    def sub(self, a, b):
        n = self.n
        if b == n:
            return a
        b = (b + self._half) % n
        if a == n:
            return b
        z = self._zech[(b - a) % n]
        if z == n:
            return n
        return (a + z) % n

    def mul(self, a, b):
        n = self.n
        if a == n or b == n:
            return n
        return (a + b) % n

    def square(self, a):
        if a == self.n:
            return a
        return 2 * a % self.n

    def inv(self, a):
        if a == self.n:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return -a % self.n

    def div(self, a, b):
        n = self.n
        if b == n:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if a == n:
            return n
        return (a - b) % n

    def pow(self, a, e):
        n = self.n
        if a == n:
            if e <= 0:
                raise ZeroDivisionError("zero to non-positive power")
            return n
        return a * e % n

    def frob(self, a):
        if a == self.n:
            return a
        return a * self.p % self.n

    def is_square(self, a):
        return a == self.n or a % 2 == 0

    def sqrt(self, a):
        n = self.n
        if a == n:
            return a
        if a % 2:
            return None
        r = a // 2
        r2 = (r + self._half) % n
        return r if self._idx_of_log[r] <= self._idx_of_log[r2] else r2

    def from_int(self, k):
        return self._prime_logs[k % self.p]

    def embed_prime(self, a):
        return self._prime_logs[a]

    def to_coords(self, a):
        idx = 0 if a == self.n else self._idx_of_log[a]
        return tuple(self._index_to_coords(idx))

    def index(self, a):
        return 0 if a == self.n else self._idx_of_log[a]

    def from_index(self, idx):
        return self._log_of_idx[idx]

    def from_coords(self, coords):
        c = [x % self.p for x in coords]
        if len(c) > self.m:
            raise FieldError("too many coordinates")
        idx = 0
        for x in reversed(_pad(c, self.m)):
            idx = idx * self.p + x
        return self._log_of_idx[idx]

    def elements(self):
        yield self.zero
        yield from range(self.n)


@lru_cache(maxsize=None)
def make_ext_field(p: int, m: int, allow_small_characteristic: bool = False) -> FiniteField:
    """The field with p^m elements and its deterministic model.

    The modulus is the smallest monic irreducible polynomial of degree m in
    lexicographic coefficient order (leading coefficients most significant).
    Characteristics 3 and 5 are refused unless explicitly allowed; the
    curve code needs p >= 7, but plain field arithmetic works for any odd p.
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"{p} is not prime")
    if p == 2:
        raise FieldError("characteristic 2 is not supported")
    if p in (3, 5) and not allow_small_characteristic:
        raise FieldError(f"characteristic {p} is not supported (need p >= 7)")
    if m < 1:
        raise FieldError("extension degree must be at least 1")
    if m == 1:
        return PrimeField(p)
    modulus = _smallest_irreducible(p, m)
    if p**m <= ZECH_LIMIT:
        return ZechField(p, m, modulus)
    return PolyField(p, m, modulus)


def prime_field(p: int) -> PrimeField:
    return make_ext_field(p, 1)


def smallest_irreducible_modulus(p: int, m: int) -> tuple:
    """The modulus make_ext_field would choose; usable for any prime p."""
    return _smallest_irreducible(p, m)


class RationalField:
    """Q with the same raw interface as the finite fields (raw = Fraction)."""

    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def square(self, a):
        return a * a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, e):
        return Fraction(a) ** e

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def element(self, v):
        return Fraction(v)


QQ = RationalField()


class FieldElement:
    __slots__ = ("field", "raw")

    def __init__(self, field: FiniteField, raw):
        self.field = field
        self.raw = raw

    @property
    def coords(self) -> tuple:
        return tuple(self.field.to_coords(self.raw))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("mismatched parent fields")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return FieldElement(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.raw, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.raw))

    def frobenius(self):
        return FieldElement(self.field, self.field.frob(self.raw))

    def sqrt(self):
        r = self.field.sqrt(self.raw)
        return None if r is None else FieldElement(self.field, r)

    def is_square(self):
        return self.field.is_square(self.raw)

    def is_zero(self):
        return self.raw == self.field.zero

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        if isinstance(other, FieldElement):
            return self.field is other.field and self.raw == other.raw
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.raw))

    def __int__(self):
        return self.field.to_prime(self.raw)

    def __repr__(self):
        c = self.coords
        if self.field.m == 1:
            return str(c[0])
        return f"{self.field!r}{list(c)}"


# --------------------------------------------------------------------------
# Polynomials over a field (raw coefficient lists, lowest degree first)
# --------------------------------------------------------------------------


def ptrim(F, a):
    z = F.zero
    while a and a[-1] == z:
        a.pop()
    return a


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    add = F.add
    for i, y in enumerate(b):
        r[i] = add(r[i], y)
    return ptrim(F, r)


def psub(F, a, b):
    neg = F.neg
    return padd(F, a, [neg(y) for y in b])


def pneg(F, a):
    neg = F.neg
    return [neg(x) for x in a]


def pscale(F, a, c):
    if c == F.zero:
        return []
    mul = F.mul
    return ptrim(F, [mul(x, c) for x in a])


def pmul(F, a, b):
    if not a or not b:
        return []
    add, mul, z = F.add, F.mul, F.zero
    r = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == z:
            continue
        for j, y in enumerate(b):
            r[i + j] = add(r[i + j], mul(x, y))
    return ptrim(F, r)


def pdivmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) <= db:
        return [], ptrim(F, a)
    add, mul, neg, z = F.add, F.mul, F.neg, F.zero
    inv = F.inv(b[-1])
    q = [z] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == z:
            continue
        c = mul(c, inv)
        q[k - db] = c
        nc = neg(c)
        for i in range(db):
            a[k - db + i] = add(a[k - db + i], mul(nc, b[i]))
        a[k] = z
    return ptrim(F, q), ptrim(F, a[:db])


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, a):
    if not a:
        return a
    if a[-1] == F.one:
        return list(a)
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F, a, b):
    a, b = ptrim(F, list(a)), ptrim(F, list(b))
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pxgcd(F, a, b):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = ptrim(F, list(a)), ptrim(F, list(b))
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if not r0:
        return [], [], []
    inv = F.inv(r0[-1])
    return pscale(F, r0, inv), pscale(F, s0, inv), pscale(F, t0, inv)


def peval(F, a, x):
    add, mul = F.add, F.mul
    r = F.zero
    for c in reversed(a):
        r = add(mul(r, x), c)
    return r


def pderiv(F, a):
    fi = F.from_int
    mul = F.mul
    return ptrim(F, [mul(fi(i), a[i]) for i in range(1, len(a))])


def ppowmod(F, a, e, mod):
    result = [F.one]
    base = pmod(F, a, mod)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), mod)
        e >>= 1
        if e:
            base = pmod(F, pmul(F, base, base), mod)
    return result


def pfrob(F, a):
    frob = F.frob
    return [frob(x) for x in a]


class Poly:
    """Immutable univariate polynomial over a field, lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable = ()):
        self.field = field
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field is not field:
                    raise FieldError("coefficient from a different field")
                vals.append(c.raw)
            elif isinstance(field, RationalField):
                vals.append(Fraction(c))
            elif isinstance(c, int):
                vals.append(field.from_int(c))
            else:
                vals.append(c)
        self.coeffs = tuple(ptrim(field, vals))

    @classmethod
    def from_raw(cls, field, raw):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(ptrim(field, list(raw)))
        return obj

    @classmethod
    def x(cls, field):
        return cls.from_raw(field, [field.zero, field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if i < len(self.coeffs):
            return self._wrap(self.coeffs[i])
        return self._wrap(self.field.zero)

    def _wrap(self, raw):
        if isinstance(self.field, RationalField):
            return raw
        return FieldElement(self.field, raw)

    def lc(self):
        return self[self.degree] if self.coeffs else self._wrap(self.field.zero)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise FieldError("mismatched polynomial fields")
            return list(other.coeffs)
        if isinstance(other, (int, Fraction)):
            return ptrim(self.field, [self.field.from_int(other) if isinstance(other, int) else other])
        if isinstance(other, FieldElement):
            return ptrim(self.field, [other.raw])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly.from_raw(self.field, padd(self.field, list(self.coeffs), o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly.from_raw(self.field, psub(self.field, list(self.coeffs), o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly.from_raw(self.field, psub(self.field, o, list(self.coeffs)))

    def __neg__(self):
        return Poly.from_raw(self.field, pneg(self.field, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly.from_raw(self.field, pmul(self.field, list(self.coeffs), o))

    __rmul__ = __mul__

    def __pow__(self, e):
        r = Poly.from_raw(self.field, [self.field.one])
        for _ in range(e):
            r = r * self
        return r

    def __divmod__(self, other):
        o = self._coerce(other)
        q, r = pdivmod(self.field, list(self.coeffs), o)
        return Poly.from_raw(self.field, q), Poly.from_raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        return Poly.from_raw(self.field, pmonic(self.field, list(self.coeffs)))

    def gcd(self, other):
        return Poly.from_raw(self.field, pgcd(self.field, self.coeffs, self._coerce(other)))

    def derivative(self):
        return Poly.from_raw(self.field, pderiv(self.field, self.coeffs))

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.field, peval(self.field, self.coeffs, x.raw))
        if isinstance(self.field, RationalField):
            return peval(self.field, self.coeffs, Fraction(x))
        return FieldElement(self.field, peval(self.field, self.coeffs, self.field.from_int(x)))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.coeffs == other.coeffs
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return list(self.coeffs) == o

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def to_ints(self) -> list:
        """Coefficients as Python ints (prime fields) or coordinate tuples."""
        F = self.field
        if isinstance(F, RationalField):
            return list(self.coeffs)
        if F.m == 1:
            return [F.to_prime(c) for c in self.coeffs]
        return [tuple(F.to_coords(c)) for c in self.coeffs]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if c == 0:
                continue
            cs = repr(c)
            if i == 0:
                terms.append(cs)
            elif i == 1:
                terms.append("X" if c == 1 else f"{cs}*X")
            else:
                terms.append(f"X^{i}" if c == 1 else f"{cs}*X^{i}")
        return " + ".join(terms)


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        return False
    if f.degree <= 0:
        return True
    d = f.derivative()
    if d.is_zero():
        return False
    return f.gcd(d).degree == 0


def poly_roots(f: Poly, rng: random.Random | None = None) -> set:
    """All roots of f in its coefficient field (multiplicity discarded)."""
    if f.is_zero():
        raise FieldError("the zero polynomial has every element as a root")
    F = f.field
    if f.degree <= 0:
        return set()
    if F.q <= EXHAUSTIVE_ROOTS_LIMIT:
        cs = f.coeffs
        return {
            FieldElement(F, x) for x in F.elements() if peval(F, cs, x) == F.zero
        }
    rng = rng or random.Random(0)
    fm = pmonic(F, list(f.coeffs))
    xq = ppowmod(F, [F.zero, F.one], F.q, fm)
    g = pgcd(F, fm, psub(F, xq, [F.zero, F.one]))
    raw_roots = []
    _split_linear(F, g, rng, raw_roots)
    return {FieldElement(F, r) for r in raw_roots}


def _split_linear(F, g, rng, out):
    """Cantor-Zassenhaus equal-degree-1 splitting of a product of linears."""
    d = len(g) - 1
    if d <= 0:
        return
    if d == 1:
        out.append(F.neg(F.div(g[0], g[1])))
        return
    e = (F.q - 1) // 2
    while True:
        a = F.random(rng)
        h = ppowmod(F, [a, F.one], e, g)
        h = psub(F, h, [F.one])
        k = pgcd(F, g, h)
        if 0 < len(k) - 1 < d:
            _split_linear(F, k, rng, out)
            _split_linear(F, pdivmod(F, g, k)[0], rng, out)
            return
