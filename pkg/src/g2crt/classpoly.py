"""Igusa class polynomials modulo p, and their assembly over Q.

``classpoly_mod_p`` runs the census: every invariant triple over F_p is
turned into a curve, curves outside the isogeny class are discarded by a
point count, the remaining ones go through the torsion-field filter and the
endomorphism test, and the survivors give H_{i,p} = prod (X - j_i(C)).
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, prod
from typing import Iterable, List, Optional, Sequence, Tuple

from .endoring import endo_ring_is_maximal, index_report, primary_filter, torsion_field_filter
from .ff import make_ext_field, prime_field
from .igusa import (
    GenusTwoCurve,
    _det3,
    _triple_to_clebsch,
    charpoly_from_counts,
    count_points_raw,
    i2_zero_classes,
    mestre_conic_cubic,
    mestre_from_ic_raw,
    mestre_raw,
)
from .jacobian import Jacobian, normalize_model
from .weil import _field, group_orders, theorem1_prime_test

__all__ = [
    "ClassPolyError",
    "InsufficientData",
    "NORMALIZATION_TAG",
    "ClassPolyModP",
    "ClassPolySet",
    "classpoly_mod_p",
    "poly_from_roots",
    "crt_assemble",
    "rational_reconstruct",
    "rational_reconstruct_assemble",
    "reduce_mod_p",
]

# absolute invariants j1 = I2^5/I10, j2 = I2^3 I4/I10, j3 = I2^2 I6/I10
NORMALIZATION_TAG = "igusa-clebsch/j=(I2^5,I2^3*I4,I2^2*I6)/I10"
RECORD_VERSION = 1
MESTRE_RETRIES = 4


class ClassPolyError(RuntimeError):
    pass


class InsufficientData(ClassPolyError):
    pass


def poly_from_roots(roots: Iterable[int], p: int) -> List[int]:
    """prod (X - r) mod p, lowest degree first."""
    out = [1]
    for r in roots:
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - r * c) % p
        out = nxt
    return out


# --------------------------------------------------------------------------
# Per-prime census
# --------------------------------------------------------------------------


@dataclass
class ClassPolyModP:
    params: Tuple[int, int, int]
    p: int
    H: Tuple[List[int], List[int], List[int]]  # lowest degree first, monic
    census: dict
    seed: int = 0
    timing: dict = field(default_factory=dict)
    tag: str = NORMALIZATION_TAG

    @property
    def degree(self) -> int:
        return len(self.H[0]) - 1

    def to_record(self) -> dict:
        return {
            "version": RECORD_VERSION,
            "kind": "classpoly-mod-p",
            "params": list(self.params),
            "p": self.p,
            "H": [list(h) for h in self.H],
            "census": self.census,
            "seed": self.seed,
            "timing": self.timing,
            "normalization": self.tag,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ClassPolyModP":
        if rec.get("version") != RECORD_VERSION or rec.get("kind") != "classpoly-mod-p":
            raise ClassPolyError("unsupported record")
        return cls(tuple(rec["params"]), rec["p"], tuple(list(h) for h in rec["H"]), rec["census"],
                   rec.get("seed", 0), rec.get("timing", {}), rec.get("normalization", NORMALIZATION_TAG))


def _triple_rng(seed: int, p: int, t: Tuple[int, int, int]) -> random.Random:
    return random.Random(((seed * 1_000_003 + p) * p + t[0]) * p * p + t[1] * p + t[2])


def _construct(F, t, seed):
    """(sextic, status) for a triple; status is 'ok', 'degenerate' or 'failed'."""
    rng = _triple_rng(seed, F.p, t)
    for _ in range(MESTRE_RETRIES):
        f = mestre_raw(F, t, rng)
        if f is not None:
            return f, "ok"
    G, _ = mestre_conic_cubic(F, *_triple_to_clebsch(F, t))
    return None, "degenerate" if _det3(F, G) == F.zero else "failed"


def _scan_chunk(args):
    """Worker: triples with first invariant in ``j1s`` whose N1 lies in ``targets``."""
    p, j1s, targets, seed = args
    F = prime_field(p)
    found, degenerate, failed = [], [], []
    for j1 in j1s:
        for j2 in range(p):
            for j3 in range(p):
                t = (j1, j2, j3)
                f, status = _construct(F, t, seed)
                if f is None:
                    (degenerate if status == "degenerate" else failed).append(t)
                    continue
                n1 = count_points_raw(F, f)
                if n1 in targets:
                    found.append((t, list(f), n1))
    return found, degenerate, failed


def _count2(F, f) -> int:
    E = make_ext_field(F.p, 2)
    return count_points_raw(E, [E.from_int(c) for c in f])


def _match_entry(entries, f, F, n1, seed):
    """The group-order entry of the curve y^2 = f, checked by [N]Q and the full N2 count."""
    cands = [e for e in entries if e.N1 == n1]
    if not cands:
        return None
    curve = GenusTwoCurve(F, f)
    J = Jacobian(normalize_model(curve))
    rng = random.Random(seed)
    Qs = [J.random_key(rng) for _ in range(2)]
    cands = [e for e in cands if all(J.is_identity(J.mul(Q, e.N)) for Q in Qs)]
    if not cands:
        return None
    n2 = _count2(F, f)
    psi = tuple(charpoly_from_counts(n1, n2, F.p))
    for e in cands:
        if tuple(e.candidate.charpoly) == psi:
            return e
    return None


def classpoly_mod_p(params, p: int, seed: int = 0, jobs: int = 1, check_i2_zero: bool = True,
                    strict: bool = False, progress=None) -> ClassPolyModP:
    K = _field(params)
    if not theorem1_prime_test(K, p, strict=strict):
        raise ClassPolyError(f"p = {p} does not satisfy the prime conditions for {K.params}")
    F = prime_field(p)
    go = group_orders(K, p)
    entries = go.entries
    targets = sorted({e.N1 for e in entries})
    timing = {}

    t0 = time.time()
    if jobs > 1:
        step = jobs * 4
        chunks = [(p, list(range(j, p, step)), targets, seed) for j in range(1, min(step, p - 1) + 1)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_chunk, chunks))
    else:
        results = [_scan_chunk((p, list(range(1, p)), targets, seed))]
    found, degenerate, failed = [], [], []
    for a, b, c in results:
        found += a
        degenerate += b
        failed += c
    found.sort()
    timing["scan"] = round(time.time() - t0, 3)
    if failed:
        raise ClassPolyError(f"Mestre construction failed on {len(failed)} nondegenerate triples, e.g. {failed[0]}")

    # isogeny class by full point counts
    t0 = time.time()
    members = []
    for t, f, n1 in found:
        e = _match_entry(entries, f, F, n1, seed)
        if e is not None:
            members.append((t, f, e))
    timing["count"] = round(time.time() - t0, 3)

    i2_in_class = []
    if check_i2_zero:
        rng = random.Random(seed)
        for ic in i2_zero_classes(F):
            f = None
            for _ in range(MESTRE_RETRIES):
                f = mestre_from_ic_raw(F, ic, rng)
                if f is not None:
                    break
            if f is None:
                continue
            n1 = count_points_raw(F, f)
            if n1 in targets:
                e = _match_entry(entries, f, F, n1, seed)
                if e is not None:
                    if endo_ring_is_maximal(GenusTwoCurve(F, f), K, e.candidate, seed):
                        raise ClassPolyError(f"a class with I2 = 0 has CM by O_K at p = {p}; H_i cannot be formed")
                    i2_in_class.append(list(ic))

    # torsion-field filter, then the endomorphism test
    t0 = time.time()
    filters = {}
    survivors, final = [], []
    for t, f, e in members:
        key = tuple(e.candidate.charpoly)
        if key not in filters:
            idx = index_report(K, e.candidate).index
            filters[key] = (idx, primary_filter(K, e.candidate, idx))
        idx, filt = filters[key]
        curve = GenusTwoCurve(F, f)
        if filt is not None and not torsion_field_filter(curve, key, filt[0], filt[1], seed):
            continue
        survivors.append((t, f, e))
    timing["filter"] = round(time.time() - t0, 3)
    t0 = time.time()
    for t, f, e in survivors:
        if endo_ring_is_maximal(GenusTwoCurve(F, f), K, e.candidate, seed, use_filter=False):
            final.append((t, f, e))
    timing["endo"] = round(time.time() - t0, 3)

    H = tuple(poly_from_roots([t[i] for t, _, _ in final], p) for i in range(3))
    census = {
        "group_orders": sorted([list(x) for x in go.pairs()]),
        "case": go.case_label,
        "isogeny_class": len(members),
        "filter": next((list(v[1]) for v in filters.values() if v[1]), None),
        "filter_survivors": len(survivors),
        "final": len(final),
        "index": sorted({v[0] for v in filters.values()}),
        "isogeny_class_triples": [list(t) for t, _, _ in members],
        "survivor_triples": [list(t) for t, _, _ in survivors],
        "matched": [{"triple": list(t), "curve": list(f), "N1": e.N1, "N": e.N} for t, f, e in final],
        "degenerate_triples": len(degenerate),
        "i2_zero_in_isogeny_class": i2_in_class,
    }
    return ClassPolyModP((K.a, K.b, K.d), p, H, census, seed, timing)


# --------------------------------------------------------------------------
# Assembly over Q
# --------------------------------------------------------------------------


@dataclass
class ClassPolySet:
    H: Tuple[List[Fraction], List[Fraction], List[Fraction]]
    lam: Optional[int]
    primes: List[int]
    method: str

    def to_record(self) -> dict:
        return {
            "version": RECORD_VERSION,
            "kind": "classpoly",
            "H": [[f"{c.numerator}/{c.denominator}" for c in h] for h in self.H],
            "lambda": self.lam,
            "primes": list(self.primes),
            "method": self.method,
        }


def _crt(residues: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """(x, M) with x = r_i mod p_i, 0 <= x < M."""
    x, M = 0, 1
    for p, r in residues:
        r %= p
        t = ((r - x) * pow(M, -1, p)) % p
        x += M * t
        M *= p
    return x, M


def _centered(x: int, M: int) -> int:
    x %= M
    return x - M if x > M // 2 else x


def _check_degrees(parts):
    degs = {tuple(len(h) for h in part.H) for part in parts}
    if len(degs) != 1:
        raise ClassPolyError(f"class polynomial degrees differ across primes: {sorted(degs)}")


def crt_assemble(parts: Sequence[ClassPolyModP], lam: int, nu=None, c=None) -> ClassPolySet:
    """Lift lam*H_{i,p} by CRT to the centered interval and divide by lam.

    Needs prod p > 2*lam*nu (or > c when the product bound c is given directly).
    """
    if not parts:
        raise InsufficientData("no parts")
    _check_degrees(parts)
    primes = [part.p for part in parts]
    if len(set(primes)) != len(primes):
        raise ClassPolyError("repeated prime")
    for q in primes:
        if gcd(lam, q) != 1:
            raise ClassPolyError(f"lambda shares a factor with p = {q}")
    bound = c if c is not None else 2 * lam * Fraction(nu)
    M = prod(primes)
    if M <= bound:
        raise InsufficientData(f"modulus product {M} does not exceed the bound {bound} (deficit factor {Fraction(bound) / M})")
    out = []
    for i in range(3):
        coeffs = []
        for k in range(len(parts[0].H[i])):
            x, _ = _crt([(part.p, lam * part.H[i][k]) for part in parts])
            coeffs.append(Fraction(_centered(x, M), lam))
        out.append(coeffs)
    return ClassPolySet(tuple(out), lam, primes, "crt")


def rational_reconstruct(a: int, M: int, bound: Optional[int] = None) -> Optional[Fraction]:
    """r/s = a mod M with |r|, s <= bound (default sqrt(M/2)), or None."""
    if bound is None:
        bound = isqrt(M // 2)
    r0, r1 = M, a % M
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    val = Fraction(r1, s1)
    if gcd(val.denominator, M) != 1:
        return None
    return val


def rational_reconstruct_assemble(parts: Sequence[ClassPolyModP]):
    """Reconstruction with leave-one-out stability; raises InsufficientData when unstable."""
    if len(parts) < 2:
        raise InsufficientData("rational reconstruction needs at least two primes")
    _check_degrees(parts)
    primes = [part.p for part in parts]
    out = []
    for i in range(3):
        coeffs = []
        for k in range(len(parts[0].H[i])):
            res = [(part.p, part.H[i][k]) for part in parts]
            x, M = _crt(res)
            val = rational_reconstruct(x, M)
            if val is None:
                raise InsufficientData(f"coefficient {k} of H{i + 1} has no small reconstruction")
            for j in range(len(res)):
                y, Mj = _crt(res[:j] + res[j + 1:])
                if rational_reconstruct(y, Mj) != val:
                    raise InsufficientData(f"coefficient {k} of H{i + 1} is not stable when omitting p = {res[j][0]}")
            coeffs.append(val)
        out.append(coeffs)
    return ClassPolySet(tuple(out), None, primes, "rational-reconstruction")


def reduce_mod_p(coeffs: Sequence[Fraction], p: int) -> List[int]:
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ClassPolyError(f"p = {p} divides a denominator")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return out
