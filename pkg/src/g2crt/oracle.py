"""Brute-force reference computations at tiny sizes.

The group enumeration here does not use the group law: reduced divisors are
listed from points of C over F_q and F_{q^2} (pairs of points, tangent
double points, conjugate pairs), so the cardinality is an independent check
of the point counts, of the resultant formula and of Cantor's algorithm.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from sympy import factorint

from .ff import Poly, make_ext_field, peval, pderiv, pmul, poly_roots, prime_field, ptrim
from .igusa import (
    GenusTwoCurve,
    charpoly_from_counts,
    count_points,
    mestre_construct,
    triple_raw,
)
from .jacobian import Jacobian, ell_torsion_basis, jacobian_order, normalize_model

__all__ = [
    "OracleReport",
    "brute_curve_census",
    "enumerate_jacobian",
    "naive_group_check",
    "naive_torsion_check",
    "census_check",
    "standing_corpus",
    "run_standing_corpus",
]

CENSUS_MAX_P = 13
GROUP_MAX_Q2 = 10**5
CLOSURE_FULL_LIMIT = 400


@dataclass
class OracleReport:
    scope: str
    agreement: bool
    counterexample: Optional[Any] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.agreement != (self.counterexample is None):
            raise ValueError("a counterexample is present exactly when agreement fails")

    def to_dict(self) -> dict:
        return {"scope": self.scope, "agreement": self.agreement,
                "counterexample": repr(self.counterexample) if self.counterexample is not None else None,
                "details": self.details}


# --------------------------------------------------------------------------
# Census
# --------------------------------------------------------------------------


def brute_curve_census(p: int, full: bool = False) -> Dict[tuple, list]:
    """triple -> witness sextic, over all models of degree 5 and 6.

    By default f is taken monic with vanishing second coefficient (every
    model is equivalent to one of these by scaling and translation, which
    leave the absolute invariants unchanged); ``full`` walks all p^7 models.
    """
    if not 7 <= p <= CENSUS_MAX_P:
        raise ValueError(f"census is capped to 7 <= p <= {CENSUS_MAX_P}")
    F = prime_field(p)
    out: Dict[tuple, list] = {}
    rng = range(p)
    if full:
        models = itertools.chain(
            (list(c) + [lead] for lead in range(1, p) for c in itertools.product(rng, repeat=6)),
            (list(c) + [lead] for lead in range(1, p) for c in itertools.product(rng, repeat=5)),
        )
    else:
        models = itertools.chain(
            (list(c) + [0, 1] for c in itertools.product(rng, repeat=5)),
            (list(c) + [0, 1] for c in itertools.product(rng, repeat=4)),
        )
    for f in models:
        t = triple_raw(F, f)  # None when the discriminant vanishes
        if t is not None and t not in out:
            out[t] = f
    return out


def census_check(p: int = 7, seed: int = 0) -> OracleReport:
    """Triples of the census (I2 != 0) versus triples where mestre_construct succeeds."""
    F = prime_field(p)
    census = brute_curve_census(p)
    census_set = {t for t in census if t[0] != 0}
    built = set()
    bad = []
    for t in itertools.product(range(1, p), range(p), range(p)):
        c = mestre_construct(t, F, seed=seed)
        if c is None:
            continue
        got = triple_raw(F, c.raw)
        if got != t:
            bad.append((t, got))
        built.add(t)
    diff = census_set ^ built
    ok = not bad and not diff
    cex = None if ok else {"mismatch": bad[:5], "symmetric_difference": sorted(diff)[:5]}
    return OracleReport(f"census p={p}", ok, cex, {"census": len(census_set), "mestre": len(built)})


# --------------------------------------------------------------------------
# Groups by enumeration
# --------------------------------------------------------------------------


def _embedding(Fq, E):
    """Map raw elements of F_q into E = F_{q^2}, and back on the image."""
    if Fq.m == 1:
        fwd = {a: E.embed_prime(a) for a in range(Fq.p)}
    else:
        mod = [E.embed_prime(c) for c in Fq.modulus]
        theta = min((x.raw for x in poly_roots(Poly.from_raw(E, mod))), key=E.index)
        fwd = {}
        for a in Fq.elements():
            acc = E.zero
            pw = E.one
            for c in Fq.to_coords(a):
                acc = E.add(acc, E.mul(E.embed_prime(c), pw))
                pw = E.mul(pw, theta)
            fwd[a] = acc
    back = {v: k for k, v in fwd.items()}
    return fwd, back


def enumerate_jacobian(J: Jacobian) -> List[tuple]:
    """All reduced divisor keys of J(F_q), built from points only."""
    F = J.field
    f = J.f
    q = F.q
    E = make_ext_field(F.p, 2 * J.m)
    fwd, back = _embedding(F, E)
    fE = [fwd[c] for c in f]
    one = F.one
    ns = (lambda du: range(0, 3 - du)) if J.deg == 6 else (lambda du: (0,))

    pts = []  # affine points over F_q
    for a in F.elements():
        val = peval(F, f, a)
        if val == F.zero:
            pts.append((a, F.zero))
        else:
            y = F.sqrt(val)
            if y is not None:
                pts.append((a, y))
                pts.append((a, F.neg(y)))
    keys = []

    def emit(u, v):
        u = tuple(u)
        v = tuple(ptrim(F, list(v)))
        for n in ns(len(u) - 1):
            keys.append((u, v, n))

    emit([one], [])
    for a, y in pts:
        emit([F.neg(a), one], [y])
    # u = (x - a)(x - b), a != b
    for (a, ya), (b, yb) in itertools.combinations(pts, 2):
        if a == b:
            continue  # P + iota(P) is principal
        v1 = F.div(F.sub(yb, ya), F.sub(b, a))
        v0 = F.sub(ya, F.mul(v1, a))
        emit(pmul(F, [F.neg(a), one], [F.neg(b), one]), [v0, v1])
    # u = (x - a)^2 with y_a != 0
    df = pderiv(F, list(f))
    for a, ya in pts:
        if ya == F.zero:
            continue
        t = F.div(peval(F, df, a), F.add(ya, ya))
        emit(pmul(F, [F.neg(a), one], [F.neg(a), one]), [F.sub(ya, F.mul(t, a)), t])
    # u irreducible over F_q: a conjugate pair of points over F_{q^2}
    image = set(fwd.values())
    seen = set()
    for al in E.elements():
        if al in image:
            continue
        alq = E.pow(al, q)
        s = E.add(al, alq)
        pr = E.mul(al, alq)
        u = (back[pr], F.neg(back[s]), one)
        if u in seen:
            continue
        seen.add(u)
        val = peval(E, fE, al)
        y = E.sqrt(val)
        if y is None:
            continue
        ys = [y] if y == E.zero else [y, E.neg(y)]
        for yy in ys:
            yq = E.pow(yy, q)
            v1 = E.div(E.sub(yy, yq), E.sub(al, alq))
            v0 = E.sub(yy, E.mul(v1, al))
            emit(list(u), [back[v0], back[v1]])
    return keys


def _psi(curve: GenusTwoCurve) -> list:
    return charpoly_from_counts(count_points(curve, 1), count_points(curve, 2), curve.field.p)


def naive_group_check(curve: GenusTwoCurve, m: int = 1, seed: int = 0) -> OracleReport:
    p = curve.field.p
    if m > 2 or p ** (2 * m) > GROUP_MAX_Q2:
        raise ValueError("naive group check is capped to m <= 2 and p^(2m) <= 10^5")
    curve = normalize_model(curve)
    J = Jacobian(curve, m)
    keys = enumerate_jacobian(J)
    elems = set(keys)
    psi = _psi(curve)
    N = jacobian_order(psi, m)
    details = {"p": p, "m": m, "enumerated": len(keys), "resultant": N}
    problems = []
    if len(elems) != len(keys):
        problems.append("duplicate keys")
    if m == 1:
        N1, N2 = count_points(curve, 1), count_points(curve, 2)
        details["from_counts"] = (N1 * N1 + N2) // 2 - p
        if details["from_counts"] != len(elems):
            problems.append("count formula")
    if N != len(elems):
        problems.append("resultant")
    invalid = [k for k in keys if not J._valid(*k)]
    if invalid:
        problems.append(("invalid", invalid[0]))
    if J.zero_key not in elems:
        problems.append("identity missing")
    if any(J.neg(k) not in elems for k in keys):
        problems.append("inverse missing")
    rng = random.Random(seed)
    if len(keys) <= CLOSURE_FULL_LIMIT:
        pairs = itertools.product(keys, keys)
        killed = keys
    else:
        pairs = ((rng.choice(keys), rng.choice(keys)) for _ in range(3000))
        killed = [rng.choice(keys) for _ in range(200)]
    for a, b in pairs:
        c = J.add(a, b)
        if c not in elems:
            problems.append(("closure", a, b, c))
            break
    for k in killed:
        if not J.is_identity(J.mul(k, len(elems))):
            problems.append(("exponent", k))
            break
    ok = not problems
    return OracleReport(f"group p={p} m={m}", ok, None if ok else problems, details)


def naive_torsion_check(curve: GenusTwoCurve, s: int, m: int = 1, basis: Optional[List[tuple]] = None,
                        seed: int = 0) -> OracleReport:
    """J(F_{p^m})[s] by enumeration versus the span of a torsion basis."""
    p = curve.field.p
    if m > 2 or p ** (2 * m) > GROUP_MAX_Q2:
        raise ValueError("naive torsion check is capped to m <= 2 and p^(2m) <= 10^5")
    curve = normalize_model(curve)
    J = Jacobian(curve, m)
    brute = {k for k in enumerate_jacobian(J) if J.is_identity(J.mul(k, s))}
    if basis is None:
        N = jacobian_order(_psi(curve), m)
        parts = []
        for ell, e in factorint(s).items():
            b = ell_torsion_basis(J, N, ell, e, random.Random(seed))
            if b is None:
                parts = None
                break
            parts.append(b)
        if parts is None:
            basis = None
        elif parts:
            basis = [J.zero_key] * 4
            for part in parts:
                basis = [J.add(x, y) for x, y in zip(basis, part)]
        else:
            basis = [J.zero_key] * 4
    details = {"p": p, "m": m, "s": s, "enumerated": len(brute)}
    if basis is None:
        ok = len(brute) < s**4
        return OracleReport(f"torsion s={s} p={p} m={m}", ok, None if ok else "basis routine missed full torsion",
                            details)
    span = {J.zero_key}
    for g in basis:
        new = set()
        for x in span:
            y = x
            for _ in range(s):
                new.add(y)
                y = J.add(y, g)
        span = new
    details["span"] = len(span)
    ok = span == brute
    cex = None if ok else {"only_brute": sorted(brute - span)[:3], "only_span": sorted(span - brute)[:3]}
    return OracleReport(f"torsion s={s} p={p} m={m}", ok, cex, details)


# --------------------------------------------------------------------------
# Standing corpus
# --------------------------------------------------------------------------


def standing_corpus() -> List[GenusTwoCurve]:
    """Three curves over F_7, two over F_11 (degree 5, square and non-square leading coefficients)."""
    F7, F11 = prime_field(7), prime_field(11)
    split = [1]
    for r in range(6):
        split = pmul(F7, split, [(-r) % 7, 1])
    return [
        GenusTwoCurve(F7, split),                   # x(x-1)...(x-5): full 2-torsion over F_7
        GenusTwoCurve(F7, [3, 1, 4, 0, 2, 1]),      # degree 5
        GenusTwoCurve(F7, [2, 0, 1, 5, 0, 0, 3]),   # non-square leading coefficient
        GenusTwoCurve(F11, [3, 1, 0, 4, 0, 2, 1]),
        GenusTwoCurve(F11, [5, 2, 7, 0, 1, 1]),
    ]


def run_standing_corpus() -> List[OracleReport]:
    out = [census_check(7)]
    for c in standing_corpus():
        for m in (1, 2):
            if c.field.p ** (2 * m) <= GROUP_MAX_Q2:
                out.append(naive_group_check(c, m))
        out.append(naive_torsion_check(c, 2, 1))
    return out
