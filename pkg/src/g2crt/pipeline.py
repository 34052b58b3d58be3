"""Library entry points behind the command line verbs."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .cache import ResultCache
from .classpoly import (
    ClassPolyError,
    ClassPolyModP,
    ClassPolySet,
    InsufficientData,
    classpoly_mod_p,
    crt_assemble,
    rational_reconstruct_assemble,
    reduce_mod_p,
)
from .cmfield import CMFieldError, class_number_K0, classify
from .endoring import endo_ring_is_maximal
from .ff import Poly, poly_roots, prime_field
from .igusa import (
    GenusTwoCurve,
    absolute_invariants,
    charpoly_from_counts,
    count_points,
    mestre_construct,
    quadratic_twist,
)
from .jacobian import Jacobian, normalize_model
from .weil import (
    WeilError,
    field_from_zeta,
    get_field,
    group_orders,
    passing_primes,
    select_primes,
    theorem1_prime_test,
)

log = logging.getLogger(__name__)

__all__ = [
    "PreconditionError",
    "analyze_field",
    "find_primes",
    "classpoly_for_prime",
    "run_classpoly",
    "build_curve",
    "verify_curve",
]


class PreconditionError(ValueError):
    pass


def _params(params):
    try:
        p = classify(*params)
    except CMFieldError as exc:
        raise PreconditionError(str(exc)) from exc
    return p


def analyze_field(params) -> dict:
    prm = _params(params)
    K = get_field(prm.a, prm.b, prm.d)
    OK = K.integral_basis
    return {
        "field": str(prm),
        "params": [prm.a, prm.b, prm.d],
        "primitive": prm.primitive,
        "galois": prm.galois_type,
        "delta": prm.delta,
        "disc_K": OK.disc_K,
        "disc_K0": K.disc_K0,
        "h_K0": class_number_K0(prm.d),
        "integral_basis": [[str(c) for c in b.c] for b in OK.basis],
        "index_over_eta": OK.index_over_eta,
        "index_over_sqrt_d_eta": OK.index_over_sqrt_d_eta,
    }


def find_primes(params, limit: int, strict: bool = False) -> dict:
    prm = _params(params)
    ps = passing_primes((prm.a, prm.b, prm.d), limit, strict=strict)
    return {"params": [prm.a, prm.b, prm.d], "limit": limit, "strict": strict, "primes": ps}


def classpoly_for_prime(params, p: int, seed: int = 0, jobs: int = 1,
                        cache: Optional[ResultCache] = None) -> ClassPolyModP:
    prm = _params(params)
    key = (prm.a, prm.b, prm.d)
    if not theorem1_prime_test(key, p):
        raise PreconditionError(f"p = {p} does not satisfy the prime conditions for {prm}")
    if cache is not None:
        hit = cache.get(key, p)
        if hit is not None:
            return hit
    part = classpoly_mod_p(key, p, seed=seed, jobs=jobs)
    if cache is not None:
        cache.put(part)
    return part


@dataclass
class ClassPolyRun:
    parts: List[ClassPolyModP]
    result: Optional[ClassPolySet]
    status: str  # "ok" or "insufficient"
    message: str = ""
    cache_hits: int = 0


def run_classpoly(params, primes: Optional[Sequence[int]] = None, product: Optional[int] = None,
                  lam: Optional[int] = None, seed: int = 0, jobs: int = 1,
                  cache: Optional[ResultCache] = None) -> ClassPolyRun:
    prm = _params(params)
    key = (prm.a, prm.b, prm.d)
    if primes is None:
        if product is None:
            raise PreconditionError("give explicit primes or a target product")
        sel = select_primes(key, product)
        if not sel.complete:
            raise PreconditionError("prime search bound reached before the target product")
        primes = sel.primes
    parts = [classpoly_for_prime(key, p, seed, jobs, cache) for p in primes]
    hits = cache.hits if cache else 0
    try:
        if lam is not None:
            bound = product if product is not None else 0
            res = crt_assemble(parts, lam, c=bound)
        elif len(parts) == 1:
            raise InsufficientData("a single prime gives only the reduction mod p")
        else:
            res = rational_reconstruct_assemble(parts)
    except InsufficientData as exc:
        return ClassPolyRun(parts, None, "insufficient", str(exc), hits)
    return ClassPolyRun(parts, res, "ok", "", hits)


# --------------------------------------------------------------------------
# Curves with a prescribed zeta function
# --------------------------------------------------------------------------


def _check_weil(n: int, N1: int, N2: int):
    s1 = n + 1 - N1
    twice = N2 - n * n - 1 + s1 * s1
    if twice % 2:
        raise PreconditionError("N2 is inconsistent with N1 (parity)")
    s2 = twice // 2
    # beta = pi + pibar are the roots of x^2 - s1 x + (s2 - 2n), both real with |beta| <= 2 sqrt(n)
    disc = s1 * s1 - 4 * (s2 - 2 * n)
    if disc < 0:
        raise PreconditionError("not a Weil polynomial: pi + pibar is not real")
    # both roots in [-2 sqrt(n), 2 sqrt(n)]: g(+-2 sqrt n) >= 0 and the vertex inside
    if s1 * s1 > 16 * n or 2 * n + s2 < 0 or (2 * n + s2) ** 2 < 4 * s1 * s1 * n:
        raise PreconditionError("not a Weil polynomial: |pi + pibar| exceeds 2 sqrt(n)")
    return s1, s2


def _matches(curve: GenusTwoCurve, N1: int, N2: int, N: int, rng) -> bool:
    J = Jacobian(normalize_model(curve))
    for _ in range(3):
        if not J.is_identity(J.mul(J.random_key(rng), N)):
            return False
    return count_points(curve, 1) == N1 and count_points(curve, 2) == N2


@dataclass
class BuildResult:
    curve: Optional[GenusTwoCurve]
    params: tuple
    order: int
    transcript: List[str] = field(default_factory=list)


def build_curve(n: int, N1: int, N2: int, seed: int = 0, jobs: int = 1,
                cache: Optional[ResultCache] = None, classpolys: Optional[ClassPolySet] = None) -> BuildResult:
    """A curve over F_n with #C(F_n) = N1 and #C(F_{n^2}) = N2."""
    _check_weil(n, N1, N2)
    try:
        zf = field_from_zeta(n, N1, N2)
    except (WeilError, CMFieldError) as exc:
        raise PreconditionError(str(exc)) from exc
    prm = zf.params
    key = (prm.a, prm.b, prm.d)
    N = (N1 * N1 + N2) // 2 - n
    log_lines = [f"field {prm} (from s1={zf.s1}, s2={zf.s2})", f"target #J = {N}"]
    F = prime_field(n)
    matched = []
    if classpolys is not None:
        H = [reduce_mod_p(h, n) for h in classpolys.H]
    else:
        try:
            part = classpoly_for_prime(key, n, seed, jobs, cache)
        except ClassPolyError as exc:
            raise PreconditionError(str(exc)) from exc
        H = list(part.H)
        matched = [tuple(m["triple"]) for m in part.census.get("matched", [])]
    roots = [sorted(x.raw for x in poly_roots(Poly.from_raw(F, [F.from_int(c) for c in h]))) for h in H]
    log_lines.append(f"roots mod {n}: {roots}")
    trials = matched + [t for t in itertools.product(*roots) if t not in matched]
    rng = random.Random(seed)
    for t in trials:
        curve = mestre_construct(t, F, seed=seed)
        if curve is None:
            log_lines.append(f"{t}: no curve")
            continue
        for cand, label in ((curve, "curve"), (quadratic_twist(curve), "twist")):
            if _matches(cand, N1, N2, N, rng):
                log_lines.append(f"{t}: {label} has #J = {N}")
                return BuildResult(cand, key, N, log_lines)
        log_lines.append(f"{t}: neither twist has the target zeta function")
    return BuildResult(None, key, N, log_lines)


def verify_curve(curve: GenusTwoCurve, params, seed: int = 0) -> dict:
    prm = _params(params)
    K = get_field(prm.a, prm.b, prm.d)
    p = curve.field.p
    N1, N2 = count_points(curve, 1), count_points(curve, 2)
    psi = tuple(charpoly_from_counts(N1, N2, p))
    out = {"p": p, "curve": [int(c) for c in curve.raw], "N1": N1, "N2": N2,
           "order": (N1 * N1 + N2) // 2 - p, "charpoly": list(psi)}
    try:
        tri = absolute_invariants(curve)
        out["invariants"] = list(tri.as_ints())
    except Exception:  # I10 = 0 cannot happen for a valid curve; keep the report going
        out["invariants"] = None
    try:
        go = group_orders(K, p)
    except WeilError as exc:
        raise PreconditionError(str(exc)) from exc
    entry = next((e for e in go.entries if tuple(e.candidate.charpoly) == psi), None)
    if entry is None:
        out.update(in_isogeny_class=False, maximal=False)
        return out
    rep = endo_ring_is_maximal(curve, K, entry.candidate, seed, report=True)
    out.update(
        in_isogeny_class=True,
        index=rep.index,
        filter=list(rep.filter) if rep.filter else None,
        filter_passed=rep.filter_passed,
        torsion_levels={str(k): v for k, v in sorted(rep.levels.items())},
        checks=[{"denominator": c.s, "passed": c.result} for c in rep.checks],
        maximal=rep.maximal,
        reason=rep.reason,
    )
    return out
