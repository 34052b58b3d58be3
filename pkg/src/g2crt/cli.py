"""Command line interface: ``g2crt <verb> [options]``.

Exit codes: 0 success, 2 precondition violation, 3 insufficient data for
CRT, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .cache import ResultCache
from .classpoly import ClassPolyError, ClassPolyModP, ClassPolySet
from .cmfield import CMFieldError
from .ff import prime_field
from .igusa import CurveError, GenusTwoCurve
from .jacobian import JacobianError
from .pipeline import (
    PreconditionError,
    analyze_field,
    build_curve,
    classpoly_for_prime,
    find_primes,
    run_classpoly,
    verify_curve,
)
from .weil import WeilError

EXIT_OK, EXIT_PRECONDITION, EXIT_INSUFFICIENT, EXIT_INTERNAL = 0, 2, 3, 4


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _triple(text: str):
    vals = _ints(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected three integers")
    return tuple(vals)


def format_poly(coeffs, var: str = "X") -> str:
    """Highest degree first, e.g. X^2 + 30*X + 32."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono:
            terms.append(f"{c}*{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms) if terms else "0"


def _emit(args, record: dict, text_lines: List[str]):
    if args.format == "json":
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _cache(args) -> Optional[ResultCache]:
    return ResultCache(args.cache_dir) if args.cache_dir else None


def _part_record(part: ClassPolyModP) -> dict:
    rec = part.to_record()
    rec.pop("timing", None)  # keeps machine-readable output deterministic
    return rec


def _part_lines(part: ClassPolyModP) -> List[str]:
    c = part.census
    lines = [f"p = {part.p}  case {c['case']}  group orders {c['group_orders']}",
             f"  isogeny class {c['isogeny_class']}, filter {c['filter']} survivors {c['filter_survivors']}, "
             f"maximal {c['final']}"]
    for m in c["matched"]:
        lines.append(f"  triple {tuple(m['triple'])}  N1 = {m['N1']}  #J = {m['N']}")
    for i, h in enumerate(part.H, 1):
        lines.append(f"  H{i},{part.p} = {format_poly(h)}")
    return lines


def cmd_analyze_field(args) -> int:
    rep = analyze_field(args.field)
    lines = [f"{rep['field']}: primitive={rep['primitive']} galois={rep['galois']}",
             f"  disc(K) = {rep['disc_K']}, disc(K0) = {rep['disc_K0']}, h(K0) = {rep['h_K0']}",
             "  O_K basis (coordinates in 1, sqrt(d), eta, sqrt(d)*eta):"]
    lines += [f"    {b}" for b in rep["integral_basis"]]
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_find_primes(args) -> int:
    rep = find_primes(args.field, args.limit, strict=args.strict)
    _emit(args, rep, [f"primes < {args.limit}: {rep['primes']}"])
    return EXIT_OK


def cmd_classpoly_mod_p(args) -> int:
    part = classpoly_for_prime(args.field, args.p, args.seed, args.jobs, _cache(args))
    _emit(args, _part_record(part), _part_lines(part))
    return EXIT_OK


def cmd_classpoly(args) -> int:
    cache = _cache(args)
    run = run_classpoly(args.field, primes=args.primes, product=args.primes_product, lam=args.lam,
                        seed=args.seed, jobs=args.jobs, cache=cache)
    rec = {"parts": [_part_record(p) for p in run.parts], "status": run.status, "message": run.message,
           "result": run.result.to_record() if run.result else None}
    lines = []
    for part in run.parts:
        lines += _part_lines(part)
    if run.result:
        for i, h in enumerate(run.result.H, 1):
            lines.append(f"H{i} = {format_poly([str(c) for c in h])}")
    else:
        lines.append(f"rational polynomials: insufficient ({run.message})")
    if cache is not None:
        lines.append(f"cache hits: {cache.hits}")
    _emit(args, rec, lines)
    return EXIT_OK if run.status == "ok" else EXIT_INSUFFICIENT


def _load_classpolys(path: Optional[str]) -> Optional[ClassPolySet]:
    if not path:
        return None
    with open(path) as fh:
        rec = json.load(fh)
    if "result" in rec:
        rec = rec["result"]
    H = tuple([Fraction(c) for c in h] for h in rec["H"])
    return ClassPolySet(H, rec.get("lambda"), rec.get("primes", []), rec.get("method", "file"))


def cmd_build_curve(args) -> int:
    if not args.zeta:
        raise PreconditionError("--zeta n,N1,N2 is required")
    n, N1, N2 = args.zeta
    res = build_curve(n, N1, N2, seed=args.seed, jobs=args.jobs, cache=_cache(args),
                      classpolys=_load_classpolys(args.classpolys))
    ok = res.curve is not None
    rec = {"zeta": [n, N1, N2], "params": list(res.params), "order": res.order,
           "curve": [int(c) for c in res.curve.raw] if ok else None, "transcript": res.transcript}
    lines = list(res.transcript)
    lines.append(f"curve: y^2 = {format_poly([int(c) for c in res.curve.raw], 'x')}" if ok else "no curve found")
    _emit(args, rec, lines)
    return EXIT_OK if ok else EXIT_PRECONDITION


def cmd_verify_curve(args) -> int:
    if args.p is None or args.curve is None:
        raise PreconditionError("--p and --curve are required")
    F = prime_field(args.p)
    curve = GenusTwoCurve(F, args.curve)
    rep = verify_curve(curve, args.field, seed=args.seed)
    lines = [f"#C(F_p) = {rep['N1']}, #C(F_p^2) = {rep['N2']}, #J = {rep['order']}",
             f"in isogeny class: {rep['in_isogeny_class']}"]
    if rep["in_isogeny_class"]:
        lines.append(f"index [O_K : Z[pi, pibar]] = {rep['index']}")
        if rep["filter"]:
            lines.append(f"torsion filter (k, gamma) = {tuple(rep['filter'])}: {rep['filter_passed']}")
        for lvl, m in rep["torsion_levels"].items():
            lines.append(f"J[{lvl}] defined over F_p^{m}")
        for chk in rep["checks"]:
            lines.append(f"basis element with denominator {chk['denominator']}: {chk['passed']}")
    lines.append(f"End(J) = O_K: {rep['maximal']}")
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import run_standing_corpus

    reports = run_standing_corpus()
    ok = all(r.agreement for r in reports)
    rec = {"agreement": ok, "reports": [r.to_dict() for r in reports]}
    _emit(args, rec, [f"{'ok  ' if r.agreement else 'FAIL'} {r.scope}" for r in reports])
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_triple, help="CM field parameters a,b,d for K = Q(i sqrt(a + b sqrt d))")
    common.add_argument("--zeta", type=_triple, help="target n,N1,N2")
    common.add_argument("--primes-product", type=int, dest="primes_product", help="target product c of the primes")
    common.add_argument("--primes", type=_ints, help="explicit comma-separated primes")
    common.add_argument("--lambda", type=int, dest="lam", help="common denominator lambda")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="g2crt", description="Igusa class polynomials by the CRT method.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("analyze-field", parents=[common], help="classify K and print O_K")
    sp.set_defaults(func=cmd_analyze_field, need_field=True)
    sp = sub.add_parser("find-primes", parents=[common], help="primes passing the prime conditions")
    sp.add_argument("--limit", type=int, default=100)
    sp.add_argument("--strict", action="store_true", help="require principal primes above p")
    sp.set_defaults(func=cmd_find_primes, need_field=True)
    sp = sub.add_parser("classpoly-mod-p", parents=[common], help="H_{i,p} for one prime")
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(func=cmd_classpoly_mod_p, need_field=True)
    sp = sub.add_parser("classpoly", parents=[common], help="H_i over Q from several primes")
    sp.set_defaults(func=cmd_classpoly, need_field=True)
    sp = sub.add_parser("build-curve", parents=[common], help="curve with a given zeta function")
    sp.add_argument("--classpolys", help="record file with rational H_i")
    sp.set_defaults(func=cmd_build_curve, need_field=False)
    sp = sub.add_parser("verify-curve", parents=[common], help="decide End(J) = O_K for a curve")
    sp.add_argument("--p", type=int)
    sp.add_argument("--curve", type=_ints, help="coefficients of f, lowest degree first")
    sp.set_defaults(func=cmd_verify_curve, need_field=True)
    sp = sub.add_parser("oracle", parents=[common], help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_oracle, need_field=False)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.need_field and args.field is None:
            raise PreconditionError("--field a,b,d is required")
        if args.field is not None and args.zeta is not None:
            raise PreconditionError("give either --field or --zeta, not both")
        return args.func(args)
    except (PreconditionError, CMFieldError, WeilError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ClassPolyError, JacobianError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
