"""Regenerate src/g2crt/_mestre_tables.py.

The conic entries G_ij = (y_i, y_j)_2 and cubic entries T_ijk = (f, y_i y_j y_k)_6
are invariants of the sextic f, hence polynomials in the Clebsch invariants
A, B, C, D.  We recover those polynomials by exact linear algebra: evaluate
both sides on random integer sextics and solve for the coefficients of every
monomial of the right weight.  The fit is then checked on fresh samples.

Run:  python tools/gen_mestre_tables.py
"""

import itertools
import random
import sys
from fractions import Fraction
from pathlib import Path

import sympy as sp

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from g2crt.ff import QQ  # noqa: E402
from g2crt.igusa import _binary_mul, clebsch_covariants, transvectant  # noqa: E402

# weights (degree in the coefficients of f, times 2) of y1, y2, y3
Y_WEIGHT = (3, 5, 7)


def conic_and_cubic(f):
    (A, B, C, D), ys = clebsch_covariants(QQ, f)
    G = {(i, j): transvectant(QQ, ys[i], ys[j], 2)[0] for i in range(3) for j in range(i, 3)}
    T = {}
    for tr in itertools.combinations_with_replacement(range(3), 3):
        prod = _binary_mul(QQ, _binary_mul(QQ, ys[tr[0]], ys[tr[1]]), ys[tr[2]])
        T[tr] = transvectant(QQ, f, prod, 6)[0]
    return (A, B, C, D), G, T


def monomials(weight):
    # A, B, C, D have degrees 2, 4, 6, 10
    out = []
    for e in range(weight // 10 + 1):
        for c in range((weight - 10 * e) // 6 + 1):
            for b in range((weight - 10 * e - 6 * c) // 4 + 1):
                r = weight - 10 * e - 6 * c - 4 * b
                if r % 2 == 0:
                    out.append((r // 2, b, c, e))
    return out


def evaluate(poly, inv):
    A, B, C, D = inv
    return sum(coef * A**a * B**b * C**c * D**e for (a, b, c, e), coef in poly.items())


def fit(samples, weight, getter):
    ms = monomials(weight)
    rows = [[inv[0] ** a * inv[1] ** b * inv[2] ** c * inv[3] ** e for a, b, c, e in ms] for inv, _, _ in samples]
    rhs = [getter(G, T) for _, G, T in samples]
    M = sp.Matrix(rows)
    v = sp.Matrix(rhs)
    sol = (M.T * M).LUsolve(M.T * v)
    if M * sol != v:
        raise RuntimeError(f"no exact fit in weight {weight}")
    return {m: Fraction(int(sp.numer(sol[i])), int(sp.denom(sol[i]))) for i, m in enumerate(ms) if sol[i] != 0}


def main():
    rng = random.Random(1)
    samples = [conic_and_cubic([Fraction(rng.randint(-4, 4)) for _ in range(7)]) for _ in range(45)]
    conic = {}
    for i in range(3):
        for j in range(i, 3):
            w = Y_WEIGHT[i] + Y_WEIGHT[j]
            conic[(i, j)] = fit(samples, w, lambda G, T, k=(i, j): G[k])
    cubic = {}
    for tr in itertools.combinations_with_replacement(range(3), 3):
        w = 1 + sum(Y_WEIGHT[i] for i in tr)
        cubic[tr] = fit(samples, w, lambda G, T, k=tr: T[k])

    check = random.Random(7)
    for _ in range(10):
        inv, G, T = conic_and_cubic([Fraction(check.randint(-9, 9)) for _ in range(7)])
        assert all(evaluate(conic[k], inv) == G[k] for k in conic)
        assert all(evaluate(cubic[k], inv) == T[k] for k in cubic)

    lines = [
        '"""Mestre conic and cubic coefficients as polynomials in Clebsch invariants.',
        "",
        "Generated by tools/gen_mestre_tables.py; do not edit by hand.",
        "Keys of the inner dicts are exponents (a, b, c, e) of A^a B^b C^c D^e.",
        '"""',
        "",
        "from fractions import Fraction as Fr",
        "",
        "CONIC = {",
    ]
    for k, poly in conic.items():
        lines.append(f"    {k}: {_fmt(poly)},")
    lines.append("}")
    lines.append("")
    lines.append("CUBIC = {")
    for k, poly in cubic.items():
        lines.append(f"    {k}: {_fmt(poly)},")
    lines.append("}")
    out = ROOT / "src" / "g2crt" / "_mestre_tables.py"
    out.write_text("\n".join(lines) + "\n")
    print("wrote", out)


def _fmt(poly):
    items = ", ".join(f"{m}: Fr({c.numerator}, {c.denominator})" for m, c in sorted(poly.items()))
    return "{" + items + "}"


if __name__ == "__main__":
    main()
