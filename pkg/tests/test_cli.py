import json

import pytest
from _fixtures import VAN_WAMELEN

from g2crt import cli

FIELD = "13,3,13"
CURVE = "10,32,29,7,36,21,5"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_field(capsys):
    code, out, _ = run(capsys, "analyze-field", "--field", FIELD)
    assert code == 0
    assert "disc(K) = 140608" in out and "h(K0) = 1" in out


def test_analyze_field_json(capsys):
    code, out, _ = run(capsys, "analyze-field", "--field", FIELD, "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["params"] == [13, 3, 13] and rec["galois"] == "cyclic"


def test_find_primes(capsys):
    code, out, _ = run(capsys, "find-primes", "--field", FIELD, "--limit", "50", "--format", "json")
    assert code == 0 and json.loads(out)["primes"] == [43]


def test_find_primes_strict(capsys):
    code, out, _ = run(capsys, "find-primes", "--field", FIELD, "--limit", "200", "--strict")
    assert code == 0 and out.strip() == "primes < 200: [79, 113, 191]"


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze-field", "--field", "5,2,6"],
        ["analyze-field"],
        ["classpoly-mod-p", "--field", FIELD, "--p", "41"],
        ["build-curve", "--zeta", "43,200,5"],
        ["build-curve"],
        ["verify-curve", "--field", FIELD],
        ["build-curve", "--field", FIELD, "--zeta", "43,36,1886"],
    ],
)
def test_precondition_exit(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:") and not out


def test_bad_argument_syntax(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["analyze-field", "--field", "13,3"])
    assert exc.value.code == 2


def test_classpoly_mod_p_cached(capsys, cache_dir):
    code, out, _ = run(capsys, "classpoly-mod-p", "--field", FIELD, "--p", "43", "--cache-dir", str(cache_dir))
    assert code == 0
    assert "H1,43 = X^2 + 30*X + 32" in out
    assert "H2,43 = X^2 + 42*X + 10" in out
    assert "H3,43 = X^2 + 18*X + 28" in out
    assert "isogeny class 67" in out


def test_classpoly_single_prime_insufficient(capsys, cache_dir):
    argv = ["classpoly", "--field", FIELD, "--primes", "43", "--cache-dir", str(cache_dir)]
    code, first, _ = run(capsys, *argv)
    assert code == 3
    assert "insufficient" in first and first.rstrip().endswith("cache hits: 1")
    code, second, _ = run(capsys, *argv)
    assert code == 3 and second == first


def test_json_deterministic(capsys, cache_dir):
    argv = ["classpoly", "--field", FIELD, "--primes", "43", "--cache-dir", str(cache_dir), "--format", "json"]
    outs = [run(capsys, *argv)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    rec = json.loads(outs[0])
    assert rec["status"] == "insufficient" and rec["result"] is None
    assert rec["parts"][0]["H"] == [[32, 30, 1], [10, 42, 1], [28, 18, 1]]
    assert "timing" not in rec["parts"][0]


def test_build_curve_cached(capsys, cache_dir):
    code, out, _ = run(capsys, "build-curve", "--zeta", "43,52,1886", "--cache-dir", str(cache_dir), "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["order"] == 2252 and rec["params"] == [13, 3, 13]
    code, out, _ = run(capsys, "verify-curve", "--field", FIELD, "--p", "43",
                       "--curve", ",".join(map(str, rec["curve"])), "--format", "json")
    assert code == 0 and json.loads(out)["maximal"]


def test_build_curve_from_file(capsys, tmp_path):
    path = tmp_path / "h.json"
    H = [[f"{c.numerator}/{c.denominator}" for c in h] for h in VAN_WAMELEN]
    path.write_text(json.dumps({"result": {"H": H, "lambda": None, "primes": [], "method": "external"}}))
    code, out, _ = run(capsys, "build-curve", "--zeta", "43,36,1886", "--classpolys", str(path))
    assert code == 0
    assert "#J = 1548" in out and out.strip().splitlines()[-1].startswith("curve: y^2 = ")


def test_verify_curve(capsys):
    code, out, _ = run(capsys, "verify-curve", "--field", FIELD, "--p", "43", "--curve", CURVE)
    assert code == 0
    assert "#C(F_p) = 36, #C(F_p^2) = 1886, #J = 1548" in out
    assert "torsion filter (k, gamma) = (4, 12): True" in out
    assert out.strip().endswith("End(J) = O_K: True")


def test_oracle_verb(capsys):
    code, out, _ = run(capsys, "oracle", "--format", "json")
    assert code == 0 and json.loads(out)["agreement"]


def test_format_poly():
    assert cli.format_poly([32, 30, 1]) == "X^2 + 30*X + 32"
    assert cli.format_poly([0, -1, 0, 1], "x") == "x^3 + -1*x"
    assert cli.format_poly([0]) == "0"
