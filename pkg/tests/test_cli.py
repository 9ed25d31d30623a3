import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qdolbeault.cli import main

LAT = {"rank": 2, "gram": [[0, 1], [1, 0]], "generators": [[2, 1], [1, 2]]}


@pytest.fixture
def write(tmp_path):
    def _w(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return _w


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_verify_default_passes(capsys):
    code, rep = run_json(capsys, "verify")
    assert code == 0 and rep["status"] == "pass"
    assert rep["input"]["n"] == 1 and rep["input"]["D"] == 2
    assert rep["schema_version"] == 1 and "artifact_version" in rep
    assert "timings" not in json.dumps(rep)


def test_verify_text_has_timings(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "d-squared")
    assert code == 0 and "PASS" in out and "timings:" in out


def test_unknown_identity(capsys, write):
    assert run(capsys, "verify", "--identity", "nope")[0] == 2
    cfg = write("c.json", {"identities": ["nope"]})
    assert run(capsys, "verify", "--input", cfg)[0] == 2


def test_broken_convention(capsys, write):
    cfg = write("c.json", {"n": 1, "D": 1, "identities": ["bicomplex"], "break_convention": True})
    code, rep = run_json(capsys, "verify", "--input", cfg)
    assert code == 1 and rep["status"] == "fail"
    assert rep["checks"][0]["items"][0]["counterexample"]
    assert rep["reproducer"].startswith("python -m qdolbeault verify")


def test_verify_rejects_bad_values(capsys, write):
    assert run(capsys, "verify", "--lambda", "0")[0] == 2
    assert run(capsys, "verify", "--lambda", "abc")[0] == 2
    assert run(capsys, "verify", "--n", "3")[0] == 2
    assert run(capsys, "verify", "--input", write("f.json", '{"lambdas": [0.5]}'))[0] == 2
    assert run(capsys, "verify", "--input", write("m.json", "{oops"))[0] == 2


def test_classify_cases(capsys, write):
    lat = write("lat.json", LAT)
    code, out, _ = run(capsys, "classify", "--input", lat, "--class", "1,-1")
    assert code == 0 and "case (iii): H^i = 0 for all i != n" in out
    code, out, _ = run(capsys, "classify", "--input", lat, "--class", "1,0")
    assert code == 0 and out.startswith("case (i)")


def test_classify_hypothesis(capsys, write):
    lat = write("lat.json", LAT)
    code, out, _ = run(capsys, "classify", "--input", lat, "--class", "0,0")
    assert code == 1 and "c1(L) != 0" in out


def test_invalid_cone(capsys, write):
    lat = write("lat.json", {"rank": 2, "gram": [[0, 1], [1, 0]], "generators": [[1, 0]]})
    code, _, err = run(capsys, "classify", "--input", lat, "--class", "1,0")
    assert code == 2 and "invalid cone" in err


def test_rationals_round_trip(capsys, write):
    lat = write("lat.json", {**LAT, "gram": [["0", "1/3"], ["1/3", "0"]], "generators": [["2/5", "7/3"]]})
    code, rep = run_json(capsys, "classify", "--input", lat, "--class=-1/3,22/7")
    assert code == 0
    assert rep["input"]["class"] == ["-1/3", "22/7"]
    assert rep["input"]["gram"] == [["0", "1/3"], ["1/3", "0"]]
    # q(c, g) = (c0 g1 + c1 g0) / 3
    assert rep["result"]["pairings"] == [str(Fraction(-1, 3) * Fraction(7, 3) / 3 + Fraction(22, 7) * Fraction(2, 5) / 3)]


def test_reports_deterministic(capsys, write):
    lat = write("lat.json", LAT)
    a = run(capsys, "classify", "--input", lat, "--class", "1,-1", "--json")[1]
    b = run(capsys, "classify", "--input", lat, "--class", "1,-1", "--json")[1]
    assert a == b


def test_random_batch(capsys):
    code, rep = run_json(capsys, "classify", "--random", "50", "--seed", "7")
    assert code == 0 and sum(rep["tally"].values()) > 0 and rep["failures"] == []


def kfile(write, **kw):
    cfg = {**LAT, "l": [1, 0], "h": [[2, 1]], "N": 5, "n": 2}
    cfg.update(kw)
    return write("k.json", cfg)


def test_koszul_exit_codes(capsys, write):
    code, rep = run_json(capsys, "koszul", "--input", kfile(write))
    assert code == 0 and rep["verdict"] == "Surjective" and rep["N0"] == "4"
    assert run(capsys, "koszul", "--input", kfile(write, N=3))[0] == 3
    assert run(capsys, "koszul", "--input", kfile(write, N=4))[0] == 3
    assert run(capsys, "koszul", "--input", kfile(write, h=[[2, 1], [1, 1]], N=9))[0] == 1
    assert run(capsys, "koszul", "--input", kfile(write, l=[1, 1]))[0] == 2


def test_su2_decompose(capsys, write):
    code, rep = run_json(capsys, "su2-decompose", "--n", "1", "--degree", "2")
    assert code == 0 and rep["multiplicities"] == {"2": 1, "0": 3}
    m = write("m.json", {"h": [[1, 0], [0, -1]], "f": [[0, 1], [0, 0]], "g": [[0, 0], [1, 0]]})
    code, rep = run_json(capsys, "su2-decompose", "--input", m)
    assert code == 0 and rep["multiplicities"] == {"1": 1}
    bad = write("b.json", {"h": [[2, 0], [0, -2]], "f": [[0, 1], [0, 0]], "g": [[0, 0], [1, 0]]})
    assert run(capsys, "su2-decompose", "--input", bad)[0] == 1


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "qdolbeault", "classify", "--random", "5"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "random batch" in p.stdout
    p = subprocess.run([sys.executable, "-m", "qdolbeault", "frobnicate"], capture_output=True, text=True)
    assert p.returncode == 2
