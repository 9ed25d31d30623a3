"""Acceptance criteria 1-7.  Each test prints one line: ``criterion N: PASS|FAIL  detail``.

Tolerance is zero everywhere (exact arithmetic); the only float comparison in the
suite lives in test_calculus.  Under pytest the lines are repeated in the terminal
summary (see conftest.py); ``python tests/test_acceptance.py`` prints them directly.
"""

import io
import json
import os
import random
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from math import comb

sys.path.insert(0, os.path.dirname(__file__))

from qdolbeault.calculus import WeightedBundle, laplacian_kernel, positivity_report  # noqa: E402
from qdolbeault.cli import main  # noqa: E402
from qdolbeault.forms import FlatModel  # noqa: E402
from qdolbeault.identities import default_names, run_check  # noqa: E402
from qdolbeault.koszul import (  # noqa: E402
    MAYBE,
    ZERO_CELL,
    BelowThreshold,
    DivisorConfig,
    n0_threshold,
    surjectivity_verdict,
    vanishing_grid,
)
from qdolbeault.lattice import (  # noqa: E402
    CASE_I,
    CASE_II,
    CASE_III,
    ConeSpec,
    H2Lattice,
    HypothesisViolation,
    classify,
    nef_perturbation,
    primitive_witness,
    q_eval,
    random_class,
    random_cone,
    random_isotropic,
    random_lattice,
)
from qdolbeault.qforms import (  # noqa: E402
    antiholomorphic_spans_agree,
    decompose_degree,
    ideal_check,
    purity_check,
    qd_iso,
    su2_on_forms,
    weight_split,
)
from qdolbeault.su2 import clebsch_gordan, irrep, tensor, weight_decompose  # noqa: E402
from test_su2 import eigen_oracle  # noqa: E402

LAMS = ["1/2", "1", "2"]
RANDOM_INSTANCES = 1000
IDENTITY_D = 3
LAPLACIAN_D = 2


LINES = []


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    return ok


# --- 1 ---------------------------------------------------------------------------


def criterion_1():
    problems = []
    for n in (1, 2):
        m = FlatModel(n, "complex")
        for i in range(4 * n + 1):
            wd = decompose_degree(m, i)
            if wd.multiplicities != eigen_oracle(su2_on_forms(m, i)):
                problems.append(f"n={n} i={i} oracle")
            if i <= 2 * n:
                if wd.multiplicities.get(i) != comb(2 * n, i):
                    problems.append(f"n={n} i={i} top multiplicity")
                if weight_split(m, i).dim_plus != (i + 1) * comb(2 * n, i):
                    problems.append(f"n={n} i={i} dim plus")
    for i in range(7):
        for j in range(7):
            mult = weight_decompose(tensor(irrep(i), irrep(j))).multiplicities
            want = {}
            for k in clebsch_gordan(i, j):
                want[k] = want.get(k, 0) + 1
            if mult != want:
                problems.append(f"CG ({i},{j})")
    return report(1, not problems, "Lambda^i for n in {1,2}, all i; CG for i,j <= 6" +
                  (f"; failures {problems}" if problems else ""))


def test_criterion_1_representations():
    assert criterion_1()


# --- 2 ---------------------------------------------------------------------------


def criterion_2():
    problems = []
    for n in (1, 2):
        m = FlatModel(n, "complex")
        if not ideal_check(m):
            problems.append(f"n={n} ideal")
        q = qd_iso(m)
        for p in range(2 * n + 1):
            if not purity_check(m, p):
                problems.append(f"n={n} p={p} purity")
            if not antiholomorphic_spans_agree(m, p):
                problems.append(f"n={n} p={p} spans")
            if not (q.is_bijective(p) and q.well_defined(p)):
                problems.append(f"n={n} p={p} bijective")
            for p2 in range(2 * n + 1 - p):
                if not q.multiplicative(p, p2):
                    problems.append(f"n={n} ({p},{p2}) multiplicative")
    return report(2, not problems, "ideal, purity, span equality, qd_iso on all of Lambda*_+ for n in {1,2}" +
                  (f"; failures {problems}" if problems else ""))


def test_criterion_2_qd_structure():
    assert criterion_2()


# --- 3 ---------------------------------------------------------------------------

# Criterion 3 states three identities with the signs of the -opposite-sign entries;
# the default entries carry the signs that hold on the model.
STATED_SIGNS = ["lefschetz-weight-opposite-sign", "contraction-commutator-opposite-sign", "kodaira-twisted-opposite-sign"]


def criterion_3():
    failing_defaults = []
    basis = 0
    for n in (1, 2):
        for name in default_names():
            res = run_check(name, n, IDENTITY_D, LAMS)
            basis += sum(r.checked for r in res)
            if not all(r.passed for r in res):
                failing_defaults.append(f"{name}@n={n}")
    stated_fail = []
    for name in STATED_SIGNS:
        for n in (1, 2):
            if not all(r.passed for r in run_check(name, n, IDENTITY_D, LAMS)):
                stated_fail.append(f"{name}@n={n}")
                break
    ok = not failing_defaults and not stated_fail
    detail = f"{len(default_names())} signed identities, {basis} basis checks, D={IDENTITY_D}"
    if failing_defaults:
        detail += f"; failing: {failing_defaults}"
    if stated_fail:
        detail += f"; stated signs fail: {stated_fail}"
    return report(3, ok, detail)


def test_criterion_3_operator_identities():
    assert criterion_3()


# --- 4 ---------------------------------------------------------------------------


def criterion_4():
    problems = []
    for n in (1, 2):
        b = WeightedBundle(n, 1)
        for D in range(LAPLACIAN_D + 1):
            for i in range(n + 1, 2 * n + 1):
                if laplacian_kernel(b, i, D)[0] != 0:
                    problems.append(f"kernel n={n} i={i} D={D}")
            if laplacian_kernel(b, 0, D)[0] != comb(2 * n + D, D):
                problems.append(f"holomorphic count n={n} D={D}")
        for i in range(2 * n + 1):
            r = positivity_report(b, i, LAPLACIAN_D)
            good = (r.shift == r.lam_prime * (i - n) and r.lam_prime.re > 0 and r.shift_identity_holds
                    and r.delta_j_psd and r.kernel_forced_empty == (i > n))
            if not good:
                problems.append(f"positivity n={n} i={i}")
    return report(4, not problems, f"lambda=1, D<={LAPLACIAN_D}, kernels, shift lambda'(i-n), holomorphic count" +
                  (f"; failures {problems}" if problems else ""))


def test_criterion_4_vanishing_mechanism():
    assert criterion_4()


# --- 5 ---------------------------------------------------------------------------


def criterion_5():
    rng = random.Random(20261019)
    problems = 0
    counted = {CASE_I: 0, CASE_II: 0, CASE_III: 0}
    done = 0
    while done < RANDOM_INSTANCES:
        lat, _, pos = random_lattice(rng)
        cone = random_cone(rng, lat, pos)
        c1 = random_class(rng, lat.rank)
        n = rng.randint(1, 4)
        try:
            r = classify(lat, cone, c1, n)
        except HypothesisViolation:
            continue
        done += 1
        counted[r.case] += 1
        mirror = classify(lat, cone, tuple(-x for x in c1), n)
        zero = set(r.zero_set())
        expect = {CASE_I: set(range(n + 1, 2 * n + 1)), CASE_II: set(range(n)),
                  CASE_III: set(range(2 * n + 1)) - {n}}[r.case]
        if zero != expect:
            problems += 1
        if mirror.case != {CASE_I: CASE_II, CASE_II: CASE_I, CASE_III: CASE_III}[r.case]:
            problems += 1
        w = primitive_witness(lat, cone, c1)
        if (w is not None) != (r.case == CASE_III) or (w is not None and q_eval(lat, c1, w) != 0):
            problems += 1
    nef_done = 0
    while nef_done < RANDOM_INSTANCES:
        lat, iso, pos = random_lattice(rng)
        eta = random_isotropic(rng, lat, iso)
        if q_eval(lat, eta, pos) < 0:
            eta = tuple(-x for x in eta)
        if q_eval(lat, eta, pos) == 0:
            continue
        nef_done += 1
        bound = q_eval(lat, eta, pos) / q_eval(lat, pos, pos)
        p = nef_perturbation(lat, eta, pos, bound * rng.choice([1, 2, 3]) / 4)
        if not all(p.checks.values()) or classify(lat, p.witness_cone, p.perturbed, 2).case != CASE_III:
            problems += 1
    return report(5, problems == 0, f"{done} classify instances {counted}, {nef_done} nef perturbations, "
                                    f"{problems} failures")


def test_criterion_5_lattice():
    assert criterion_5()


# --- 6 ---------------------------------------------------------------------------


def criterion_6():
    U = H2Lattice(((0, 1), (1, 0)))
    cone = ConeSpec(((2, 1), (1, 2)))
    problems = []
    fixtures = {1: [(2, 1)], 2: [(2, 1), (1, 1)]}
    for k, hs in fixtures.items():
        for n in (2, 3):
            grid = vanishing_grid(DivisorConfig(U, cone, (1, 0), hs, 9, n))
            for j in range(len(grid.columns) - 2):
                if grid.column(j) != [ZERO_CELL] * n + [MAYBE]:
                    problems.append(f"pattern k={k} n={n} column {grid.columns[j]}")
    if n0_threshold(U, (1, 0), [(2, 1)]) != 4:
        problems.append("N0")
    if surjectivity_verdict(DivisorConfig(U, cone, (1, 0), fixtures[1], 5, 2)).status != "Surjective":
        problems.append("k=1 n=2 verdict")
    if surjectivity_verdict(DivisorConfig(U, cone, (1, 0), fixtures[2], 9, 3)).status != "Surjective":
        problems.append("k=2 n=3 verdict")
    if surjectivity_verdict(DivisorConfig(U, cone, (1, 0), fixtures[2], 9, 2)).status != "NotApplicable":
        problems.append("k=n verdict")
    for N in (3, 4):
        try:
            surjectivity_verdict(DivisorConfig(U, cone, (1, 0), fixtures[1], N, 2))
            problems.append(f"N={N} accepted")
        except BelowThreshold:
            pass
    return report(6, not problems, "zero pattern k in {1,2}, n in {2,3}; N0=4; verdicts; threshold" +
                  (f"; failures {problems}" if problems else ""))


def test_criterion_6_koszul():
    assert criterion_6()


# --- 7 ---------------------------------------------------------------------------


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue()


def criterion_7():
    problems = []
    with tempfile.TemporaryDirectory() as d:
        def write(name, obj):
            path = os.path.join(d, name)
            with open(path, "w") as fh:
                json.dump(obj, fh)
            return path

        lat = {"rank": 2, "gram": [["0", "1/3"], ["1/3", "0"]], "generators": [["2/5", "7/3"], ["7/3", "2/5"]]}
        lp = write("lat.json", lat)
        code, out = _cli("classify", "--input", lp, "--class=-5/11,13/17", "--json")
        rep = json.loads(out)
        if code != 0 or rep["input"]["class"] != ["-5/11", "13/17"] or rep["input"]["gram"] != lat["gram"]:
            problems.append("classify round trip")
        if _cli("classify", "--input", lp, "--class=-5/11,13/17", "--json")[1] != out:
            problems.append("classify determinism")
        kcfg = {"rank": 2, "gram": [[0, 1], [1, 0]], "generators": [[2, 1], [1, 2]],
                "l": ["1", "0"], "h": [["2", "1"]], "N": 5, "n": 2}
        code, out = _cli("koszul", "--input", write("k.json", kcfg), "--json")
        if code != 0 or json.loads(out)["N0"] != "4":
            problems.append("koszul ok")
        if _cli("koszul", "--input", write("k3.json", {**kcfg, "N": 3}))[0] != 3:
            problems.append("exit 3")
        if _cli("koszul", "--input", write("kn.json", {**kcfg, "h": [["2", "1"], ["1", "1"]], "N": 9}))[0] != 1:
            problems.append("exit 1 koszul")
        if _cli("classify", "--input", lp, "--class", "0,0")[0] != 1:
            problems.append("exit 1 hypothesis")
        if _cli("verify", "--identity", "no-such-identity")[0] != 2:
            problems.append("exit 2 identity")
        if _cli("verify", "--input", write("bad.json", {"lambdas": ["-1"]}))[0] != 2:
            problems.append("exit 2 lambda")
        broken = write("broken.json", {"D": 1, "identities": ["bicomplex"], "break_convention": True})
        if _cli("verify", "--input", broken)[0] != 1:
            problems.append("exit 1 broken convention")
        code, out = _cli("verify", "--json", "--lambda", "3/7")
        rep = json.loads(out)
        if code != 0 or rep["input"]["lambdas"] != ["3/7"] or out != _cli("verify", "--json", "--lambda", "3/7")[1]:
            problems.append("verify round trip")
    return report(7, not problems, "rational round trip, deterministic JSON, exit codes 0/1/2/3" +
                  (f"; failures {problems}" if problems else ""))


def test_criterion_7_cli():
    assert criterion_7()


if __name__ == "__main__":
    results = [f() for f in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                             criterion_7)]
    sys.exit(0 if all(results) else 1)
