"""Command-line entry point: ``qdolbeault {verify,classify,koszul,su2-decompose}``.

Exit codes: 0 success, 1 check failure or violated hypothesis, 2 invalid input,
3 N below the Koszul threshold.
"""

from __future__ import annotations

import argparse
import json
import random
import shlex
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_BELOW = 0, 1, 2, 3


class InputError(Exception):
    pass


def _reject_float(text):
    raise InputError(f"binary float {text!r} not accepted; write rationals as strings like \"3/4\"")


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh, parse_float=_reject_float)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def rat(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse rational {x!r}") from None
    raise InputError(f"expected a rational, got {x!r}")


def rat_vec(v) -> List[Fraction]:
    if isinstance(v, str):
        v = [p for p in v.replace(" ", "").split(",") if p]
    if not isinstance(v, list):
        raise InputError(f"expected a list of rationals, got {v!r}")
    return [rat(x) for x in v]


def _s(x) -> str:
    return str(x)


def reproducer(argv: List[str]) -> str:
    return "python -m qdolbeault " + shlex.join(argv)


def emit(report: Dict[str, Any], as_json: bool, text: str, timings: Dict[str, float]) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")
        if timings:
            sys.stdout.write("timings: " + ", ".join(f"{k}={v:.2f}s" for k, v in timings.items()) + "\n")


def base_report(command: str, echo: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "artifact_version": __version__, "command": command,
            "input": echo}


def fail(args, code: int, message: str) -> int:
    report = base_report(args.command, {})
    report.update({"status": "error", "exit_code": code, "error": message})
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    sys.stderr.write(f"error: {message}\n")
    return code


# --- verify -------------------------------------------------------------------


def _verify_config(args) -> Dict[str, Any]:
    from .identities import CATALOGUE, default_names

    cfg: Dict[str, Any] = {"n": 1, "D": 2, "lambdas": ["1/2", "1", "2"], "identities": None,
                           "break_convention": False}
    if args.input:
        raw = load_json(args.input)
        if not isinstance(raw, dict):
            raise InputError("verify config must be a JSON object")
        unknown = set(raw) - {"n", "D", "degree", "lambdas", "identities", "break_convention"}
        if unknown:
            raise InputError(f"unknown config keys {sorted(unknown)}")
        for k in ("n", "D", "lambdas", "identities", "break_convention"):
            if k in raw:
                cfg[k] = raw[k]
        if "degree" in raw:
            cfg["D"] = raw["degree"]
    if args.n is not None:
        cfg["n"] = args.n
    if args.degree is not None:
        cfg["D"] = args.degree
    if args.lam:
        cfg["lambdas"] = args.lam
    if args.identity:
        cfg["identities"] = args.identity
    if cfg["n"] not in (1, 2) or isinstance(cfg["n"], bool):
        raise InputError("n must be 1 or 2")
    if not isinstance(cfg["D"], int) or isinstance(cfg["D"], bool) or not 0 <= cfg["D"] <= 4:
        raise InputError("degree bound D must be an integer in 0..4")
    if not isinstance(cfg["lambdas"], list) or not cfg["lambdas"]:
        raise InputError("lambdas must be a non-empty list of rational strings")
    lams = [rat(x) for x in cfg["lambdas"]]
    if any(x <= 0 for x in lams):
        raise InputError("every lambda must be positive")
    cfg["lambdas"] = [str(x) for x in lams]
    names = cfg["identities"] or default_names()
    if not isinstance(names, list):
        raise InputError("identities must be a list of names")
    bad = [x for x in names if x not in CATALOGUE]
    if bad:
        raise InputError(f"unknown identity name(s) {bad}; known: {sorted(CATALOGUE)}")
    cfg["identities"] = names
    if not isinstance(cfg["break_convention"], bool):
        raise InputError("break_convention must be true or false")
    return cfg


def cmd_verify(args, argv) -> int:
    from .identities import CATALOGUE, run_check

    try:
        cfg = _verify_config(args)
    except InputError as exc:
        return fail(args, EXIT_INVALID, str(exc))
    flags = {"break_convention": cfg["break_convention"]}
    checks = []
    timings = {}
    all_ok = True
    for name in cfg["identities"]:
        t0 = time.perf_counter()
        results = run_check(name, cfg["n"], cfg["D"], cfg["lambdas"], flags)
        timings[name] = time.perf_counter() - t0
        ok = all(r.passed for r in results)
        all_ok &= ok
        entry = {"label": name, "statement": CATALOGUE[name].statement,
                 "status": "pass" if ok else "fail",
                 "checked": sum(r.checked for r in results),
                 "items": [r.as_dict() for r in results]}
        checks.append(entry)
    report = base_report("verify", cfg)
    report["status"] = "pass" if all_ok else "fail"
    report["checks"] = checks
    if not all_ok:
        report["reproducer"] = reproducer(argv)
    lines = [f"verify n={cfg['n']} D={cfg['D']} lambdas={','.join(cfg['lambdas'])}"]
    for c in checks:
        lines.append(f"  {c['status'].upper():4s}  {c['label']:36s} {c['statement']}  [{c['checked']} basis forms]")
        if c["status"] == "fail":
            bad = next(i for i in c["items"] if i["status"] == "fail")
            lines.append(f"        first failure: {bad['name']}: {json.dumps(bad['counterexample'])}")
    if not all_ok:
        lines.append(f"reproduce with: {report['reproducer']}")
    emit(report, args.json, "\n".join(lines), {} if args.json else timings)
    return EXIT_OK if all_ok else EXIT_FAIL


# --- classify -----------------------------------------------------------------


def _load_lattice(raw: Dict[str, Any]):
    from .lattice import ConeSpec, H2Lattice, InvalidInput

    if not isinstance(raw, dict):
        raise InputError("lattice file must be a JSON object")
    try:
        gram = [rat_vec(row) for row in raw["gram"]]
        gens = [rat_vec(g) for g in raw["generators"]]
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from None
    except TypeError:
        raise InputError("gram and generators must be lists") from None
    if "rank" in raw and raw["rank"] != len(gram):
        raise InputError("rank does not match the Gram matrix")
    try:
        lat = H2Lattice(tuple(tuple(r) for r in gram))
        cone = ConeSpec(tuple(tuple(g) for g in gens))
        cone.validate(lat)
    except InvalidInput as exc:
        raise InputError(str(exc)) from None
    return lat, cone


def cmd_classify(args, argv) -> int:
    from .lattice import HypothesisViolation, InvalidInput, classify, primitive_witness

    if args.random is not None:
        return _classify_batch(args)
    try:
        if not args.input:
            raise InputError("classify needs --input LATTICE.json")
        raw = load_json(args.input)
        lat, cone = _load_lattice(raw)
        cls = args.cls if args.cls is not None else raw.get("class")
        if cls is None:
            raise InputError("no class given (use --class or a 'class' key)")
        c1 = rat_vec(cls)
        n = args.n if args.n is not None else raw.get("n", 1)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError("n must be a positive integer")
        if len(c1) != lat.rank:
            raise InputError(f"class has length {len(c1)}, lattice rank is {lat.rank}")
    except InputError as exc:
        return fail(args, EXIT_INVALID, str(exc))
    echo = {"gram": [[_s(x) for x in r] for r in lat.gram],
            "generators": [[_s(x) for x in g] for g in cone.generators],
            "class": [_s(x) for x in c1], "n": n}
    try:
        rep = classify(lat, cone, c1, n)
    except HypothesisViolation as exc:
        msg = "hypothesis c1(L) != 0 violated" if not any(c1) else str(exc)
        report = base_report("classify", echo)
        report.update({"status": "hypothesis-violated", "error": msg, "reproducer": reproducer(argv)})
        emit(report, args.json, f"error: {msg}\nreproduce with: {report['reproducer']}", {})
        return EXIT_FAIL
    except InvalidInput as exc:
        return fail(args, EXIT_INVALID, str(exc))
    w = primitive_witness(lat, cone, c1)
    report = base_report("classify", echo)
    report["status"] = "ok"
    report["result"] = rep.as_dict()
    report["primitive_witness"] = None if w is None else [_s(x) for x in w]
    text = [rep.describe(),
            f"pairings with generators: {', '.join(_s(x) for x in rep.pairings)}",
            f"zero set (0 <= i <= 2n): {rep.zero_set()}"]
    if w is not None:
        text.append(f"primitive witness in the cone: ({', '.join(_s(x) for x in w)})")
    emit(report, args.json, "\n".join(text), {})
    return EXIT_OK


def _classify_batch(args) -> int:
    from .lattice import (CASE_I, CASE_II, CASE_III, HypothesisViolation, classify, primitive_witness,
                          random_class, random_cone, random_lattice)

    count = args.random
    if count < 0:
        return fail(args, EXIT_INVALID, "--random needs a non-negative count")
    seed = args.seed if args.seed is not None else 0
    rng = random.Random(seed)
    n = args.n or 1
    tally = {CASE_I: 0, CASE_II: 0, CASE_III: 0}
    problems = []
    for k in range(count):
        lat, _, pos = random_lattice(rng)
        cone = random_cone(rng, lat, pos)
        c1 = random_class(rng, lat.rank)
        try:
            rep = classify(lat, cone, c1, n)
        except HypothesisViolation:
            continue
        mirror = classify(lat, cone, tuple(-x for x in c1), n).case
        tally[rep.case] += 1
        expect = {CASE_I: CASE_II, CASE_II: CASE_I, CASE_III: CASE_III}[rep.case]
        has_w = primitive_witness(lat, cone, c1) is not None
        if mirror != expect or has_w != (rep.case == CASE_III):
            problems.append(k)
    report = base_report("classify", {"random": count, "seed": seed, "n": n})
    report["status"] = "pass" if not problems else "fail"
    report["tally"] = tally
    report["failures"] = problems
    text = f"random batch seed={seed}: {tally}; mirror/witness failures: {len(problems)}"
    emit(report, args.json, text, {})
    return EXIT_OK if not problems else EXIT_FAIL


# --- koszul -------------------------------------------------------------------


def cmd_koszul(args, argv) -> int:
    from .koszul import BelowThreshold, DivisorConfig, surjectivity_verdict
    from .lattice import InvalidInput

    try:
        if not args.input:
            raise InputError("koszul needs --input CONFIG.json")
        raw = load_json(args.input)
        lat, cone = _load_lattice(raw)
        l = rat_vec(raw["l"])
        hs = [rat_vec(h) for h in raw.get("h", [])]
        N = raw["N"]
        n = args.n if args.n is not None else raw["n"]
        if not isinstance(N, int) or isinstance(N, bool):
            raise InputError("N must be an integer")
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError("n must be an integer")
        cfg = DivisorConfig(lat, cone, tuple(l), tuple(tuple(h) for h in hs), N, n)
        cfg.validate()
    except KeyError as exc:
        return fail(args, EXIT_INVALID, f"missing key {exc}")
    except (InputError, InvalidInput) as exc:
        return fail(args, EXIT_INVALID, str(exc))
    echo = {"l": [_s(x) for x in l], "h": [[_s(x) for x in h] for h in hs], "N": N, "n": n}
    try:
        verdict = surjectivity_verdict(cfg)
    except BelowThreshold as exc:
        report = base_report("koszul", echo)
        report.update({"status": "below-threshold", "error": str(exc), "reproducer": reproducer(argv)})
        emit(report, args.json, f"error: {exc}\nreproduce with: {report['reproducer']}", {})
        return EXIT_BELOW
    report = base_report("koszul", echo)
    report["status"] = verdict.status
    report.update(verdict.as_dict())
    text = []
    if verdict.grid is not None:
        text.append(verdict.grid.render())
    text.append(f"N0 = {verdict.n0}" if verdict.n0 is not None else "N0 not computed")
    text.append(f"verdict: {verdict.status} ({verdict.explanation})")
    for t in verdict.trace:
        text.append(f"  {t['term']}: {t['case']} (pairings {', '.join(t['pairings'])})")
    if verdict.status != "Surjective":
        report["reproducer"] = reproducer(argv)
        text.append(f"reproduce with: {report['reproducer']}")
    emit(report, args.json, "\n".join(text), {})
    return EXIT_OK if verdict.status == "Surjective" else EXIT_FAIL


# --- su2-decompose ------------------------------------------------------------


def cmd_su2(args, argv) -> int:
    from .exact import GaussRat, SparseMat
    from .forms import FlatModel
    from .qforms import su2_on_forms
    from .su2 import NotAnSu2Representation, Sl2Action, verify_triple, weight_decompose

    try:
        if args.input:
            raw = load_json(args.input)
            mats = {}
            for k in ("h", "f", "g"):
                rows = raw[k]
                mats[k] = SparseMat.from_dense([[GaussRat.parse(x) if isinstance(x, str) else GaussRat.coerce(rat(x))
                                                 for x in row] for row in rows])
            action = Sl2Action(mats["h"], mats["f"], mats["g"])
            echo = {"matrices": args.input}
            action.check_shapes()
        else:
            n = args.n if args.n is not None else 1
            i = args.degree if args.degree is not None else 1
            if n not in (1, 2) or not 0 <= i <= 4 * n:
                raise InputError("need n in {1,2} and 0 <= degree <= 4n")
            action = su2_on_forms(FlatModel(n), i)
            echo = {"n": n, "degree": i}
    except (KeyError, TypeError) as exc:
        return fail(args, EXIT_INVALID, f"bad matrix input: {exc}")
    except (InputError, ValueError) as exc:
        return fail(args, EXIT_INVALID, str(exc))
    if not verify_triple(action):
        report = base_report("su2-decompose", echo)
        report.update({"status": "fail", "error": "bracket relations fail", "reproducer": reproducer(argv)})
        emit(report, args.json, "bracket relations [h,f]=2f, [h,g]=-2g, [f,g]=h fail", {})
        return EXIT_FAIL
    try:
        wd = weight_decompose(action)
    except NotAnSu2Representation as exc:
        return fail(args, EXIT_FAIL, str(exc))
    mult = {str(k): v for k, v in sorted(wd.multiplicities.items(), reverse=True)}
    report = base_report("su2-decompose", echo)
    report.update({"status": "ok", "dimension": wd.dim, "multiplicities": mult})
    text = f"dimension {wd.dim}: " + ", ".join(f"V_{k} x {v}" for k, v in mult.items())
    emit(report, args.json, text, {})
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--json", action="store_true", help="emit a structured report")
    common.add_argument("--degree", type=int, help="coefficient degree bound (verify) or form degree (su2-decompose)")
    common.add_argument("--n", type=int, help="quaternionic dimension")
    common.add_argument("--lambda", dest="lam", action="append", help="curvature scale (repeatable)")
    common.add_argument("--seed", type=int, help="seed for randomized batches")

    p = argparse.ArgumentParser(prog="qdolbeault", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the operator-identity suite")
    v.add_argument("--identity", action="append", help="restrict to this identity (repeatable)")
    c = sub.add_parser("classify", parents=[common], help="vanishing trichotomy of a class")
    c.add_argument("--class", dest="cls", help="class vector, comma separated rationals")
    c.add_argument("--random", type=int, help="run a random property batch of this size instead")
    sub.add_parser("koszul", parents=[common], help="Koszul grid and surjectivity verdict")
    sub.add_parser("su2-decompose", parents=[common], help="weight decomposition")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    handler = {"verify": cmd_verify, "classify": cmd_classify, "koszul": cmd_koszul,
               "su2-decompose": cmd_su2}[args.command]
    try:
        return handler(args, argv)
    except InputError as exc:
        return fail(args, EXIT_INVALID, str(exc))


if __name__ == "__main__":
    sys.exit(main())
