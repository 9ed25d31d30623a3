"""Catalogue of operator identities checked on the flat model.

Each entry knows whether it needs the weighted (twisted) operator set, what exactly
it compares, and whether it belongs to the default suite.  Entries whose name ends
in ``-opposite-sign`` flip the sign of a default entry.  They fail on this model and
stay in the catalogue so the failure can be reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from .calculus import (
    IdentityResult,
    ModelViolation,
    build_operators,
    comm,
    anticomm,
    identity_op,
    interior_op,
    theta_J,
    theta_plus,
    verify_bicomplex,
    verify_identity,
    wedge_op,
    zero_op,
)
from .exact import GaussRat


@dataclass
class Check:
    name: str
    statement: str
    twisted: bool
    default: bool
    run: Callable[..., List[IdentityResult]]


def _anti(n):
    return range(2 * n + 1)


def _all(n):
    return range(4 * n + 1)


def _ops(n, lam, flags):
    return build_operators(n, lam, break_convention=flags.get("break_convention", False))


def _d_squared(n, D, lam, flags):
    ops = _ops(n, None, flags)
    return [verify_identity(ops[a] @ ops[a], zero_op(), n, D, _all(n), "all", f"{a}^2 = 0")
            for a in ("d", "del", "dbar")]


def _anticommute(n, D, lam, flags):
    ops = _ops(n, None, flags)
    names = ["d", "d_I", "d_J", "d_K"]
    out = []
    for i, a in enumerate(names):
        for b in names[i:]:
            out.append(verify_identity(anticomm(ops[a], ops[b]), zero_op(), n, D, _all(n), "all",
                                       f"{{{a}, {b}}} = 0"))
    return out


def _dbarj_anticommute(n, D, lam, flags):
    ops = _ops(n, None, flags)
    return [
        verify_identity(anticomm(ops["dbar_J"], ops["dbar_J"]), zero_op(), n, D, _all(n), "all",
                        "{dbar_J, dbar_J} = 0"),
        verify_identity(anticomm(ops["dbar_J"], ops["dbar"]), zero_op(), n, D, _all(n), "all",
                        "{dbar_J, dbar} = 0"),
    ]


def _bicomplex(n, D, lam, flags):
    return [verify_bicomplex(n, D, flags.get("break_convention", False))]


def _sl2(n, D, lam, flags):
    ops = _ops(n, None, flags)
    L, Lam, H = ops["L"], ops["Lambda"], ops["H"]
    return [
        verify_identity(comm(H, L), L.scale(2), n, D, _anti(n), "anti", "[H, L] = 2L"),
        verify_identity(comm(H, Lam), Lam.scale(-2), n, D, _anti(n), "anti", "[H, Lambda] = -2 Lambda"),
        verify_identity(comm(L, Lam), H, n, D, _anti(n), "anti", "[L, Lambda] = H"),
    ]


def _h_eigen(sign):
    def run(n, D, lam, flags):
        ops = _ops(n, None, flags)
        out = []
        for p in range(2 * n + 1):
            val = sign * (p - n)
            out.append(verify_identity(ops["H"], identity_op().scale(val), n, D, [p], "anti",
                                       f"H = {val} on (0,{p})-forms"))
        return out

    return run


def _contraction(sign):
    def run(n, D, lam, flags):
        ops = _ops(n, None, flags)
        m = ops.model
        out = []
        for j in range(2 * n):
            th = m.dzbar(j)
            rhs = wedge_op(theta_J(m, th))
            out.append(verify_identity(comm(ops["L"], interior_op(th)), rhs.scale(sign), n, D,
                                       _all(n), "all",
                                       f"[L, Lambda_theta] = {'' if sign > 0 else '-'}L_(J conj theta), theta = dzbar{j + 1}"))
        return out

    return run


def _kodaira(sign):
    def run(n, D, lam, flags):
        ops = _ops(n, lam, flags)
        L = ops["L"]
        a = ops["dbar_J"].scale(sign)
        b = ops["dbar"].scale(-sign)
        s1 = "" if sign > 0 else "-"
        s2 = "-" if sign > 0 else ""
        return [
            verify_identity(comm(L, ops["dbar*"]), a, n, D, _anti(n), "anti",
                            f"[L, dbar*] = {s1}dbar_J (lambda={lam})"),
            verify_identity(comm(L, ops["dbar_J*"]), b, n, D, _anti(n), "anti",
                            f"[L, dbar_J*] = {s2}dbar (lambda={lam})"),
        ]

    return run


def _kodaira_nakano(n, D, lam, flags):
    ops = _ops(n, lam, flags)
    th, _ = theta_plus(lam, n)
    return [verify_identity(ops["Delta"] - ops["Delta_J"], comm(th, ops["Lambda"]), n, D, _anti(n),
                            "anti", f"Delta_dbar - Delta_dbar_J = [Theta+, Lambda] (lambda={lam})")]


def _theta(n, D, lam, flags):
    ops = _ops(n, lam, flags)
    try:
        th, lp = theta_plus(ops.bundle, n, D)
    except ModelViolation as exc:
        return [IdentityResult(f"Theta+ proportional (lambda={lam})", False, 0, {"error": str(exc)})]
    ok = lp.is_real() and lp.re > 0
    res = verify_identity(ops["Theta+"], ops["L"].scale(lp), n, D, _anti(n), "anti",
                          f"Theta+ = {lp} L with lambda' > 0 (lambda={lam})")
    if not ok:
        res.passed = False
        res.counterexample = {"lambda_prime": str(lp)}
    return [res]


def _theta_untwisted(n, D, lam, flags):
    ops = _ops(n, None, flags)
    return [verify_identity(ops["Theta+"], zero_op(2), n, D, _anti(n), "anti", "{dbar, dbar_J} = 0 untwisted")]


def _adjoint(n, D, lam, flags):
    ops = _ops(n, lam, flags)
    return [
        verify_identity(ops["dbar*"], ops["dbar*_closed"], n, D, _anti(n), "anti",
                        f"Gram adjoint of dbar = -sum nabla_j i(dzbar_j) (lambda={lam})"),
        verify_identity(ops["dbar_J*"], ops["dbar_J*_closed"], n, D, _anti(n), "anti",
                        f"Gram adjoint of dbar_J = -sum d/dzbar_j i(J^-1 dz_j) (lambda={lam})"),
    ]


CATALOGUE: Dict[str, Check] = {}


def _reg(name, statement, twisted, default, run):
    CATALOGUE[name] = Check(name, statement, twisted, default, run)


_reg("d-squared", "d^2 = del^2 = dbar^2 = 0 on all forms", False, True, _d_squared)
_reg("hypercomplex-anticommute", "d, d_I, d_J, d_K pairwise anticommute (d_L = L^-1 d L)",
     False, True, _anticommute)
_reg("dbarJ-anticommute", "{dbar_J, dbar_J} = 0 and {dbar_J, dbar} = 0, dbar_J = J^-1 del J",
     False, True, _dbarj_anticommute)
_reg("bicomplex", "projected d equals x dbar_J + y dbar under the symmetric-power model",
     False, True, _bicomplex)
_reg("lefschetz-sl2", "(L, Lambda, H) with L = Omega_bar ^ . is an sl(2)-triple", False, True, _sl2)
_reg("lefschetz-weight", "H = [L, Lambda] acts on (0,p)-forms as p - n", False, True, _h_eigen(1))
_reg("lefschetz-weight-opposite-sign", "H = [L, Lambda] acts on (0,p)-forms as n - p", False, False, _h_eigen(-1))
_reg("contraction-commutator", "[L, Lambda_theta] = -L_(J conj theta) for coordinate (0,1)-forms theta",
     False, True, _contraction(-1))
_reg("contraction-commutator-opposite-sign", "[L, Lambda_theta] = L_(J conj theta)",
     False, False, _contraction(1))
_reg("theta-untwisted", "{dbar, dbar_J} vanishes without twist", False, True, _theta_untwisted)
_reg("adjoint-closed-form", "Gram adjoints agree with their closed forms", True, True, _adjoint)
_reg("theta-plus", "{dbar, dbar_J} = lambda' L with lambda' > 0", True, True, _theta)
_reg("kodaira-twisted", "[L, dbar*] = -dbar_J and [L, dbar_J*] = dbar", True, True, _kodaira(-1))
_reg("kodaira-twisted-opposite-sign", "[L, dbar*] = dbar_J and [L, dbar_J*] = -dbar", True, False, _kodaira(1))
_reg("kodaira-nakano", "Delta_dbar - Delta_dbar_J = [Theta+, Lambda]", True, True, _kodaira_nakano)


def default_names() -> List[str]:
    return [k for k, c in CATALOGUE.items() if c.default]


def run_check(name: str, n: int, D: int, lams: Sequence, flags: Optional[dict] = None) -> List[IdentityResult]:
    c = CATALOGUE[name]
    flags = flags or {}
    if not c.twisted:
        return c.run(n, D, None, flags)
    out = []
    for lam in lams:
        out.extend(c.run(n, D, GaussRat.coerce(lam), flags))
    return out
