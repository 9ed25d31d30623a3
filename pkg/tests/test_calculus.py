import math
from fractions import Fraction
from math import comb

import pytest

from qdolbeault.calculus import (
    PolyForm,
    WeightedBundle,
    anticomm,
    build_operators,
    comm,
    laplacian_kernel,
    moment,
    positivity_report,
    theta_plus,
    verify_identity,
    weighted_inner_product,
    zero_op,
)
from qdolbeault.exact import GaussRat

ANTI1 = range(3)


def radial_moment(k, lam, steps=20000):
    """Float quadrature of E[|z|^(2k)] for the density (lam/pi) exp(-lam |z|^2)."""
    rmax = math.sqrt(60 / lam)
    h = rmax / steps
    total = 0.0
    for i in range(steps):
        r = (i + 0.5) * h
        total += r ** (2 * k) * math.exp(-lam * r * r) * 2 * r * h
    return lam * total


@pytest.mark.parametrize("k,lam", [(0, 1), (1, 1), (2, Fraction(1, 2)), (3, 2)])
def test_moments_match_quadrature(k, lam):
    e = (k, 0, 0, 0)
    exact = moment(1, GaussRat(lam), e, e)
    assert abs(float(exact.re) - radial_moment(k, float(lam))) < 1e-6


def test_moment_orthogonality():
    lam = GaussRat(1)
    assert moment(1, lam, (1, 0, 0, 0), (0, 0, 0, 0)).is_zero()
    assert moment(1, lam, (0, 0, 1, 0), (1, 0, 0, 0)).is_zero()


def test_inner_product_sesquilinear():
    b = WeightedBundle(1, 1)
    i = GaussRat(0, 1)
    a = PolyForm.monomial(1, (2,), (1, 0, 0, 0), i)
    assert weighted_inner_product(b, a, a) == 1
    c = PolyForm.monomial(1, (2,), (1, 0, 0, 0))
    assert weighted_inner_product(b, a, c) == -i


def test_bad_lambda():
    for lam in (0, -1):
        with pytest.raises(ValueError):
            WeightedBundle(1, lam)


def test_untwisted_theta_vanishes():
    ops = build_operators(1)
    assert verify_identity(anticomm(ops["dbar"], ops["dbar_J"]), zero_op(2), 1, 3, ANTI1).passed


def test_kodaira_signed_and_wrong():
    ops = build_operators(1, 1)
    good = verify_identity(comm(ops["L"], ops["dbar*"]), ops["dbar_J"].scale(-1), 1, 2, ANTI1)
    assert good.passed and good.checked > 0
    for rhs in (ops["dbar_J"], ops["dbar"]):
        bad = verify_identity(comm(ops["L"], ops["dbar*"]), rhs, 1, 2, ANTI1)
        assert not bad.passed
        assert bad.counterexample["input"]


def test_theta_plus_scaling():
    _, l1 = theta_plus(WeightedBundle(1, 1), 1, 2)
    _, l2 = theta_plus(WeightedBundle(1, 2), 1, 2)
    _, lh = theta_plus(WeightedBundle(1, Fraction(1, 2)), 1, 2)
    assert l1.is_real() and l1.re > 0
    assert l2 == l1 * 2 and lh == l1 / 2


@pytest.mark.parametrize("n,i,D,want", [(1, 2, 2, 0), (1, 0, 2, 6), (2, 3, 1, 0)])
def test_laplacian_kernel(n, i, D, want):
    dim, basis = laplacian_kernel(WeightedBundle(n, 1), i, D)
    assert dim == want == len(basis)


def test_holomorphic_kernel_count():
    # kernel on functions: polynomials in z only, degree <= D in 2n variables
    for D in range(3):
        assert laplacian_kernel(WeightedBundle(1, 1), 0, D)[0] == comb(2 + D, D)


@pytest.mark.parametrize("i,sign", [(0, -1), (1, 0), (2, 1)])
def test_positivity_shift(i, sign):
    r = positivity_report(WeightedBundle(1, 1), i, 2)
    assert r.shift == r.lam_prime * sign
    assert r.shift_identity_holds and r.delta_j_psd
    assert r.kernel_forced_empty == (sign > 0)
