import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from qdolbeault.lattice import (
    CASE_I,
    CASE_II,
    CASE_III,
    ConeSpec,
    H2Lattice,
    HypothesisViolation,
    InvalidInput,
    PreconditionError,
    beauville_coefficient,
    beauville_form,
    classify,
    fujiki_check,
    nef_perturbation,
    primitive_witness,
    q_eval,
    random_class,
    random_cone,
    random_isotropic,
    random_lattice,
    signature,
)

U = H2Lattice(((0, 1), (1, 0)))
CONE = ConeSpec(((2, 1), (1, 2)))


def test_signature():
    assert signature(U) == (1, 1)
    assert signature(H2Lattice(((2, 0, 0), (0, -2, 0), (0, 0, -2)))) == (1, 2)


def test_degenerate_and_asymmetric():
    with pytest.raises(InvalidInput):
        H2Lattice(((1, 1), (1, 1)))
    with pytest.raises(InvalidInput):
        H2Lattice(((1, 2), (0, 1)))


def test_floats_rejected():
    with pytest.raises((InvalidInput, TypeError)):
        q_eval(U, (0.5, 1), (1, 0))


def test_length_mismatch():
    with pytest.raises(InvalidInput):
        q_eval(U, (1, 0, 0), (1, 0))


def test_fujiki():
    cls = [(1, 0), (1, 1), (2, -3)]
    assert all(r["ok"] for r in fujiki_check(U, 1, lambda v: q_eval(U, v, v), cls))
    assert all(r["ok"] for r in fujiki_check(U, 2, lambda v: q_eval(U, v, v) ** 2, cls))
    bad = fujiki_check(U, 2, lambda v: q_eval(U, v, v) ** 2 + (v == (F(1), F(1))), cls)
    assert [r["ok"] for r in bad] == [True, False, True]


def test_beauville():
    assert beauville_coefficient(1) == 0
    assert beauville_coefficient(2) == F(2, 9)
    assert beauville_form(1, 5, 7, 11, 0) == 5
    assert beauville_form(2, 1, 3, 3, 2) == 1 - F(2, 9) * 9 / 2
    with pytest.raises(PreconditionError):
        beauville_form(2, 1, 1, 1, 0)


def test_classify_examples():
    r = classify(U, CONE, (1, 0), 1)
    assert r.case == CASE_I and r.zero_set() == [2] and r.pairings == [1, 2]
    assert classify(U, CONE, (-1, 0), 1).zero_set() == [0]
    r = classify(U, CONE, (1, -1), 1)
    assert r.case == CASE_III and r.zero_set() == [0, 2]
    assert r.describe() == "case (iii): H^i = 0 for all i != n"


def test_classify_errors():
    with pytest.raises(HypothesisViolation, match="hypothesis violated"):
        classify(U, CONE, (0, 0), 1)
    with pytest.raises(HypothesisViolation, match="cone not full-dimensional"):
        classify(U, ConeSpec(((1, 0),)), (1, 0), 1)


def test_invalid_cone():
    with pytest.raises(InvalidInput, match="invalid cone"):
        ConeSpec(((1, 0),)).validate(U)


def test_primitive_witness():
    w = primitive_witness(U, CONE, (1, -1))
    assert w == (F(3, 2), F(3, 2)) and q_eval(U, (1, -1), w) == 0
    assert primitive_witness(U, CONE, (1, 0)) is None
    assert primitive_witness(U, CONE, (2, 1)) is None


def test_nef_perturbation_example():
    # q(eta, omega) = 2, q(omega, omega) = 2
    eta, omega = (2, 0), (1, 1)
    p = nef_perturbation(U, eta, omega, F(1, 2))
    assert p.lam == 1 and p.delta == F(1, 8)
    shifted = p.witness_cone.generators[1]
    assert q_eval(U, shifted, p.perturbed) == F(-7, 8)
    with pytest.raises(PreconditionError):
        nef_perturbation(U, eta, omega, 1)
    with pytest.raises(PreconditionError):
        nef_perturbation(U, (1, 1), omega, F(1, 2))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_mirror_and_witness(seed):
    rng = random.Random(seed)
    lat, _, pos = random_lattice(rng)
    cone = random_cone(rng, lat, pos)
    c1 = random_class(rng, lat.rank)
    try:
        r = classify(lat, cone, c1, 2)
    except HypothesisViolation:
        return
    mirror = classify(lat, cone, tuple(-x for x in c1), 2)
    assert mirror.case == {CASE_I: CASE_II, CASE_II: CASE_I, CASE_III: CASE_III}[r.case]
    assert set(r.zero_set()) | set(mirror.zero_set()) >= set(range(5)) - {2}
    w = primitive_witness(lat, cone, c1)
    assert (w is not None) == (r.case == CASE_III)
    if w is not None:
        assert q_eval(lat, c1, w) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_nef_perturbation_reclassifies(seed):
    rng = random.Random(seed)
    lat, iso, pos = random_lattice(rng)
    eta = random_isotropic(rng, lat, iso)
    if q_eval(lat, eta, pos) < 0:
        eta = tuple(-x for x in eta)
    if q_eval(lat, eta, pos) == 0:
        return
    bound = q_eval(lat, eta, pos) / q_eval(lat, pos, pos)
    p = nef_perturbation(lat, eta, pos, bound / 2)
    assert all(p.checks.values())
    assert classify(lat, p.witness_cone, p.perturbed, 2).case == CASE_III
