import pytest

from qdolbeault.exact import SparseMat, kernel
from qdolbeault.su2 import (
    NotAnSu2Representation,
    Sl2Action,
    clebsch_gordan,
    fundamental,
    irrep,
    tensor,
    verify_triple,
    weight_decompose,
    zero_action,
)


def eigen_oracle(a):
    """Multiplicities from dim ker(h - k) alone: m_k = e_k - e_(k+2)."""
    d = a.dim
    e = {}
    for k in range(-d, d + 1):
        e[k] = len(kernel(a.h - SparseMat.identity(d).scale(k)))
    return {k: e[k] - e.get(k + 2, 0) for k in range(d + 1) if e[k] - e.get(k + 2, 0)}


def test_fundamental_model():
    # hx = x, hy = -y, gx = y, fy = x
    a = fundamental()
    x, y = {0: 1}, {1: 1}
    assert a.h.apply(x) == {0: 1} and a.h.apply(y) == {1: -1}
    assert a.g.apply(x) == y and a.f.apply(y) == x
    assert verify_triple(a)
    assert weight_decompose(a).multiplicities == {1: 1}


def test_zero_rep():
    assert verify_triple(zero_action(1))
    assert weight_decompose(zero_action(3)).multiplicities == {0: 3}


def test_doubled_h_fails():
    a = fundamental()
    assert not verify_triple(Sl2Action(a.h.scale(2), a.f, a.g))


def test_shape_mismatch():
    a = fundamental()
    with pytest.raises(ValueError):
        verify_triple(Sl2Action(a.h, irrep(2).f, a.g))


def test_non_integer_spectrum():
    h = SparseMat.from_dense([["1/2", 0], [0, "-1/2"]])
    z = SparseMat(2, 2)
    with pytest.raises(NotAnSu2Representation, match="not an algebraic su\\(2\\)-representation"):
        weight_decompose(Sl2Action(h, z, z))


def test_cg_examples():
    assert clebsch_gordan(1, 1) == [2, 0]
    assert clebsch_gordan(0, 5) == [5]
    assert clebsch_gordan(2, 3) == [5, 3, 1]
    assert clebsch_gordan(3, 2) == [5, 3, 1]


def test_cg_against_tensor_products():
    for i in range(7):
        for j in range(7):
            wd = weight_decompose(tensor(irrep(i), irrep(j)))
            want = {}
            for k in clebsch_gordan(i, j):
                want[k] = want.get(k, 0) + 1
            assert wd.multiplicities == want, (i, j)


@pytest.mark.parametrize("i,j", [(1, 2), (2, 2), (3, 1)])
def test_decompose_matches_oracle(i, j):
    a = tensor(irrep(i), irrep(j))
    assert weight_decompose(a).multiplicities == eigen_oracle(a)


def test_chains_are_irreducible_strings():
    wd = weight_decompose(tensor(irrep(2), irrep(1)))
    for k, chains in wd.isotypic.items():
        for chain in chains:
            assert len(chain) == k + 1
