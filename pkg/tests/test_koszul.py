from fractions import Fraction as F

import pytest

from qdolbeault.koszul import (
    MAYBE,
    ZERO_CELL,
    BelowThreshold,
    DivisorConfig,
    koszul_terms,
    n0_threshold,
    surjectivity_verdict,
    vanishing_grid,
)
from qdolbeault.lattice import ConeSpec, H2Lattice, InvalidInput

U = H2Lattice(((0, 1), (1, 0)))
CONE = ConeSpec(((2, 1), (1, 2)))


def cfg(hs, N, n, l=(1, 0)):
    return DivisorConfig(U, CONE, l, hs, N, n)


def test_terms():
    assert koszul_terms(cfg([], 3, 2)) == [((), (3, 0))]
    assert [t for _, t in koszul_terms(cfg([(2, 1)], 5, 2))] == [(3, -1), (5, 0)]
    terms = koszul_terms(cfg([(2, 1), (1, 1)], 9, 3))
    assert len(terms) == 4 and terms[0] == ((0, 1), (6, -2))


def test_threshold():
    assert n0_threshold(U, (1, 0), [(2, 1)]) == 4
    lat = H2Lattice(((2, 0), (0, -2)))
    # q(h,h) = 2, q(l,h) = 2
    assert n0_threshold(lat, (1, 1), [(1, 0)]) == 1
    assert n0_threshold(U, (1, 0), [(2, 1), (1, 1)]) == max(F(4), F(2), F(12, 2))


def test_threshold_invariant():
    with pytest.raises(InvalidInput):
        n0_threshold(U, (1, 0), [(1, 0)])


@pytest.mark.parametrize("hs,n,N", [([(2, 1)], 2, 5), ([(2, 1)], 3, 5),
                                    ([(2, 1), (1, 1)], 2, 9), ([(2, 1), (1, 1)], 3, 9)])
def test_zero_pattern(hs, n, N):
    grid = vanishing_grid(cfg(hs, N, n))
    subtracted = range(len(grid.columns) - 2)
    for j in subtracted:
        assert grid.column(j) == [ZERO_CELL] * n + [MAYBE]
    assert grid.column(len(grid.columns) - 2) == [MAYBE] * (n + 1)


def test_empty_grid():
    grid = vanishing_grid(cfg([], 3, 2))
    assert grid.columns == ["L^N", "L^N|_X"]


def test_below_threshold():
    with pytest.raises(BelowThreshold, match="below threshold"):
        vanishing_grid(cfg([(2, 1)], 4, 2))
    with pytest.raises(BelowThreshold):
        surjectivity_verdict(cfg([(2, 1)], 3, 2))


def test_verdicts():
    assert surjectivity_verdict(cfg([(2, 1)], 5, 2)).status == "Surjective"
    assert surjectivity_verdict(cfg([(2, 1), (1, 1)], 9, 3)).status == "Surjective"
    v = surjectivity_verdict(cfg([(2, 1), (1, 1)], 9, 2))
    assert v.status == "NotApplicable" and "k < n" in v.explanation


def test_invalid_config():
    with pytest.raises(InvalidInput):
        cfg([(2, 1)], 5, 2, l=(1, 1)).validate()
    with pytest.raises(InvalidInput):
        cfg([(1, -1)], 5, 2).validate()


def test_render_is_deterministic():
    c = cfg([(2, 1)], 5, 2)
    assert vanishing_grid(c).render() == vanishing_grid(c).render()
    assert "L^N(-H1)" in vanishing_grid(c).render()
