"""Finite-dimensional representations of sl(2) = su(2) (x) C over exact scalars.

Conventions: on the fundamental representation with basis (x, y),
h x = x, h y = -y, f y = x, g x = y.  So f raises the h-eigenvalue by 2
and g lowers it, and [h, f] = 2f, [h, g] = -2g, [f, g] = h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from .exact import ONE, GaussRat, SparseMat, Vector, commutator, kernel


class NotAnSu2Representation(ValueError):
    pass


@dataclass(frozen=True)
class Sl2Action:
    h: SparseMat
    f: SparseMat
    g: SparseMat

    @property
    def dim(self) -> int:
        return self.h.nrows

    def check_shapes(self):
        n = self.h.nrows
        for name, m in (("h", self.h), ("f", self.f), ("g", self.g)):
            if m.nrows != m.ncols or m.nrows != n:
                raise ValueError(f"{name} has shape {m.shape}, expected {n}x{n}")

    def conjugate_by(self, p: SparseMat, p_inv: SparseMat) -> "Sl2Action":
        return Sl2Action(p_inv @ self.h @ p, p_inv @ self.f @ p, p_inv @ self.g @ p)


@dataclass
class WeightDecomposition:
    multiplicities: Dict[int, int]
    eigenspaces: Dict[int, List[Vector]] = field(default_factory=dict)
    # weight k -> basis of the V_k-isotypic part, grouped as chains (v, f v, ..., f^k v)
    isotypic: Dict[int, List[List[Vector]]] = field(default_factory=dict)
    dim: int = 0

    def isotypic_basis(self, k: int) -> List[Vector]:
        return [v for chain in self.isotypic.get(k, []) for v in chain]

    def max_weight(self) -> int:
        return max(self.multiplicities, default=-1)


def verify_triple(a: Sl2Action) -> bool:
    a.check_shapes()
    h, f, g = a.h, a.f, a.g
    return (
        commutator(h, f) == f.scale(2)
        and commutator(h, g) == g.scale(-2)
        and commutator(f, g) == h
    )


def _shifted(m: SparseMat, k: int) -> SparseMat:
    if k == 0:
        return m
    return m - SparseMat.identity(m.nrows).scale(k)


def _restricted_kernel(op: SparseMat, basis: List[Vector]) -> List[Vector]:
    """Kernel of ``op`` restricted to span(basis), returned in ambient coordinates."""
    if not basis:
        return []
    b = SparseMat.from_columns(op.ncols, basis)
    out = []
    for coeffs in kernel(op @ b):
        out.append(b.apply(coeffs))
    return out


def weight_decompose(a: Sl2Action) -> WeightDecomposition:
    a.check_shapes()
    n = a.dim
    if n == 0:
        return WeightDecomposition({}, dim=0)
    eig: Dict[int, List[Vector]] = {}
    found = 0
    k = 0
    # h-eigenvalues of an su(2)-module of dimension n lie in [-(n-1), n-1]
    while found < n and k < n:
        for ev in ((0,) if k == 0 else (k, -k)):
            sp = kernel(_shifted(a.h, ev))
            if sp:
                eig[ev] = sp
                found += len(sp)
        k += 1
    if found != n:
        raise NotAnSu2Representation("not an algebraic su(2)-representation")
    dims = {ev: len(v) for ev, v in eig.items()}
    mult: Dict[int, int] = {}
    top = max(dims)
    for w in range(top, -1, -1):
        m = dims.get(w, 0) - dims.get(w + 2, 0)
        if m < 0 or dims.get(w, 0) != dims.get(-w, 0):
            raise NotAnSu2Representation("not an algebraic su(2)-representation")
        if m:
            mult[w] = m
    if sum(m * (w + 1) for w, m in mult.items()) != n:
        raise NotAnSu2Representation("not an algebraic su(2)-representation")
    iso: Dict[int, List[List[Vector]]] = {}
    for w in mult:
        lowest = _restricted_kernel(a.g, eig[-w])
        if len(lowest) != mult[w]:
            raise NotAnSu2Representation("lowest-weight space has the wrong dimension")
        chains = []
        for v in lowest:
            chain = [v]
            for _ in range(w):
                chain.append(a.f.apply(chain[-1]))
            chains.append(chain)
        iso[w] = chains
    return WeightDecomposition(mult, eig, iso, n)


def clebsch_gordan(i: int, j: int) -> List[int]:
    if i < 0 or j < 0:
        raise ValueError("weights are non-negative")
    if i > j:
        i, j = j, i
    return [i + j - 2 * k for k in range(i + 1)]


# --- explicit models -------------------------------------------------------


def irrep(k: int) -> Sl2Action:
    """S^k of the fundamental representation, basis x^(k-m) y^m for m = 0..k."""
    h, f, g = {}, {}, {}
    for m in range(k + 1):
        a, b = k - m, m
        h[(m, m)] = a - b
        if b:  # f(x^a y^b) = b x^(a+1) y^(b-1)
            f[(m - 1, m)] = b
        if a:  # g(x^a y^b) = a x^(a-1) y^(b+1)
            g[(m + 1, m)] = a
    d = k + 1
    return Sl2Action(SparseMat(d, d, h), SparseMat(d, d, f), SparseMat(d, d, g))


def kron(a: SparseMat, b: SparseMat) -> SparseMat:
    rows: Dict[int, Dict[int, GaussRat]] = {}
    for i, ra in a.rows.items():
        for k, rb in b.rows.items():
            row = {}
            for j, va in ra.items():
                for l, vb in rb.items():
                    row[j * b.ncols + l] = va * vb
            rows[i * b.nrows + k] = row
    return SparseMat._from_rows(a.nrows * b.nrows, a.ncols * b.ncols, rows)


def tensor(a: Sl2Action, b: Sl2Action) -> Sl2Action:
    ia = SparseMat.identity(a.dim)
    ib = SparseMat.identity(b.dim)
    return Sl2Action(
        kron(a.h, ib) + kron(ia, b.h),
        kron(a.f, ib) + kron(ia, b.f),
        kron(a.g, ib) + kron(ia, b.g),
    )


def fundamental() -> Sl2Action:
    return irrep(1)


def zero_action(dim: int) -> Sl2Action:
    z = SparseMat(dim, dim)
    return Sl2Action(z, z, z)


__all__ = [
    "Sl2Action",
    "WeightDecomposition",
    "NotAnSu2Representation",
    "verify_triple",
    "weight_decompose",
    "clebsch_gordan",
    "irrep",
    "tensor",
    "kron",
    "fundamental",
    "zero_action",
    "ONE",
]
