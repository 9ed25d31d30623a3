"""SU(2) structure of forms on flat H^n: weights, the ideal V*, Lambda*_+ and its
symmetric-power model."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (
    I_UNIT,
    ONE,
    GaussRat,
    SparseMat,
    Vector,
    inverse,
    rank,
    solve,
    span_rank,
    vec_add,
    vec_scale,
)
from .forms import ExteriorForm, FlatModel, apply_matrix, monomials, wedge_all
from .su2 import Sl2Action, WeightDecomposition, irrep, weight_decompose

HALF = GaussRat(1) / 2


def su2_on_forms(m: FlatModel, i: int) -> Sl2Action:
    """(h, f, g) on Lambda^i.

    h = -i W_I acts on a (p,q)-form by p - q.  f = (W_J - i W_K)/2 and
    g = -(W_J + i W_K)/2 are the raising and lowering operators normalized so that
    [f, g] = h and f(eta) = J(eta) on (0,1)-forms.
    """
    if not 0 <= i <= m.dim:
        raise ValueError(f"degree {i} outside 0..{m.dim}")
    key = ("su2", i)
    if key not in m._cache:
        wi, wj, wk = m.W("I", i), m.W("J", i), m.W("K", i)
        h = wi.scale(-I_UNIT)
        f = (wj - wk.scale(I_UNIT)).scale(HALF)
        g = (wj + wk.scale(I_UNIT)).scale(-HALF)
        m._cache[key] = Sl2Action(h, f, g)
    return m._cache[key]


def decompose_degree(m: FlatModel, i: int) -> WeightDecomposition:
    key = ("wd", i)
    if key not in m._cache:
        m._cache[key] = weight_decompose(su2_on_forms(m, i))
    return m._cache[key]


@dataclass
class WeightSplit:
    degree: int
    plus: List[ExteriorForm]  # basis of Lambda^i_+ (weight i)
    lower: List[ExteriorForm]  # basis of V^i (weights < i)
    projector: SparseMat  # onto Lambda^i_+ along V^i, in monomial coordinates

    @property
    def dim_plus(self) -> int:
        return len(self.plus)

    @property
    def dim_lower(self) -> int:
        return len(self.lower)


def weight_split(m: FlatModel, i: int) -> WeightSplit:
    key = ("split", i)
    if key in m._cache:
        return m._cache[key]
    wd = decompose_degree(m, i)
    plus_v = wd.isotypic_basis(i)
    lower_v: List[Vector] = []
    for w in sorted(wd.multiplicities):
        if w != i:
            lower_v.extend(wd.isotypic_basis(w))
    dim = m.rank(i)
    basis = SparseMat.from_columns(dim, plus_v + lower_v)
    keep = {j: {j: ONE} for j in range(len(plus_v))}
    sel = SparseMat._from_rows(dim, dim, keep)
    proj = basis @ sel @ inverse(basis) if dim else SparseMat(0, 0)
    split = WeightSplit(
        i,
        [ExteriorForm.from_vector(m.dim, i, v) for v in plus_v],
        [ExteriorForm.from_vector(m.dim, i, v) for v in lower_v],
        proj,
    )
    m._cache[key] = split
    return split


def project_plus(m: FlatModel, form: ExteriorForm) -> ExteriorForm:
    """Image of a (possibly inhomogeneous) form in Lambda*_+."""
    out = ExteriorForm(m.dim)
    for k in sorted({len(t) for t in form.terms}):
        out = out + apply_matrix(weight_split(m, k).projector, form.component(k), k)
    return out


def in_lower(m: FlatModel, form: ExteriorForm, lower: Optional[Sequence[ExteriorForm]] = None) -> bool:
    k = form.degree
    if form.is_zero():
        return True
    basis = list(lower) if lower is not None else weight_split(m, k).lower
    vecs = [b.to_vector(k) for b in basis]
    r = span_rank(vecs, m.rank(k))
    return span_rank(vecs + [form.to_vector(k)], m.rank(k)) == r


def ideal_check(m: FlatModel, override: Optional[Dict[int, List[ExteriorForm]]] = None) -> bool:
    """V^i ^ Lambda^1 is contained in V^{i+1} for every i.

    ``override`` replaces the stored V^i basis for chosen degrees (used to show the
    check has teeth)."""
    override = override or {}
    ones = [ExteriorForm.basis(m.dim, a) for a in range(m.dim)]
    for i in range(m.dim):
        lower = override.get(i, weight_split(m, i).lower)
        target = override.get(i + 1, weight_split(m, i + 1).lower)
        tvecs = [t.to_vector(i + 1) for t in target]
        r = span_rank(tvecs, m.rank(i + 1))
        images = []
        for v in lower:
            for a in ones:
                w = v.wedge(a)
                if not w.is_zero():
                    images.append(w.to_vector(i + 1))
        if images and span_rank(tvecs + images, m.rank(i + 1)) != r:
            return False
    return True


def hodge_bigrade(m: FlatModel, label: str, form: ExteriorForm) -> Dict[Tuple[int, int], ExteriorForm]:
    """Split a homogeneous form into (p,q) components for the structure ``label``.

    The (p,q) component is the W_L-eigenvector with eigenvalue i(p-q)."""
    if not form.is_homogeneous():
        raise ValueError("form must be homogeneous")
    if form.is_zero():
        return {}
    k = form.degree
    w = m.W(label, k)
    vec = form.to_vector(k)
    out = {}
    charges = list(range(-k, k + 1, 2))
    for c in charges:
        v = vec
        for c2 in charges:
            if c2 == c:
                continue
            # (W - i c2) / (i c - i c2)
            wv = w.apply(v)
            v = vec_scale(vec_add(wv, vec_scale(v, -I_UNIT * c2)), ONE / (I_UNIT * (c - c2)))
        if v:
            out[((k + c) // 2, (k - c) // 2)] = ExteriorForm.from_vector(m.dim, k, v)
    return out


def _restrict(a: Sl2Action, vecs: List[Vector], dim: int) -> Sl2Action:
    b = SparseMat.from_columns(dim, vecs)
    bh = b.H
    gram = bh @ b

    def coords(op):
        return solve(gram, bh @ op @ b)

    return Sl2Action(coords(a.h), coords(a.f), coords(a.g))


def su2_span(m: FlatModel, p: int, forms: Sequence[ExteriorForm]) -> List[Vector]:
    a = su2_on_forms(m, p)
    dim = m.rank(p)
    basis: List[Vector] = []
    queue = [f.to_vector(p) for f in forms]
    while queue:
        v = queue.pop()
        if not v:
            continue
        if span_rank(basis + [v], dim) > len(basis):
            basis.append(v)
            queue.append(a.f.apply(v))
            queue.append(a.g.apply(v))
    return basis


def purity_check(m: FlatModel, p: int, subspace: Optional[Sequence[ExteriorForm]] = None) -> bool:
    """True iff the SU(2)-span of ``subspace`` (default Lambda^{0,p}) is pure of weight p."""
    if not 0 <= p <= 2 * m.n:
        raise ValueError(f"degree {p} outside 0..{2 * m.n}")
    if subspace is None:
        subspace = m.antiholomorphic_basis(p)
    span = su2_span(m, p, subspace)
    if not span:
        return True
    wd = weight_decompose(_restrict(su2_on_forms(m, p), span, m.rank(p)))
    return set(wd.multiplicities) == {p}


def antiholomorphic_spans_agree(m: FlatModel, p: int) -> bool:
    """(0,p)-part of Lambda^p_+ equals the projection of Lambda^{0,p}."""
    split = weight_split(m, p)
    dim = m.rank(p)
    images = [project_plus(m, f).to_vector(p) for f in m.antiholomorphic_basis(p)]
    h = su2_on_forms(m, p).h
    # h-eigenvalue -p inside Lambda^p_+
    plus = [f.to_vector(p) for f in split.plus]
    if not plus:
        return span_rank(images, dim) == 0
    b = SparseMat.from_columns(dim, plus)
    shifted = (h + SparseMat.identity(dim).scale(p)) @ b
    from .exact import kernel

    low = [b.apply(c) for c in kernel(shifted)]
    r = span_rank(low, dim)
    return span_rank(images, dim) == r == span_rank(low + images, dim)


# --- the symmetric-power model S^p R (x) Lambda^{0,p} -------------------------

SymKey = Tuple[int, Tuple[int, ...]]  # (a, T): x^a y^(p-a) (x) dzbar_T


class SymModel:
    """Structure map Phi: S^p R (x) Lambda^{0,p} -> Lambda^p_+ and its inverse.

    Phi(x^a y^b (x) dzbar_t1 ^ ... ^ dzbar_tp) is the Lambda_+ projection of
    J(dzbar_t1) ^ ... ^ J(dzbar_ta) ^ dzbar_t(a+1) ^ ... ^ dzbar_tp.
    """

    def __init__(self, m: FlatModel):
        self.m = m
        self.n2 = 2 * m.n
        self._phi: Dict[int, SparseMat] = {}
        self._jbar = [m.apply_structure("J", m.dzbar(t)) for t in range(self.n2)]
        self._bar = [m.dzbar(t) for t in range(self.n2)]

    def basis(self, p: int) -> List[SymKey]:
        return [(a, t) for t in combinations(range(self.n2), p) for a in range(p, -1, -1)]

    def dim(self, p: int) -> int:
        return (p + 1) * comb(self.n2, p)

    def raw_image(self, a: int, ts: Sequence[int], which: Optional[Sequence[int]] = None) -> ExteriorForm:
        """Unprojected wedge, with J applied at the positions ``which`` (default: first a)."""
        if which is None:
            which = range(a)
        which = set(which)
        factors = [self._jbar[t] if pos in which else self._bar[t] for pos, t in enumerate(ts)]
        return wedge_all(factors, self.m.dim)

    def phi_basis(self, key: SymKey) -> ExteriorForm:
        a, ts = key
        return project_plus(self.m, self.raw_image(a, ts))

    def phi_matrix(self, p: int) -> SparseMat:
        if p not in self._phi:
            cols = [self.phi_basis(k).to_vector(p) for k in self.basis(p)]
            self._phi[p] = SparseMat.from_columns(self.m.rank(p), cols)
        return self._phi[p]

    def phi(self, p: int, elem: Dict[SymKey, GaussRat]) -> ExteriorForm:
        idx = {k: j for j, k in enumerate(self.basis(p))}
        vec = {idx[k]: GaussRat.coerce(c) for k, c in elem.items()}
        return ExteriorForm.from_vector(self.m.dim, p, self.phi_matrix(p).apply(vec))

    def is_bijective(self, p: int) -> bool:
        ph = self.phi_matrix(p)
        return rank(ph) == self.dim(p) == weight_split(self.m, p).dim_plus

    def inverse(self, form: ExteriorForm) -> Dict[SymKey, GaussRat]:
        p = form.degree
        ph = self.phi_matrix(p)
        phh = ph.H
        rhs = SparseMat.from_columns(ph.nrows, [form.to_vector(p)])
        sol = solve(phh @ ph, phh @ rhs)
        coeffs = {i: v for i, r in sol.rows.items() for v in r.values()}
        if ph.apply(coeffs) != form.to_vector(p):
            raise ValueError("form does not lie in Lambda_+")
        keys = self.basis(p)
        return {keys[i]: c for i, c in coeffs.items()}

    def product(self, p1: int, e1: Dict[SymKey, GaussRat], p2: int, e2: Dict[SymKey, GaussRat]):
        """Algebra product in the symmetric model (x^a y^b (x) eta)(x^c y^d (x) nu)."""
        out: Dict[SymKey, GaussRat] = {}
        dim = self.m.dim
        for (a, s), c1 in e1.items():
            for (b, t), c2 in e2.items():
                f = ExteriorForm(dim, {s: ONE}).wedge(ExteriorForm(dim, {t: ONE}))
                if f.is_zero():
                    continue
                (mono, sign), = f.terms.items()
                key = (a + b, mono)
                out[key] = out.get(key, GaussRat(0)) + c1 * c2 * sign
        return {k: v for k, v in out.items() if not v.is_zero()}

    def well_defined(self, p: int) -> bool:
        """Every placement of the a copies of J gives the same projected form."""
        for a, ts in self.basis(p):
            ref = project_plus(self.m, self.raw_image(a, ts))
            for which in combinations(range(p), a):
                if project_plus(self.m, self.raw_image(a, ts, which)) != ref:
                    return False
        return True

    def sym_action(self, p: int) -> Sl2Action:
        """S^p R acting on the first factor, trivially on the form factor."""
        r = irrep(p)  # basis x^(p-j) y^j, j = 0..p
        keys = self.basis(p)
        idx = {k: j for j, k in enumerate(keys)}

        def lift(op: SparseMat) -> SparseMat:
            ent = {}
            for (a, ts), col in idx.items():
                j = p - a
                for i_, v in op.columns()[j].items():
                    ent[(idx[(p - i_, ts)], col)] = v
            return SparseMat(len(keys), len(keys), ent)

        return Sl2Action(lift(r.h), lift(r.f), lift(r.g))

    def intertwines(self, p: int) -> bool:
        ph = self.phi_matrix(p)
        fa = su2_on_forms(self.m, p)
        sa = self.sym_action(p)
        return all(x @ ph == ph @ y for x, y in ((fa.h, sa.h), (fa.f, sa.f), (fa.g, sa.g)))

    def lands_in_type(self, p: int) -> bool:
        """x^a y^b (x) Lambda^{0,p} lands in the (a, b) part for I."""
        h = su2_on_forms(self.m, p).h
        for key in self.basis(p):
            v = self.phi_basis(key).to_vector(p)
            a = key[0]
            if h.apply(v) != vec_scale(v, 2 * a - p):
                return False
        return True

    def multiplicative(self, p1: int, p2: int) -> bool:
        for k1 in self.basis(p1):
            for k2 in self.basis(p2):
                prod = self.product(p1, {k1: ONE}, p2, {k2: ONE})
                lhs = self.phi(p1 + p2, prod) if prod else ExteriorForm(self.m.dim)
                rhs = project_plus(self.m, self.phi_basis(k1).wedge(self.phi_basis(k2)))
                if lhs != rhs:
                    return False
        return True


def qd_iso(m: FlatModel) -> SymModel:
    key = ("qd_iso",)
    if key not in m._cache:
        m._cache[key] = SymModel(m)
    return m._cache[key]


def expected_plus_dim(n: int, i: int) -> int:
    return (i + 1) * comb(2 * n, i) if i <= 2 * n else 0


__all__ = [
    "su2_on_forms",
    "decompose_degree",
    "WeightSplit",
    "weight_split",
    "project_plus",
    "in_lower",
    "ideal_check",
    "hodge_bigrade",
    "purity_check",
    "antiholomorphic_spans_agree",
    "su2_span",
    "SymModel",
    "qd_iso",
    "expected_plus_dim",
    "monomials",
]
