"""Differential operators on polynomial-coefficient forms over flat H^n.

Everything runs in the complex coframe dz_j (index j), dzbar_j (index 2n + j).
Coefficients are polynomials in the 4n Wirtinger variables z_j (variable j) and
zbar_j (variable 2n + j), treated as independent symbols.

The twisted setting is the trivial line bundle with Hermitian weight
exp(-lambda |z|^2).  Inner products are Gaussian expectations normalized to total
mass one, with dz_j, dzbar_j declared orthonormal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import (
    ONE,
    ZERO,
    GaussRat,
    Poly,
    SingularMatrixError,
    SparseMat,
    Vector,
    inverse,
    kernel,
)
from .forms import ExteriorForm, FlatModel, merge_sign
from .su2 import kron

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (form monomial S, exponent e)
Terms = Dict[Key, GaussRat]


# ---------------------------------------------------------------------------
# polynomial-coefficient forms


class PolyForm:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Key, object]] = None):
        self.n = n
        clean: Terms = {}
        for (s, e), c in (terms or {}).items():
            c = GaussRat.coerce(c)
            if not c.is_zero():
                clean[(tuple(s), tuple(e))] = c
        self.terms = clean

    @classmethod
    def _wrap(cls, n: int, terms: Terms) -> "PolyForm":
        p = cls(n)
        p.terms = terms
        return p

    @classmethod
    def monomial(cls, n: int, s: Sequence[int], e: Sequence[int], c=ONE) -> "PolyForm":
        return cls(n, {(tuple(s), tuple(e)): c})

    @classmethod
    def from_parts(cls, coeff: Poly, form: ExteriorForm) -> "PolyForm":
        n = form.dim // 4
        out: Terms = {}
        for s, a in form.terms.items():
            for e, b in coeff.terms.items():
                out[(s, e)] = a * b
        return cls(n, out)

    @classmethod
    def constant_form(cls, form: ExteriorForm) -> "PolyForm":
        n = form.dim // 4
        return cls.from_parts(Poly.constant(4 * n, 1), form)

    @property
    def nvars(self) -> int:
        return 4 * self.n

    def is_zero(self) -> bool:
        return not self.terms

    def form_degrees(self) -> List[int]:
        return sorted({len(s) for s, _ in self.terms})

    def coeff_degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=-1)

    def coefficient(self, s: Sequence[int]) -> Poly:
        s = tuple(s)
        return Poly(self.nvars, {e: c for (t, e), c in self.terms.items() if t == s})

    def __add__(self, other: "PolyForm") -> "PolyForm":
        return PolyForm._wrap(self.n, _add(self.terms, other.terms))

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return PolyForm._wrap(self.n, _add(self.terms, other.terms, -ONE))

    def __neg__(self):
        return self.scale(-ONE)

    def scale(self, c) -> "PolyForm":
        return PolyForm._wrap(self.n, _scale(self.terms, GaussRat.coerce(c)))

    def wedge(self, other: "PolyForm") -> "PolyForm":
        out: Terms = {}
        for (s, e1), a in self.terms.items():
            for (t, e2), b in other.terms.items():
                sign, m = merge_sign(s, t)
                if m is None:
                    continue
                key = (m, tuple(x + y for x, y in zip(e1, e2)))
                v = a * b if sign > 0 else -(a * b)
                _acc(out, key, v)
        return PolyForm._wrap(self.n, _clean(out))

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*z{list(e)}*e{list(s)}" for (s, e), c in sorted(self.terms.items()))


def _acc(d: Terms, k, v: GaussRat):
    prev = d.get(k)
    d[k] = v if prev is None else prev + v


def _clean(d: Terms) -> Terms:
    return {k: v for k, v in d.items() if not v.is_zero()}


def _add(a: Terms, b: Terms, sign: GaussRat = ONE) -> Terms:
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, v if sign == ONE else v * sign)
    return _clean(out)


def _scale(a: Terms, c: GaussRat) -> Terms:
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


# --- primitive kernels (all linear, acting on Terms) --------------------------


def k_wedge(form: ExteriorForm, t: Terms) -> Terms:
    out: Terms = {}
    for (s, e), c in t.items():
        for f, a in form.terms.items():
            sign, m = merge_sign(f, s)
            if m is None:
                continue
            v = a * c
            _acc(out, (m, e), v if sign > 0 else -v)
    return _clean(out)


def k_interior_index(k: int, t: Terms) -> Terms:
    """Contraction with the dual of basis 1-form k (orthonormal coframe)."""
    out: Terms = {}
    for (s, e), c in t.items():
        if k in s:
            pos = s.index(k)
            ns = s[:pos] + s[pos + 1:]
            _acc(out, (ns, e), c if pos % 2 == 0 else -c)
    return _clean(out)


def k_interior(form: ExteriorForm, t: Terms) -> Terms:
    """Pointwise adjoint of wedging with a 1-form."""
    out: Terms = {}
    for (k,), a in form.terms.items():
        for key, v in k_interior_index(k, t).items():
            _acc(out, key, a.conjugate() * v)
    return _clean(out)


def k_diff(var: int, t: Terms) -> Terms:
    out: Terms = {}
    for (s, e), c in t.items():
        p = e[var]
        if p:
            ne = e[:var] + (p - 1,) + e[var + 1:]
            _acc(out, (s, ne), c * p)
    return _clean(out)


def k_mul(var: int, t: Terms) -> Terms:
    out: Terms = {}
    for (s, e), c in t.items():
        ne = e[:var] + (e[var] + 1,) + e[var + 1:]
        out[(s, ne)] = c
    return out


def k_pointwise(model: FlatModel, mats: Callable[[int], SparseMat], t: Terms, key=None) -> Terms:
    """Apply a constant endomorphism of Lambda^k (given per degree) to the form part.

    With ``key`` the column lists are cached on the model."""
    from .forms import monomial_index, monomials

    out: Terms = {}
    cols: Dict[int, List[Dict[int, GaussRat]]] = {}
    for (s, e), c in t.items():
        k = len(s)
        if k not in cols:
            if key is None:
                cols[k] = mats(k).columns()
            else:
                ck = ("pointwise", key, k)
                if ck not in model._cache:
                    model._cache[ck] = mats(k).columns()
                cols[k] = model._cache[ck]
        mons = monomials(model.dim, k)
        j = monomial_index(model.dim, k)[s]
        for i, a in cols[k][j].items():
            _acc(out, (mons[i], e), a * c)
    return _clean(out)


# ---------------------------------------------------------------------------
# operator expressions


class Op:
    """A linear operator on PolyForms with a fixed form-degree shift."""

    def __init__(self, name: str, fn: Callable[[Terms], Terms], shift: int, lo: int = 0, hi: int = 0):
        self.name = name
        self.fn = fn
        self.shift = shift  # form degree
        self.lo = lo  # coefficient degree shift bounds
        self.hi = hi

    def __call__(self, x: PolyForm) -> PolyForm:
        return PolyForm._wrap(x.n, self.fn(x.terms))

    def apply_terms(self, t: Terms) -> Terms:
        return self.fn(t)

    def _check_parity(self, other: "Op"):
        if (self.shift - other.shift) % 2:
            raise TypeError(f"cannot add {self.name} and {other.name}: different parity")

    def __add__(self, other: "Op") -> "Op":
        self._check_parity(other)
        f, g = self.fn, other.fn
        return Op(f"({self.name} + {other.name})", lambda t: _add(f(t), g(t)),
                  self.shift, min(self.lo, other.lo), max(self.hi, other.hi))

    def __sub__(self, other: "Op") -> "Op":
        self._check_parity(other)
        f, g = self.fn, other.fn
        return Op(f"({self.name} - {other.name})", lambda t: _add(f(t), g(t), -ONE),
                  self.shift, min(self.lo, other.lo), max(self.hi, other.hi))

    def __neg__(self) -> "Op":
        return self.scale(-ONE)

    def scale(self, c) -> "Op":
        c = GaussRat.coerce(c)
        f = self.fn
        return Op(f"{c}*{self.name}", lambda t: _scale(f(t), c), self.shift, self.lo, self.hi)

    def __rmul__(self, c) -> "Op":
        return self.scale(c)

    def __matmul__(self, other: "Op") -> "Op":
        f, g = self.fn, other.fn
        return Op(f"{self.name}.{other.name}", lambda t: f(g(t)),
                  self.shift + other.shift, self.lo + other.lo, self.hi + other.hi)

    def __repr__(self):
        return f"Op({self.name})"


def zero_op(shift: int = 0) -> Op:
    return Op("0", lambda t: {}, shift)


def identity_op() -> Op:
    return Op("id", lambda t: dict(t), 0)


def gcomm(a: Op, b: Op) -> Op:
    """Graded commutator [a, b] = ab - (-1)^{|a||b|} ba."""
    sign = -1 if (a.shift * b.shift) % 2 else 1
    ab, ba = a @ b, b @ a
    f, g = ab.fn, ba.fn
    c = ONE if sign == -1 else -ONE
    op = Op(f"[{a.name}, {b.name}]", lambda t: _add(f(t), g(t), c), ab.shift,
            min(ab.lo, ba.lo), max(ab.hi, ba.hi))
    return op


def anticomm(a: Op, b: Op) -> Op:
    ab, ba = a @ b, b @ a
    f, g = ab.fn, ba.fn
    return Op(f"{{{a.name}, {b.name}}}", lambda t: _add(f(t), g(t)), ab.shift,
              min(ab.lo, ba.lo), max(ab.hi, ba.hi))


def comm(a: Op, b: Op) -> Op:
    ab, ba = a @ b, b @ a
    f, g = ab.fn, ba.fn
    return Op(f"[{a.name}, {b.name}]", lambda t: _add(f(t), g(t), -ONE), ab.shift,
              min(ab.lo, ba.lo), max(ab.hi, ba.hi))


# ---------------------------------------------------------------------------
# weighted bundle and Gaussian pairing


@dataclass(frozen=True)
class WeightedBundle:
    n: int
    lam: GaussRat
    frame_model: FlatModel = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        lam = GaussRat.coerce(self.lam)
        if not lam.is_real() or lam.re <= 0:
            raise ValueError("curvature scale lambda must be a positive rational")
        object.__setattr__(self, "lam", lam)
        if self.frame_model is None:
            object.__setattr__(self, "frame_model", complex_model(self.n))


@lru_cache(maxsize=None)
def complex_model(n: int) -> FlatModel:
    return FlatModel(n, "complex")


def moment(n: int, lam: GaussRat, e_left: Sequence[int], e_right: Sequence[int]) -> GaussRat:
    """Gaussian expectation of conj(z^a zbar^b) * z^c zbar^d."""
    n2 = 2 * n
    out = ONE
    for j in range(n2):
        a, b = e_left[j], e_left[n2 + j]
        c, d = e_right[j], e_right[n2 + j]
        # conj(z^a zbar^b) = zbar^a z^b ; total z power b + c, zbar power a + d
        zp, zbp = b + c, a + d
        if zp != zbp:
            return ZERO
        out = out * GaussRat(factorial(zp)) / (lam ** zp)
    return out


def weighted_inner_product(b: WeightedBundle, alpha: PolyForm, beta: PolyForm) -> GaussRat:
    """<alpha, beta>, conjugate-linear in alpha."""
    da, db = alpha.form_degrees(), beta.form_degrees()
    if da and db and (len(da) > 1 or da != db):
        raise ValueError("inner product needs forms of one common degree")
    by_s: Dict[tuple, List] = {}
    for (s, e), c in beta.terms.items():
        by_s.setdefault(s, []).append((e, c))
    total = ZERO
    for (s, e1), c1 in alpha.terms.items():
        for e2, c2 in by_s.get(s, ()):
            m = moment(b.n, b.lam, e1, e2)
            if not m.is_zero():
                total = total + c1.conjugate() * c2 * m
    return total


@lru_cache(maxsize=None)
def exponents(nvars: int, max_deg: int) -> Tuple[Tuple[int, ...], ...]:
    out = []
    for d in range(max_deg + 1):
        for combo in combinations(range(nvars + d - 1), d):
            # stars and bars
            e = [0] * nvars
            prev = -1
            var = 0
            for pos in combo:
                var += pos - prev - 1
                e[var] += 1
                prev = pos
            out.append(tuple(e))
    return tuple(out)


class TruncatedSpace:
    """Basis (S, e) with S from a fixed list of form monomials and |e| <= T."""

    def __init__(self, n: int, forms: Sequence[Tuple[int, ...]], T: int):
        self.n = n
        self.forms = list(forms)
        self.T = T
        self.exps = exponents(4 * n, T) if T >= 0 else ()
        self.keys: List[Key] = [(s, e) for s in self.forms for e in self.exps]
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def vector(self, t: Terms) -> Vector:
        out = {}
        for k, v in t.items():
            i = self.index.get(k)
            if i is None:
                raise KeyError(f"term {k} outside the truncated space")
            out[i] = v
        return out

    def terms(self, vec: Vector) -> Terms:
        return {self.keys[i]: v for i, v in vec.items() if not v.is_zero()}

    def basis_forms(self) -> Iterable[PolyForm]:
        for k in self.keys:
            yield PolyForm._wrap(self.n, {k: ONE})

    def matrix(self, op: Op, target: "TruncatedSpace") -> SparseMat:
        cols = [target.vector(op.fn({k: ONE})) for k in self.keys]
        return SparseMat.from_columns(len(target), cols)


@lru_cache(maxsize=None)
def _poly_gram_inverse(n: int, lam: GaussRat, T: int) -> Tuple[SparseMat, SparseMat]:
    exps = exponents(4 * n, T)
    n2 = 2 * n
    blocks: Dict[tuple, List[int]] = {}
    for i, e in enumerate(exps):
        charge = tuple(e[j] - e[n2 + j] for j in range(n2))
        blocks.setdefault(charge, []).append(i)
    g_ent, gi_ent = {}, {}
    for idx in blocks.values():
        sub = SparseMat.from_dense([[moment(n, lam, exps[a], exps[b]) for b in idx] for a in idx])
        inv = inverse(sub)
        for r, row in sub.rows.items():
            for c, v in row.items():
                g_ent[(idx[r], idx[c])] = v
        for r, row in inv.rows.items():
            for c, v in row.items():
                gi_ent[(idx[r], idx[c])] = v
    N = len(exps)
    return SparseMat(N, N, g_ent), SparseMat(N, N, gi_ent)


def gram(b: WeightedBundle, space: TruncatedSpace, inv: bool = False) -> SparseMat:
    g, gi = _poly_gram_inverse(b.n, b.lam, space.T)
    return kron(SparseMat.identity(len(space.forms)), gi if inv else g)


class GramAdjoint(Op):
    """Adjoint of ``op`` for the weighted pairing, computed from exact Gram matrices.

    On an input of coefficient degree <= b the result is computed on truncations
    large enough that no term of the true adjoint is lost: op's coefficient-degree
    shift lies in [lo, hi], so the adjoint's lies in [-hi, -lo]."""

    def __init__(self, b: WeightedBundle, op: Op, name: Optional[str] = None, sector: str = "anti"):
        self.bundle = b
        self.op = op
        self.sector = sector
        self._mats: Dict[Tuple[int, int], Tuple[TruncatedSpace, TruncatedSpace, SparseMat]] = {}
        super().__init__(name or f"{op.name}*", self._apply, -op.shift, -op.hi, -op.lo)

    def _forms(self, k: int) -> List[Tuple[int, ...]]:
        n2 = 2 * self.bundle.n
        if k < 0:
            return []
        if self.sector == "anti":
            return [tuple(n2 + j for j in s) for s in combinations(range(n2), k)]
        return list(combinations(range(4 * self.bundle.n), k))

    def matrix(self, k: int, bdeg: int):
        """Adjoint matrix on inputs of form degree k, coefficient degree <= bdeg."""
        t_dom = max(bdeg - self.op.lo, 0)
        t_cod = max(bdeg, t_dom + self.op.hi)
        key = (k, bdeg)
        if key not in self._mats:
            dom = TruncatedSpace(self.bundle.n, self._forms(k - self.op.shift), t_dom)
            cod = TruncatedSpace(self.bundle.n, self._forms(k), t_cod)
            m = dom.matrix(self.op, cod)
            try:
                a = gram(self.bundle, dom, inv=True) @ (m.H @ gram(self.bundle, cod))
            except SingularMatrixError:
                raise SingularMatrixError("degenerate inner product") from None
            self._mats[key] = (dom, cod, a)
        return self._mats[key]

    def _apply(self, t: Terms) -> Terms:
        by_k: Dict[int, Terms] = {}
        for key, v in t.items():
            by_k.setdefault(len(key[0]), {})[key] = v
        out: Terms = {}
        for k, part in by_k.items():
            if k - self.op.shift < 0:
                continue
            bdeg = max(sum(e) for _, e in part)
            dom, cod, a = self.matrix(k, bdeg)
            res = dom.terms(a.apply(cod.vector(part)))
            out = _add(out, res)
        return out


# ---------------------------------------------------------------------------
# the operator sets


class OperatorSet(dict):
    """Named operators; ``lam`` is None for the untwisted set."""

    def __init__(self, model: FlatModel, lam: Optional[GaussRat], bundle: Optional[WeightedBundle]):
        super().__init__()
        self.model = model
        self.lam = lam
        self.bundle = bundle

    @property
    def n(self) -> int:
        return self.model.n


def _jinv_dz(m: FlatModel, j: int) -> ExteriorForm:
    # J^{-1} = -J on 1-forms
    return m.apply_structure("J", m.dz(j)).scale(-ONE)


def _nabla(n: int, j: int, lam: Optional[GaussRat], t: Terms) -> Terms:
    """(d/dz_j - lam zbar_j) on coefficients."""
    out = k_diff(j, t)
    if lam is not None and not lam.is_zero():
        out = _add(out, k_mul(2 * n + j, t), -lam)
    return out


def build_operators(n: int, twist=None, *, break_convention: bool = False) -> OperatorSet:
    """Operators on the flat model; ``twist`` is a lambda value, a WeightedBundle or
    None / "untwisted".

    ``break_convention`` swaps J^{-1} for J inside dbar_J (a checker test hook)."""
    m = complex_model(n)
    bundle = None
    lam = None
    if isinstance(twist, WeightedBundle):
        bundle = twist
    elif twist is not None and twist != "untwisted":
        bundle = WeightedBundle(n, twist)
    if bundle is not None:
        lam = bundle.lam
    n2 = 2 * n
    ops = OperatorSet(m, lam, bundle)
    dim = m.dim

    def d_part(idx):
        idx = list(idx)

        def fn(t):
            out: Terms = {}
            for (s, ex), c in t.items():
                for k in idx:
                    p = ex[k]
                    if not p:
                        continue
                    sign, mono = merge_sign((k,), s)
                    if mono is None:
                        continue
                    ne = ex[:k] + (p - 1,) + ex[k + 1:]
                    _acc(out, (mono, ne), c * (p if sign > 0 else -p))
            return _clean(out)

        return fn

    ops["d"] = Op("d", d_part(range(dim)), 1, -1, -1)
    ops["del"] = Op("del", d_part(range(n2)), 1, -1, -1)
    ops["dbar"] = Op("dbar", d_part(range(n2, dim)), 1, -1, -1)

    for label in ("I", "J", "K"):
        fwd = (lambda L: lambda k: m.rho(L, k))(label)
        bwd = (lambda L: lambda k: m.rho_inv(L, k))(label)
        dfn = ops["d"].fn

        def d_l(t, fwd=fwd, bwd=bwd, dfn=dfn, label=label):
            return k_pointwise(m, bwd, dfn(k_pointwise(m, fwd, t, ("rho", label))), ("rho_inv", label))

        ops[f"d_{label}"] = Op(f"d_{label}", d_l, 1, -1, -1)
        ops[f"rho_{label}"] = Op(label, (lambda f, L: lambda t: k_pointwise(m, f, t, ("rho", L)))(fwd, label), 0)

    jforms = [m.apply_structure("J", m.dz(j)) if break_convention else _jinv_dz(m, j) for j in range(n2)]

    def dbar_j(t):
        out: Terms = {}
        for j in range(n2):
            out = _add(out, k_wedge(jforms[j], _nabla(n, j, lam, t)))
        return out

    hi = 1 if lam is not None else -1
    ops["dbar_J"] = Op("dbar_J", dbar_j, 1, -1, hi)

    omega_bar = m.Omega_bar
    ops["L"] = Op("L", lambda t: k_wedge(omega_bar, t), 2)

    def lam_omega(t):
        out: Terms = {}
        for a in range(n):
            i1, i2 = n2 + 2 * a, n2 + 2 * a + 1
            out = _add(out, k_interior_index(i2, k_interior_index(i1, t)))
        return out

    ops["Lambda"] = Op("Lambda", lam_omega, -2)
    ops["H"] = comm(ops["L"], ops["Lambda"])
    ops["H"].name = "H"

    if bundle is not None:
        ops["dbar*"] = GramAdjoint(bundle, ops["dbar"], "dbar*")
        ops["dbar_J*"] = GramAdjoint(bundle, ops["dbar_J"], "dbar_J*")

        def dbar_star_closed(t):
            out: Terms = {}
            for j in range(n2):
                out = _add(out, _nabla(n, j, lam, k_interior_index(n2 + j, t)), -ONE)
            return out

        def dbar_j_star_closed(t):
            out: Terms = {}
            for j in range(n2):
                out = _add(out, k_diff(n2 + j, k_interior(jforms[j], t)), -ONE)
            return out

        ops["dbar*_closed"] = Op("dbar*_closed", dbar_star_closed, -1, -1, 1)
        ops["dbar_J*_closed"] = Op("dbar_J*_closed", dbar_j_star_closed, -1, -1, -1)
        ops["Delta"] = anticomm(ops["dbar"], ops["dbar*"])
        ops["Delta"].name = "Delta_dbar"
        ops["Delta_J"] = anticomm(ops["dbar_J"], ops["dbar_J*"])
        ops["Delta_J"].name = "Delta_dbar_J"
    ops["Theta+"] = anticomm(ops["dbar"], ops["dbar_J"])
    ops["Theta+"].name = "Theta+"
    return ops


def wedge_op(form: ExteriorForm, name: str = "L_theta") -> Op:
    return Op(name, lambda t: k_wedge(form, t), form.degree)


def interior_op(form: ExteriorForm, name: str = "Lambda_theta") -> Op:
    if form.degree != 1:
        raise ValueError("interior product implemented for 1-forms")
    return Op(name, lambda t: k_interior(form, t), -1)


def theta_J(m: FlatModel, theta: ExteriorForm) -> ExteriorForm:
    """J applied to the complex conjugate of a 1-form."""
    n2 = 2 * m.n
    conj = {}
    for (k,), c in theta.terms.items():
        kk = k + n2 if k < n2 else k - n2
        conj[(kk,)] = c.conjugate()
    return m.apply_structure("J", ExteriorForm(m.dim, conj))


# ---------------------------------------------------------------------------
# verification


def form_monomials(n: int, sector: str, degrees: Iterable[int]) -> List[Tuple[int, ...]]:
    n2 = 2 * n
    out = []
    for k in degrees:
        if sector == "anti":
            out.extend(tuple(n2 + j for j in s) for s in combinations(range(n2), k))
        elif sector == "all":
            out.extend(combinations(range(4 * n), k))
        else:
            raise ValueError(f"unknown sector {sector!r}")
    return out


@dataclass
class IdentityResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


def verify_identity(lhs: Op, rhs: Op, n: int, D: int, degrees: Iterable[int], sector: str = "anti",
                    name: Optional[str] = None) -> IdentityResult:
    """Compare lhs and rhs on every basis form with coefficient degree <= D."""
    space = TruncatedSpace(n, form_monomials(n, sector, degrees), D)
    checked = 0
    for key in space.keys:
        t = {key: ONE}
        a, b = lhs.fn(t), rhs.fn(t)
        checked += 1
        if a != b:
            return IdentityResult(name or f"{lhs.name} == {rhs.name}", False, checked, {
                "input": _render({key: ONE}),
                "lhs": _render(a),
                "rhs": _render(b),
            })
    return IdentityResult(name or f"{lhs.name} == {rhs.name}", True, checked)


def _render(t: Terms) -> List[List[str]]:
    return [[",".join(map(str, s)), ",".join(map(str, e)), str(c)] for (s, e), c in sorted(t.items())]


# --- curvature, Laplacians ---------------------------------------------------


class ModelViolation(ArithmeticError):
    pass


def theta_plus(twist, n: int = 1, D: int = 2):
    """Return (operator, lambda') with {dbar, dbar_J} = lambda' L_Omega_bar.

    The anticommutator is first applied to 1 to read off a 2-form; it is then
    checked to be constant, of type (0,2), to act as wedge multiplication on every
    basis (0,*)-form of coefficient degree <= D, and to be a multiple of Omega_bar."""
    ops = build_operators(n, twist)
    th = ops["Theta+"]
    m = ops.model
    img = th.fn({((), (0,) * (4 * n)): ONE})
    if any(any(e) for _, e in img):
        raise ModelViolation("anticommutator is not a constant-coefficient form")
    form = ExteriorForm(m.dim, {s: c for (s, _), c in img.items()})
    if not form.is_zero():
        n2 = 2 * n
        if form.degree != 2 or any(min(s) < n2 for s in form.terms):
            raise ModelViolation("anticommutator is not a (0,2)-form")
    res = verify_identity(th, wedge_op(form), n, D, range(2 * n + 1), "anti")
    if not res.passed:
        raise ModelViolation("anticommutator is not exterior multiplication")
    ob = m.Omega_bar
    if form.is_zero():
        return th, ZERO
    (s0, c0), = list(ob.terms.items())[:1]
    ratio = form.terms.get(s0, ZERO) / c0
    if form != ob.scale(ratio):
        raise ModelViolation("anticommutator is not proportional to L_Omega_bar")
    return th, ratio


def laplacian_matrix(b: WeightedBundle, i: int, D: int, which: str = "Delta"):
    ops = build_operators(b.n, b)
    space = TruncatedSpace(b.n, form_monomials(b.n, "anti", [i]), D)
    return space, space.matrix(ops[which], space), ops


def laplacian_kernel(b: WeightedBundle, i: int, D: int):
    """Kernel of Delta_dbar on (0,i)-forms with coefficients of degree <= D."""
    space, mat, _ = laplacian_matrix(b, i, D)
    ker = kernel(mat)
    return len(ker), [PolyForm._wrap(b.n, space.terms(v)) for v in ker]


def hermitian_psd(m: SparseMat) -> Tuple[bool, List[GaussRat]]:
    """Exact LDL^H test.  Returns (is_psd, pivots)."""
    n = m.nrows
    rows = {i: dict(r) for i, r in m.rows.items()}
    pivots: List[GaussRat] = []
    remaining = set(range(n))
    while remaining:
        # largest-support-free choice: any nonzero diagonal
        p = None
        for i in sorted(remaining):
            d = rows.get(i, {}).get(i)
            if d is not None and not d.is_zero():
                p = i
                break
        if p is None:
            # all remaining diagonals vanish: PSD forces the remaining block to vanish
            for i in remaining:
                if any(j in remaining and not v.is_zero() for j, v in rows.get(i, {}).items()):
                    return False, pivots
            pivots.extend([ZERO] * len(remaining))
            return True, pivots
        d = rows[p][p]
        if not d.is_real() or d.re < 0:
            return False, pivots + [d]
        pivots.append(d)
        remaining.discard(p)
        prow = rows[p]
        for i in list(remaining):
            f = rows.get(i, {}).get(p)
            if f is None:
                continue
            ratio = f / d
            r = rows[i]
            for j, v in prow.items():
                if j not in remaining:
                    continue
                s = r.get(j, ZERO) - ratio * v
                if s.is_zero():
                    r.pop(j, None)
                else:
                    r[j] = s
            r.pop(p, None)
    return True, pivots


@dataclass
class PositivityReport:
    n: int
    i: int
    D: int
    lam: GaussRat
    lam_prime: GaussRat
    shift: GaussRat
    shift_identity_holds: bool
    delta_j_psd: bool
    kernel_forced_empty: bool

    def as_dict(self):
        return {
            "n": self.n,
            "i": self.i,
            "D": self.D,
            "lambda": str(self.lam),
            "lambda_prime": str(self.lam_prime),
            "shift": str(self.shift),
            "shift_identity_holds": self.shift_identity_holds,
            "delta_J_psd": self.delta_j_psd,
            "kernel_forced_empty": self.kernel_forced_empty,
        }


def positivity_report(b: WeightedBundle, i: int, D: int) -> PositivityReport:
    _, lam_p = theta_plus(b, b.n, min(D, 1))
    shift = lam_p * (i - b.n)
    ops = build_operators(b.n, b)
    diff = ops["Delta"] - ops["Delta_J"]
    ident = identity_op().scale(shift)
    ok = verify_identity(diff, ident, b.n, D, [i], "anti").passed
    space = TruncatedSpace(b.n, form_monomials(b.n, "anti", [i]), D)
    dj = space.matrix(ops["Delta_J"], space)
    form = gram(b, space) @ dj
    psd, _ = hermitian_psd(form)
    return PositivityReport(b.n, i, D, b.lam, lam_p, shift, ok, psd,
                            ok and psd and shift.re > 0)


# --- bicomplex check ------------------------------------------------------------


def verify_bicomplex(n: int, D: int, break_convention: bool = False) -> IdentityResult:
    """P d Phi(s) == Phi(x dbar_J s + y dbar s) for s in S^p R (x) Lambda^{0,p} (x) polys."""
    from .qforms import qd_iso, weight_split

    m = complex_model(n)
    q = qd_iso(m)
    ops = build_operators(n, None, break_convention=break_convention)
    d, dbar, dbarj = ops["d"], ops["dbar"], ops["dbar_J"]
    n2 = 2 * n
    exps = exponents(4 * n, D)
    checked = 0

    def phi_terms(p: int, elem: Dict[Tuple[int, Tuple[int, ...], Tuple[int, ...]], GaussRat]) -> Terms:
        out: Terms = {}
        for (a, ts, e), c in elem.items():
            img = q.phi_basis((a, ts))
            for s, v in img.terms.items():
                _acc(out, (s, e), v * c)
        return _clean(out)

    def project(t: Terms) -> Terms:
        def mats(k):
            return weight_split(m, k).projector

        return k_pointwise(m, mats, t)

    def to_sym(a: int, t: Terms):
        out = {}
        for (s, e), c in t.items():
            ts = tuple(x - n2 for x in s)
            _acc(out, (a, ts, e), c)
        return out

    for p in range(2 * n + 1):
        for a, ts in q.basis(p):
            s = tuple(n2 + x for x in ts)
            for e in exps:
                checked += 1
                lhs = project(d.fn(phi_terms(p, {(a, ts, e): ONE})))
                src = {(s, e): ONE}
                rhs_elem = _add_sym(to_sym(a + 1, dbarj.fn(src)), to_sym(a, dbar.fn(src)))
                rhs = phi_terms(p + 1, rhs_elem) if p < 2 * n else {}
                if p == 2 * n:
                    # Lambda^{2n+1}_+ = 0
                    rhs = {}
                if lhs != rhs:
                    return IdentityResult("bicomplex", False, checked, {
                        "input": [str(a), ",".join(map(str, ts)), ",".join(map(str, e))],
                        "lhs": _render(lhs),
                        "rhs": _render(rhs),
                    })
    return IdentityResult("bicomplex", True, checked)


def _add_sym(a, b):
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, v)
    return {k: v for k, v in out.items() if not v.is_zero()}
