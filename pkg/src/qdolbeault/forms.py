"""Constant-coefficient exterior algebra of the flat quaternionic space H^n."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import I_UNIT, ONE, ZERO, GaussRat, SparseMat, Vector, inverse

Mono = Tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(dim: int, k: int) -> Tuple[Mono, ...]:
    return tuple(combinations(range(dim), k))


@lru_cache(maxsize=None)
def monomial_index(dim: int, k: int) -> Dict[Mono, int]:
    return {m: i for i, m in enumerate(monomials(dim, k))}


def merge_sign(s: Sequence[int], t: Sequence[int]) -> Tuple[int, Optional[Mono]]:
    """Sign and sorted support of e_s ^ e_t, or (0, None) when they overlap."""
    if set(s) & set(t):
        return 0, None
    # count inversions between the two sorted blocks
    inv = 0
    j = 0
    for a in s:
        while j < len(t) and t[j] < a:
            j += 1
        inv += j
    return (-1 if inv & 1 else 1), tuple(sorted(s + tuple(t)))


def sort_sign(idx: Sequence[int]) -> Tuple[int, Optional[Mono]]:
    """Sign of the permutation sorting ``idx``; (0, None) on repeats."""
    if len(set(idx)) != len(idx):
        return 0, None
    arr = list(idx)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


class ExteriorForm:
    """Sparse element of Lambda^* of a dim-dimensional space, basis e_0..e_{dim-1}."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Sequence[int], object] | None = None):
        self.dim = dim
        out: Dict[Mono, GaussRat] = {}
        for idx, c in (terms or {}).items():
            c = GaussRat.coerce(c)
            if c.is_zero():
                continue
            sign, mono = sort_sign(tuple(idx))
            if mono is None:
                continue
            if any(not 0 <= x < dim for x in mono):
                raise IndexError(f"index {mono} outside 0..{dim - 1}")
            prev = out.get(mono)
            val = c * sign if prev is None else prev + c * sign
            if val.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = val
        self.terms = out

    @classmethod
    def basis(cls, dim: int, *idx: int) -> "ExteriorForm":
        return cls(dim, {tuple(idx): ONE})

    @classmethod
    def one(cls, dim: int) -> "ExteriorForm":
        return cls(dim, {(): ONE})

    @classmethod
    def from_vector(cls, dim: int, k: int, vec: Mapping[int, GaussRat]) -> "ExteriorForm":
        mons = monomials(dim, k)
        f = cls(dim)
        f.terms = {mons[i]: v for i, v in vec.items() if not v.is_zero()}
        return f

    def to_vector(self, k: Optional[int] = None) -> Vector:
        if k is None:
            k = self.degree
        idx = monomial_index(self.dim, k)
        out = {}
        for m, c in self.terms.items():
            if len(m) != k:
                raise ValueError(f"form has a component of degree {len(m)}, expected {k}")
            out[idx[m]] = c
        return out

    @property
    def degree(self) -> int:
        degs = {len(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1

    def component(self, k: int) -> "ExteriorForm":
        f = ExteriorForm(self.dim)
        f.terms = {m: c for m, c in self.terms.items() if len(m) == k}
        return f

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        f = ExteriorForm(self.dim)
        f.terms = out
        return f

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExteriorForm":
        c = GaussRat.coerce(c)
        f = ExteriorForm(self.dim)
        if not c.is_zero():
            f.terms = {m: v * c for m, v in self.terms.items()}
        return f

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def wedge(self, other: "ExteriorForm") -> "ExteriorForm":
        out: Dict[Mono, GaussRat] = {}
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                sign, m = merge_sign(s, t)
                if m is None:
                    continue
                v = a * b if sign > 0 else -(a * b)
                prev = out.get(m)
                out[m] = v if prev is None else prev + v
        f = ExteriorForm(self.dim)
        f.terms = {m: v for m, v in out.items() if not v.is_zero()}
        return f

    __xor__ = wedge

    def conjugate_coefficients(self) -> "ExteriorForm":
        f = ExteriorForm(self.dim)
        f.terms = {m: v.conjugate() for m, v in self.terms.items()}
        return f

    def __eq__(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})e{'^'.join(map(str, m))}" if m else f"({c})" for m, c in sorted(self.terms.items())
        )


def wedge_all(forms: Iterable[ExteriorForm], dim: int) -> ExteriorForm:
    out = ExteriorForm.one(dim)
    for f in forms:
        out = out.wedge(f)
    return out


def _column_forms(l1: SparseMat) -> List[Dict[int, GaussRat]]:
    return l1.columns()


def derivation_matrix(l1: SparseMat, k: int) -> SparseMat:
    """Extension of an endomorphism of Lambda^1 to Lambda^k as a derivation."""
    dim = l1.nrows
    mons = monomials(dim, k)
    idx = monomial_index(dim, k)
    cols = _column_forms(l1)
    entries: Dict[Tuple[int, int], GaussRat] = {}
    for j, mono in enumerate(mons):
        for pos, s in enumerate(mono):
            for t, c in cols[s].items():
                new = mono[:pos] + (t,) + mono[pos + 1:]
                sign, m = sort_sign(new)
                if m is None:
                    continue
                key = (idx[m], j)
                v = c if sign > 0 else -c
                entries[key] = entries.get(key, ZERO) + v
    return SparseMat(len(mons), len(mons), entries)


def power_matrix(l1: SparseMat, k: int) -> SparseMat:
    """Multiplicative extension Lambda^k(L) of an endomorphism L of Lambda^1."""
    dim = l1.nrows
    mons = monomials(dim, k)
    idx = monomial_index(dim, k)
    cols = [ExteriorForm(dim, {(t,): c for t, c in col.items()}) for col in _column_forms(l1)]
    entries = {}
    for j, mono in enumerate(mons):
        img = wedge_all((cols[s] for s in mono), dim)
        for m, c in img.terms.items():
            entries[(idx[m], j)] = c
    return SparseMat(len(mons), len(mons), entries)


def apply_matrix(m: SparseMat, form: ExteriorForm, k: Optional[int] = None) -> ExteriorForm:
    if k is None:
        k = form.degree
    return ExteriorForm.from_vector(form.dim, k, m.apply(form.to_vector(k)))


class FlatModel:
    """Flat H^n with its complex structures I, J, K acting on 1-forms.

    frame="real": basis dx^c_a at index 4a + c (c = 0..3, a = 0..n-1).
    frame="complex": dz_j at index j, dz-bar_j at index 2n + j (j = 0..2n-1),
    with z_{2a} = x^0_a + i x^1_a and z_{2a+1} = x^2_a + i x^3_a.
    """

    def __init__(self, n: int, frame: str = "real"):
        if n < 1:
            raise ValueError("quaternionic dimension must be at least 1")
        if frame not in ("real", "complex"):
            raise ValueError(f"unknown frame {frame!r}")
        self.n = n
        self.frame = frame
        self.dim = 4 * n
        self._cache: Dict[tuple, object] = {}
        cI, cJ = self._complex_structures()
        # columns of P: dz_j, dzbar_j written in the real coframe
        P = self._real_from_complex()
        self.P_real_from_complex = P
        self.P_complex_from_real = inverse(P)
        Pi = self.P_complex_from_real
        self._real = {"I": P @ cI @ Pi, "J": P @ cJ @ Pi}
        self._real["K"] = self._real["I"] @ self._real["J"]
        if frame == "complex":
            self.I, self.J = cI, cJ
        else:
            self.I, self.J = self._real["I"], self._real["J"]
        self.K = self.I @ self.J

    # -- structure ---------------------------------------------------------
    def _complex_structures(self):
        n2 = 2 * self.n
        I, J = {}, {}
        for j in range(n2):
            I[(j, j)] = I_UNIT
            I[(n2 + j, n2 + j)] = -I_UNIT
        for a in range(self.n):
            z1, z2 = 2 * a, 2 * a + 1
            J[(n2 + z2, z1)] = ONE  # J dz1 = dzbar2
            J[(n2 + z1, z2)] = -ONE  # J dz2 = -dzbar1
            J[(z2, n2 + z1)] = ONE  # J dzbar1 = dz2
            J[(z1, n2 + z2)] = -ONE  # J dzbar2 = -dz1
        d = self.dim
        return SparseMat(d, d, I), SparseMat(d, d, J)

    def _real_from_complex(self) -> SparseMat:
        n2 = 2 * self.n
        e = {}
        for a in range(self.n):
            for half in range(2):
                j = 2 * a + half
                re_idx, im_idx = 4 * a + 2 * half, 4 * a + 2 * half + 1
                e[(re_idx, j)] = ONE
                e[(im_idx, j)] = I_UNIT
                e[(re_idx, n2 + j)] = ONE
                e[(im_idx, n2 + j)] = -I_UNIT
        return SparseMat(self.dim, self.dim, e)

    def structure(self, label: str) -> SparseMat:
        return {"I": self.I, "J": self.J, "K": self.K}[label]

    def labels(self) -> List[str]:
        if self.frame == "real":
            return [f"dx{c}_{a + 1}" for a in range(self.n) for c in range(4)]
        n2 = 2 * self.n
        return [f"dz{j + 1}" for j in range(n2)] + [f"dzbar{j + 1}" for j in range(n2)]

    # -- 1-forms -------------------------------------------------------------
    def _from_complex_vec(self, vec: Mapping[int, GaussRat]) -> ExteriorForm:
        if self.frame == "real":
            vec = self.P_real_from_complex.apply(vec)
        return ExteriorForm(self.dim, {(i,): c for i, c in vec.items()})

    def dz(self, j: int) -> ExteriorForm:
        return self._from_complex_vec({j: ONE})

    def dzbar(self, j: int) -> ExteriorForm:
        return self._from_complex_vec({2 * self.n + j: ONE})

    def dx(self, a: int, c: int) -> ExteriorForm:
        if self.frame == "real":
            return ExteriorForm.basis(self.dim, 4 * a + c)
        col = self.P_complex_from_real.columns()[4 * a + c]
        return ExteriorForm(self.dim, {(i,): v for i, v in col.items()})

    def antiholomorphic_basis(self, p: int) -> List[ExteriorForm]:
        n2 = 2 * self.n
        return [wedge_all((self.dzbar(j) for j in s), self.dim) for s in combinations(range(n2), p)]

    def type_basis(self, p: int, q: int) -> List[ExteriorForm]:
        """Basis dz_S ^ dzbar_T of Lambda^{p,q} for the complex structure I."""
        n2 = 2 * self.n
        out = []
        for s in combinations(range(n2), p):
            a = wedge_all((self.dz(j) for j in s), self.dim)
            for t in combinations(range(n2), q):
                out.append(a.wedge(wedge_all((self.dzbar(j) for j in t), self.dim)))
        return out

    # -- distinguished 2-forms ------------------------------------------------
    def _half_trace_form(self, label: str, left: bool) -> ExteriorForm:
        # contraction against the metric, which is orthonormal in the real coframe
        out = ExteriorForm(self.dim)
        cols = self._real[label].columns()
        for k in range(self.dim):
            lk = ExteriorForm(self.dim, {(t,): c for t, c in cols[k].items()})
            ek = ExteriorForm.basis(self.dim, k)
            out = out + (lk.wedge(ek) if left else ek.wedge(lk))
        return self._from_real_form(out.scale(GaussRat(1, 0) / 2))

    def _from_real_form(self, form: ExteriorForm) -> ExteriorForm:
        if self.frame == "real":
            return form
        out = ExteriorForm(self.dim)
        for k in sorted({len(m) for m in form.terms}):
            out = out + apply_matrix(power_matrix(self.P_complex_from_real, k), form.component(k), k)
        return out

    @property
    def Omega(self) -> ExteriorForm:
        key = ("Omega",)
        if key not in self._cache:
            out = ExteriorForm(self.dim)
            for a in range(self.n):
                out = out + self.dz(2 * a).wedge(self.dz(2 * a + 1))
            self._cache[key] = out
        return self._cache[key]

    @property
    def Omega_bar(self) -> ExteriorForm:
        key = ("Omega_bar",)
        if key not in self._cache:
            out = ExteriorForm(self.dim)
            for a in range(self.n):
                out = out + self.dzbar(2 * a).wedge(self.dzbar(2 * a + 1))
            self._cache[key] = out
        return self._cache[key]

    @property
    def omega_I(self) -> ExteriorForm:
        # sum of dx0^dx1 + dx2^dx3, i.e. (i/2) sum dz^dzbar
        return self._half_trace_form("I", left=True)

    @property
    def omega_J(self) -> ExteriorForm:
        return self._half_trace_form("J", left=False)

    @property
    def omega_K(self) -> ExteriorForm:
        return self._half_trace_form("K", left=True)

    # -- operators on Lambda^k -------------------------------------------------
    def rank(self, k: int) -> int:
        return len(monomials(self.dim, k))

    def W(self, label: str, k: int) -> SparseMat:
        key = ("W", label, k)
        if key not in self._cache:
            self._cache[key] = derivation_matrix(self.structure(label), k)
        return self._cache[key]

    def rho(self, label: str, k: int) -> SparseMat:
        """Lambda^k of the structure ``label``; J here is the map written J(eta)."""
        key = ("rho", label, k)
        if key not in self._cache:
            self._cache[key] = power_matrix(self.structure(label), k)
        return self._cache[key]

    def rho_inv(self, label: str, k: int) -> SparseMat:
        # L^{-1} = -L on 1-forms, so Lambda^k(L)^{-1} = (-1)^k Lambda^k(L)
        return self.rho(label, k).scale(-1 if k % 2 else 1)

    def apply_structure(self, label: str, form: ExteriorForm) -> ExteriorForm:
        out = ExteriorForm(self.dim)
        for k in sorted({len(m) for m in form.terms}):
            out = out + apply_matrix(self.rho(label, k), form.component(k), k)
        return out

    def to_complex_frame(self, form: ExteriorForm) -> ExteriorForm:
        """Re-express a real-coframe form in the dz/dzbar coframe."""
        if self.frame == "complex":
            return form
        out = ExteriorForm(self.dim)
        for k in sorted({len(m) for m in form.terms}):
            out = out + apply_matrix(power_matrix(self.P_complex_from_real, k), form.component(k), k)
        return out

    def __repr__(self):
        return f"FlatModel(n={self.n}, frame={self.frame!r})"
