"""Exact scalar arithmetic and sparse linear algebra.

Scalars are Gaussian rationals ``(re + i*im) / den`` stored as three Python
ints.  Nothing in this package ever touches a float.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple


_NUM = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"(?P<re>[+-]?{_NUM})?(?:(?P<isign>[+-]|(?<![\d/])(?=[\di]))(?P<inum>{_NUM})?\*?i(?:/(?P<iden>\d+))?)?"
)


class GaussRat:
    """An element of Q(i), kept in lowest terms with a positive denominator."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussRat":
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator)
        if isinstance(x, complex):
            raise TypeError("refusing to convert a binary complex float to an exact scalar")
        if isinstance(x, float):
            raise TypeError("refusing to convert a binary float to an exact scalar")
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "GaussRat":
        """Parse ``"3/4"``, ``"-2"``, ``"1/2+3/5i"``, ``"i"``, ``"2i/3"`` or ``"-i/3"``."""
        s = text.replace(" ", "").replace("I", "i").replace("j", "i")
        m = _SCALAR_RE.fullmatch(s)
        if not s or m is None:
            raise ValueError(f"cannot parse exact scalar {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
        if m.group("isign") is None:
            return cls(re_part)
        coef = m.group("inum")
        im = Fraction(coef) if coef else Fraction(1)
        if m.group("iden"):
            im /= int(m.group("iden"))
        if m.group("isign") == "-":
            im = -im
        return cls(re_part, im)

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussRat":
        obj = object.__new__(GaussRat)
        obj._a, obj._b, obj._d = self._a, -self._b, self._d
        return obj

    def norm2(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __add__(self, other):
        if not isinstance(other, GaussRat):
            try:
                other = GaussRat.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return GaussRat._raw(self._a + other._a, self._b + other._b, d1)
        return GaussRat._raw(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussRat)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __sub__(self, other):
        if not isinstance(other, GaussRat):
            try:
                other = GaussRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussRat):
            if isinstance(other, int):
                return GaussRat._raw(self._a * other, self._b * other, self._d)
            try:
                other = GaussRat.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self._a, self._b, other._a, other._b
        return GaussRat._raw(a * c - b * d, a * d + b * c, self._d * other._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.coerce(other)
        c, d = other._a, other._b
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b = self._a, self._b
        # (a+bi)/D1 / ((c+di)/D2) = (a+bi)(c-di) D2 / (D1 (c^2+d^2))
        return GaussRat._raw((a * c + b * d) * other._d, (b * c - a * d) * other._d, self._d * n)

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (GaussRat(1) / self) ** (-k)
        out = GaussRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GaussRat):
            try:
                other = GaussRat.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussRat({self})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if im == 1:
            im_s = "i"
        elif im == -1:
            im_s = "-i"
        else:
            im_s = f"{im}i"
        if re == 0:
            return im_s
        return f"{re}{'' if im_s.startswith('-') else '+'}{im_s}"


ZERO = GaussRat(0)
ONE = GaussRat(1)
I_UNIT = GaussRat(0, 1)


def q(x) -> GaussRat:
    """Shorthand coercion to an exact scalar."""
    return GaussRat.coerce(x)


# ---------------------------------------------------------------------------
# polynomials

Exponent = Tuple[int, ...]


class Poly:
    """Sparse multivariate polynomial with Gaussian-rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, GaussRat] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = GaussRat.coerce(c)
            if not c.is_zero():
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, k: int) -> "Poly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Poly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = GaussRat.coerce(other)
            p = Poly(self.nvars)
            if not c.is_zero():
                p.terms = {e: v * c for e, v in self.terms.items()}
            return p
        self._check(other)
        out: Dict[Exponent, GaussRat] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def diff(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return Poly(self.nvars, out)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable ``k`` by ``images[k]`` (all in a common ring)."""
        target = images[0].nvars
        out = Poly(target)
        for e, c in self.terms.items():
            term = Poly.constant(target, c)
            for k, power in enumerate(e):
                for _ in range(power):
                    term = term * images[k]
            out = out + term
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self == Poly.constant(self.nvars, other)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"v{k}^{p}" if p > 1 else f"v{k}" for k, p in enumerate(e) if p)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# sparse matrices

Vector = Dict[int, GaussRat]


class SparseMat:
    """Row-major dictionary-of-dictionaries matrix over Q(i)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, entries: Mapping[Tuple[int, int], object] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: Dict[int, Dict[int, GaussRat]] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            v = GaussRat.coerce(v)
            if not v.is_zero():
                self.rows.setdefault(i, {})[j] = v

    @classmethod
    def _from_rows(cls, nrows: int, ncols: int, rows: Dict[int, Dict[int, GaussRat]]) -> "SparseMat":
        m = cls(nrows, ncols)
        m.rows = {i: r for i, r in rows.items() if r}
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "SparseMat":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        return cls(nrows, ncols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row)})

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls._from_rows(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMat":
        return cls(nrows, ncols)

    @classmethod
    def from_columns(cls, nrows: int, cols: Sequence[Mapping[int, GaussRat]]) -> "SparseMat":
        rows: Dict[int, Dict[int, GaussRat]] = {}
        for j, col in enumerate(cols):
            for i, v in col.items():
                if not v.is_zero():
                    rows.setdefault(i, {})[j] = v
        return cls._from_rows(nrows, len(cols), rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: Tuple[int, int]) -> GaussRat:
        i, j = ij
        return self.rows.get(i, {}).get(j, ZERO)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def to_dense(self) -> List[List[GaussRat]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "SparseMat":
        rows: Dict[int, Dict[int, GaussRat]] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseMat._from_rows(self.ncols, self.nrows, rows)

    @property
    def T(self) -> "SparseMat":
        return self.transpose()

    def conj_transpose(self) -> "SparseMat":
        rows: Dict[int, Dict[int, GaussRat]] = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v.conjugate()
        return SparseMat._from_rows(self.ncols, self.nrows, rows)

    @property
    def H(self) -> "SparseMat":
        return self.conj_transpose()

    def __add__(self, other: "SparseMat") -> "SparseMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                s = tgt.get(j)
                s = v if s is None else s + v
                if s.is_zero():
                    tgt.pop(j, None)
                else:
                    tgt[j] = s
        return SparseMat._from_rows(self.nrows, self.ncols, rows)

    def __neg__(self) -> "SparseMat":
        return self.scale(-ONE)

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def scale(self, c) -> "SparseMat":
        c = GaussRat.coerce(c)
        if c.is_zero():
            return SparseMat(self.nrows, self.ncols)
        return SparseMat._from_rows(
            self.nrows, self.ncols, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()}
        )

    def __mul__(self, c) -> "SparseMat":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        rows: Dict[int, Dict[int, GaussRat]] = {}
        for i, r in self.rows.items():
            acc: Dict[int, GaussRat] = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    s = acc.get(j)
                    acc[j] = a * b if s is None else s + a * b
            acc = {j: v for j, v in acc.items() if not v.is_zero()}
            if acc:
                rows[i] = acc
        return SparseMat._from_rows(self.nrows, other.ncols, rows)

    def apply(self, vec: Mapping[int, GaussRat]) -> Vector:
        out: Vector = {}
        for i, r in self.rows.items():
            s = ZERO
            hit = False
            for j, a in r.items():
                x = vec.get(j)
                if x is not None:
                    s = s + a * x
                    hit = True
            if hit and not s.is_zero():
                out[i] = s
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, frozenset((i, frozenset(r.items())) for i, r in self.rows.items())))

    def is_zero(self) -> bool:
        return not self.rows

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "SparseMat":
        cmap = {c: k for k, c in enumerate(col_idx)}
        rows = {}
        for new_i, i in enumerate(row_idx):
            r = self.rows.get(i)
            if r:
                nr = {cmap[j]: v for j, v in r.items() if j in cmap}
                if nr:
                    rows[new_i] = nr
        return SparseMat._from_rows(len(row_idx), len(col_idx), rows)

    def __repr__(self):
        return f"SparseMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def commutator(a: SparseMat, b: SparseMat) -> SparseMat:
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# fraction-free elimination over Z[i]

GInt = Tuple[int, int]


def _gmul(x: GInt, y: GInt) -> GInt:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdiv_exact(x: GInt, y: GInt) -> GInt:
    n = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    qr, rr = divmod(re, n)
    qi, ri = divmod(im, n)
    if rr or ri:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return (qr, qi)


def _integral_row(row: Mapping[int, GaussRat]) -> Dict[int, GInt]:
    den = 1
    for v in row.values():
        den = den * v._d // gcd(den, v._d)
    return {j: (v._a * (den // v._d), v._b * (den // v._d)) for j, v in row.items()}


def _bareiss_echelon(m: SparseMat) -> Tuple[List[Dict[int, GInt]], List[int]]:
    """Return integral echelon rows and their pivot columns (in elimination order)."""
    pending = [_integral_row(r) for r in m.rows.values() if r]
    prev: GInt = (1, 0)
    echelon: List[Dict[int, GInt]] = []
    pivots: List[int] = []
    for col in range(m.ncols):
        if not pending:
            break
        best = None
        for idx, r in enumerate(pending):
            if col in r and (best is None or len(r) < len(pending[best])):
                best = idx
        if best is None:
            continue
        prow = pending.pop(best)
        a = prow[col]
        new_pending = []
        for r in pending:
            b = r.get(col)
            nr: Dict[int, GInt] = {}
            for j, v in r.items():
                if j == col:
                    continue
                nr[j] = _gmul(a, v)
            if b is not None:
                for j, v in prow.items():
                    if j == col:
                        continue
                    t = _gmul(b, v)
                    s = nr.get(j, (0, 0))
                    nr[j] = (s[0] - t[0], s[1] - t[1])
            out = {}
            for j, v in nr.items():
                if v != (0, 0):
                    out[j] = _gdiv_exact(v, prev)
            if out:
                new_pending.append(out)
        pending = new_pending
        echelon.append(prow)
        pivots.append(col)
        prev = a
    return echelon, pivots


def rank(m: SparseMat) -> int:
    return len(_bareiss_echelon(m)[1])


def kernel(m: SparseMat) -> List[Vector]:
    """Basis of the right null space, one vector per free column."""
    echelon, pivots = _bareiss_echelon(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis: List[Vector] = []
    for f in free:
        x: Dict[int, GaussRat] = {f: ONE}
        for row, pc in zip(reversed(echelon), reversed(pivots)):
            s = ZERO
            for j, (ar, ai) in row.items():
                if j == pc:
                    continue
                xj = x.get(j)
                if xj is not None:
                    s = s + GaussRat._raw(ar, ai, 1) * xj
            if not s.is_zero():
                a = row[pc]
                x[pc] = -s / GaussRat._raw(a[0], a[1], 1)
        vec = {j: v for j, v in x.items() if not v.is_zero()}
        lead = vec[min(vec)]
        basis.append({j: v / lead for j, v in vec.items()})
    return basis


# ---------------------------------------------------------------------------
# Gauss-Jordan solves (used for Gram systems and span membership)


class SingularMatrixError(ArithmeticError):
    pass


def solve(a: SparseMat, b: SparseMat) -> SparseMat:
    """Solve ``a @ x == b`` for square nonsingular ``a``."""
    if a.nrows != a.ncols or a.nrows != b.nrows:
        raise ValueError("solve needs square a and matching b")
    n = a.nrows
    # augmented rows: columns 0..n-1 from a, n.. from b
    rows: Dict[int, Dict[int, GaussRat]] = {}
    for i in range(n):
        r = dict(a.rows.get(i, {}))
        for j, v in b.rows.get(i, {}).items():
            r[n + j] = v
        rows[i] = r
    # column -> set of rows having an entry there (for sparse pivot search)
    col_rows: Dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            if j < n:
                col_rows.setdefault(j, set()).add(i)
    pivot_row_of: Dict[int, int] = {}
    used = set()
    for col in range(n):
        cands = [i for i in col_rows.get(col, ()) if i not in used]
        if not cands:
            raise SingularMatrixError("singular matrix")
        p = min(cands, key=lambda i: (len(rows[i]), i))
        used.add(p)
        prow = rows[p]
        inv = ONE / prow[col]
        prow = {j: v * inv for j, v in prow.items()}
        rows[p] = prow
        for i in list(col_rows.get(col, ())):
            if i == p:
                continue
            r = rows[i]
            f = r.get(col)
            if f is None:
                continue
            for j, v in prow.items():
                s = r.get(j)
                s = -f * v if s is None else s - f * v
                if s.is_zero():
                    r.pop(j, None)
                    if j < n:
                        col_rows[j].discard(i)
                else:
                    if s is not None and j not in r and j < n:
                        col_rows.setdefault(j, set()).add(i)
                    r[j] = s
        pivot_row_of[col] = p
    out: Dict[int, Dict[int, GaussRat]] = {}
    for col, p in pivot_row_of.items():
        sol = {j - n: v for j, v in rows[p].items() if j >= n}
        if sol:
            out[col] = sol
    return SparseMat._from_rows(n, b.ncols, out)


def inverse(a: SparseMat) -> SparseMat:
    return solve(a, SparseMat.identity(a.nrows))


def gram_adjoint(op: SparseMat, gram_dom: SparseMat, gram_cod: SparseMat) -> SparseMat:
    """Adjoint of ``op: dom -> cod`` with respect to the two Gram matrices.

    Inner products are conjugate-linear in the first slot, ``<u, w> = u^H G w``.
    The result ``A`` satisfies ``gram_dom @ A == op.H @ gram_cod``.
    """
    if gram_dom.shape != (op.ncols, op.ncols) or gram_cod.shape != (op.nrows, op.nrows):
        raise ValueError("Gram matrices do not match the operator's shape")
    try:
        return solve(gram_dom, op.H @ gram_cod)
    except SingularMatrixError:
        raise SingularMatrixError("degenerate inner product") from None


def in_span(basis: Sequence[Mapping[int, GaussRat]], vec: Mapping[int, GaussRat], dim: int) -> bool:
    """Exact membership of ``vec`` in the span of ``basis`` (vectors of length ``dim``)."""
    if not vec:
        return True
    m = SparseMat.from_columns(dim, list(basis))
    r0 = rank(m)
    m2 = SparseMat.from_columns(dim, list(basis) + [dict(vec)])
    return rank(m2) == r0


def span_rank(vectors: Iterable[Mapping[int, GaussRat]], dim: int) -> int:
    vs = list(vectors)
    if not vs:
        return 0
    return rank(SparseMat.from_columns(dim, vs))


def vec_sub(u: Mapping[int, GaussRat], v: Mapping[int, GaussRat]) -> Vector:
    out = dict(u)
    for k, x in v.items():
        s = out.get(k)
        s = -x if s is None else s - x
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_add(u: Mapping[int, GaussRat], v: Mapping[int, GaussRat]) -> Vector:
    out = dict(u)
    for k, x in v.items():
        s = out.get(k)
        s = x if s is None else s + x
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(u: Mapping[int, GaussRat], c) -> Vector:
    c = GaussRat.coerce(c)
    if c.is_zero():
        return {}
    return {k: v * c for k, v in u.items()}


def iter_nonzero(vec: Mapping[int, GaussRat]) -> Iterator[Tuple[int, GaussRat]]:
    return ((k, v) for k, v in sorted(vec.items()) if not v.is_zero())
