"""H^2 lattices with a Beauville-Bogomolov-Fujiki form, rational Kaehler cones and
the sign trichotomy that predicts which cohomology groups of a line bundle vanish."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

Vec = Tuple[Fraction, ...]


class HypothesisViolation(ValueError):
    """Input excluded by the standing hypotheses (for example c1 = 0)."""


class InvalidInput(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def as_vec(v: Iterable) -> Vec:
    out = []
    for x in v:
        if isinstance(x, float):
            raise InvalidInput("binary floats are not accepted; pass rationals as strings")
        out.append(Fraction(x))
    return tuple(out)


def _rank(rows: List[List[Fraction]]) -> int:
    m = [list(r) for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


@dataclass(frozen=True)
class H2Lattice:
    gram: Tuple[Vec, ...]
    n: Optional[int] = None

    def __post_init__(self):
        g = tuple(as_vec(row) for row in self.gram)
        r = len(g)
        if r == 0 or any(len(row) != r for row in g):
            raise InvalidInput("Gram matrix must be square and non-empty")
        for i in range(r):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise InvalidInput("Gram matrix is not symmetric")
        if _rank([list(row) for row in g]) != r:
            raise InvalidInput("form is degenerate")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def q(self, a: Sequence, b: Sequence) -> Fraction:
        return q_eval(self, a, b)


def q_eval(l: H2Lattice, a: Sequence, b: Sequence) -> Fraction:
    a, b = as_vec(a), as_vec(b)
    if len(a) != l.rank or len(b) != l.rank:
        raise InvalidInput(f"class length does not match lattice rank {l.rank}")
    total = Fraction(0)
    for i, ai in enumerate(a):
        if ai:
            row = l.gram[i]
            total += ai * sum((row[j] * bj for j, bj in enumerate(b) if bj), Fraction(0))
    return total


def signature(l: H2Lattice) -> Tuple[int, int]:
    """Inertia (positives, negatives) by symmetric elimination."""
    m = [list(r) for r in l.gram]
    pos = neg = 0
    active = list(range(len(m)))
    while active:
        p = next((i for i in active if m[i][i] != 0), None)
        if p is None:
            # all diagonals zero: find an off-diagonal entry and add row/col j to i
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
            if pair is None:
                raise InvalidInput("form is degenerate")
            i, j = pair
            for k in range(len(m)):
                m[i][k] += m[j][k]
            for k in range(len(m)):
                m[k][i] += m[k][j]
            continue
        d = m[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(p)
        for i in active:
            f = m[i][p] / d
            if f:
                for k in active:
                    m[i][k] -= f * m[p][k]
        for i in active:
            m[i][p] = m[p][i] = Fraction(0)
    return pos, neg


def fujiki_check(l: H2Lattice, n: int, top_intersection: Callable[[Vec], object],
                 classes: Iterable[Sequence]) -> List[dict]:
    """Compare externally supplied top intersections with q(eta, eta)^n."""
    out = []
    for c in classes:
        v = as_vec(c)
        expected = q_eval(l, v, v) ** n
        got = Fraction(top_intersection(v))
        out.append({"class": v, "expected": expected, "supplied": got, "ok": got == expected})
    return out


def beauville_coefficient(n: int) -> Fraction:
    return Fraction(2 * n - 2, (2 * n - 1) ** 2)


def beauville_form(n: int, int_w_eta12: object, int_w_eta1: object, int_w_eta2: object,
                   int_w_top: object) -> Fraction:
    """Unnormalized form from caller-supplied integrals:

    int w^(2n-2) eta1 eta2 - (2n-2)/(2n-1)^2 * int w^(2n-1) eta1 * int w^(2n-1) eta2 / int w^n
    """
    c = beauville_coefficient(n)
    a = Fraction(int_w_eta12)
    if c == 0:
        return a
    top = Fraction(int_w_top)
    if top == 0:
        raise PreconditionError("top intersection of the Kaehler class must be nonzero")
    return a - c * Fraction(int_w_eta1) * Fraction(int_w_eta2) / top


@dataclass(frozen=True)
class ConeSpec:
    generators: Tuple[Vec, ...]

    def __post_init__(self):
        gens = tuple(as_vec(g) for g in self.generators)
        if not gens:
            raise InvalidInput("cone needs at least one generator")
        object.__setattr__(self, "generators", gens)

    def validate(self, l: H2Lattice) -> None:
        for g in self.generators:
            if len(g) != l.rank:
                raise InvalidInput("invalid cone: generator length does not match the lattice")
        for i, g in enumerate(self.generators):
            for h in self.generators[i:]:
                if q_eval(l, g, h) <= 0:
                    raise InvalidInput(f"invalid cone: q({_fmt(g)}, {_fmt(h)}) <= 0")


def _fmt(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


CASE_I = "DualClosure"
CASE_II = "MinusDualClosure"
CASE_III = "Neither"
CASE_LABEL = {CASE_I: "case (i)", CASE_II: "case (ii)", CASE_III: "case (iii)"}


@dataclass
class VanishingReport:
    c1: Vec
    case: str
    n: int
    pairings: List[Fraction] = field(default_factory=list)

    def vanishes(self, i: int) -> bool:
        if self.case == CASE_I:
            return i > self.n
        if self.case == CASE_II:
            return i < self.n
        return i != self.n

    def zero_set(self) -> List[int]:
        return [i for i in range(2 * self.n + 1) if self.vanishes(i)]

    def describe(self) -> str:
        text = {CASE_I: "H^i = 0 for all i > n", CASE_II: "H^i = 0 for all i < n",
                CASE_III: "H^i = 0 for all i != n"}[self.case]
        return f"{CASE_LABEL[self.case]}: {text}"

    def as_dict(self) -> dict:
        return {
            "class": [str(x) for x in self.c1],
            "case": self.case,
            "label": CASE_LABEL[self.case],
            "n": self.n,
            "pairings": [str(x) for x in self.pairings],
            "zero_set": self.zero_set(),
        }


def classify(l: H2Lattice, cone: ConeSpec, c1: Sequence, n: int) -> VanishingReport:
    c = as_vec(c1)
    if len(c) != l.rank:
        raise InvalidInput(f"class length does not match lattice rank {l.rank}")
    if not any(c):
        raise HypothesisViolation("hypothesis violated: c1(L) != 0 is required")
    s = [q_eval(l, c, g) for g in cone.generators]
    if all(x == 0 for x in s):
        raise HypothesisViolation("cone not full-dimensional: every pairing vanishes")
    if all(x >= 0 for x in s):
        case = CASE_I
    elif all(x <= 0 for x in s):
        case = CASE_II
    else:
        case = CASE_III
    return VanishingReport(c, case, n, s)


def primitive_witness(l: H2Lattice, cone: ConeSpec, eta: Sequence) -> Optional[Vec]:
    """A cone vector w3 with q(eta, w3) = 0, when eta pairs with mixed signs."""
    e = as_vec(eta)
    if not any(e):
        raise PreconditionError("eta must be nonzero")
    s = [q_eval(l, e, g) for g in cone.generators]
    i = next((k for k, x in enumerate(s) if x > 0), None)
    j = next((k for k, x in enumerate(s) if x < 0), None)
    if i is None or j is None:
        return None
    t = s[j] / (s[j] - s[i])
    gi, gj = cone.generators[i], cone.generators[j]
    w3 = tuple(t * a + (1 - t) * b for a, b in zip(gi, gj))
    assert 0 < t < 1
    assert q_eval(l, e, w3) == 0
    return w3


@dataclass
class NefPerturbation:
    lam: Fraction
    delta: Fraction
    perturbed: Vec  # eta - eps*omega
    witness_cone: ConeSpec  # {omega, eta + delta*omega}
    checks: Dict[str, bool]

    def as_dict(self):
        return {
            "lambda": str(self.lam),
            "delta": str(self.delta),
            "perturbed": [str(x) for x in self.perturbed],
            "witnesses": [[str(x) for x in g] for g in self.witness_cone.generators],
            "checks": dict(self.checks),
        }


def nef_perturbation(l: H2Lattice, eta: Sequence, omega: Sequence, eps: object) -> NefPerturbation:
    e, w = as_vec(eta), as_vec(omega)
    if isinstance(eps, float):
        raise InvalidInput("binary floats are not accepted")
    eps = Fraction(eps)
    q_ee = q_eval(l, e, e)
    q_ew = q_eval(l, e, w)
    q_ww = q_eval(l, w, w)
    if q_ee != 0:
        raise PreconditionError(f"q(eta, eta) must vanish, got {q_ee}")
    if q_ww <= 0:
        raise PreconditionError("omega must satisfy q(omega, omega) > 0")
    if q_ew <= 0:
        raise PreconditionError(f"q(eta, omega) must be positive, got {q_ew}")
    if eps <= 0:
        raise PreconditionError("epsilon must be positive")
    if eps >= q_ew / q_ww:
        raise PreconditionError(f"epsilon must be below q(eta, omega)/q(omega, omega) = {q_ew / q_ww}")
    perturbed = tuple(a - eps * b for a, b in zip(e, w))
    lam = q_eval(l, w, perturbed)
    delta = lam * eps / q_ew / 2
    shifted = tuple(a + delta * b for a, b in zip(e, w))
    checks = {
        "lambda_positive": lam > 0,
        "shifted_pairing_negative": q_eval(l, shifted, perturbed) < 0,
    }
    return NefPerturbation(lam, delta, perturbed, ConeSpec((w, shifted)), checks)


# --- random instances -------------------------------------------------------------


def _unimodular(rng: random.Random, r: int, steps: int = 6) -> List[List[int]]:
    p = [[int(i == j) for j in range(r)] for i in range(r)]
    for _ in range(steps):
        i, j = rng.sample(range(r), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(r):
            p[k][i] += c * p[k][j]  # column operation
    return p


def _congruent(gram: List[List[Fraction]], p: List[List[int]]) -> List[List[Fraction]]:
    r = len(gram)
    gp = [[sum(gram[i][k] * p[k][j] for k in range(r)) for j in range(r)] for i in range(r)]
    return [[sum(p[k][i] * gp[k][j] for k in range(r)) for j in range(r)] for i in range(r)]


def random_lattice(rng: random.Random, max_rank: int = 5) -> Tuple[H2Lattice, Vec, Vec]:
    """Hyperbolic plane plus negative definite summands, in a scrambled basis.

    Also returns an isotropic vector and a positive vector in the new basis."""
    r = rng.randint(2, max_rank)
    g = [[Fraction(0)] * r for _ in range(r)]
    g[0][1] = g[1][0] = Fraction(rng.choice([1, 2]))
    for k in range(2, r):
        g[k][k] = Fraction(-rng.choice([1, 2, 4]))
    p = _unimodular(rng, r)
    gram = _congruent(g, p)
    # transport e = (1,0,...) and v = (1,1,0,...) through p^{-1}
    lat = H2Lattice(tuple(tuple(row) for row in gram))
    pinv = _int_inverse(p)
    iso = tuple(Fraction(pinv[i][0]) for i in range(r))
    pos = tuple(Fraction(pinv[i][0] + pinv[i][1]) for i in range(r))
    return lat, iso, pos


def _int_inverse(p: List[List[int]]) -> List[List[Fraction]]:
    r = len(p)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(p)]
    for c in range(r):
        piv = next(i for i in range(c, r) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        f = m[c][c]
        m[c] = [x / f for x in m[c]]
        for i in range(r):
            if i != c and m[i][c] != 0:
                g = m[i][c]
                m[i] = [a - g * b for a, b in zip(m[i], m[c])]
    return [row[r:] for row in m]


def random_cone(rng: random.Random, l: H2Lattice, center: Vec, k: Optional[int] = None) -> ConeSpec:
    k = k or rng.randint(1, 4)
    gens = []
    attempts = 0
    while len(gens) < k:
        attempts += 1
        scale = Fraction(1, rng.choice([2, 3, 4, 8]))
        g = tuple(c * rng.randint(1, 3) + scale * rng.randint(-3, 3) for c in center)
        if all(q_eval(l, g, h) > 0 for h in gens + [g]):
            gens.append(g)
        if attempts > 200:
            gens = gens or [center]
            break
    return ConeSpec(tuple(gens))


def random_isotropic(rng: random.Random, l: H2Lattice, iso: Vec) -> Vec:
    """A random nonzero q-isotropic vector: q(w,w) e - 2 q(e,w) w for isotropic e."""
    while True:
        w = tuple(Fraction(rng.randint(-4, 4)) for _ in range(l.rank))
        qww, qew = q_eval(l, w, w), q_eval(l, iso, w)
        eta = tuple(qww * a - 2 * qew * b for a, b in zip(iso, w))
        if any(eta):
            assert q_eval(l, eta, eta) == 0
            return eta


def random_class(rng: random.Random, r: int) -> Vec:
    while True:
        v = tuple(Fraction(rng.randint(-5, 5)) for _ in range(r))
        if any(v):
            return v
