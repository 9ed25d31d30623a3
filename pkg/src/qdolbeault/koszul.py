"""Koszul-resolution bookkeeping for restricting L^N to a complete intersection
X = H_1 n ... n H_k of ample divisors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .lattice import (
    ConeSpec,
    H2Lattice,
    InvalidInput,
    Vec,
    as_vec,
    classify,
    nef_perturbation,
    q_eval,
)

ZERO_CELL = "Zero"
MAYBE = "PossiblyNonzero"
INPUT = "Input"


class BelowThreshold(ValueError):
    pass


@dataclass
class DivisorConfig:
    lattice: H2Lattice
    cone: ConeSpec
    l: Vec
    hs: Tuple[Vec, ...]
    N: int
    n: int

    def __post_init__(self):
        self.l = as_vec(self.l)
        self.hs = tuple(as_vec(h) for h in self.hs)
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise InvalidInput("N must be an integer")
        self.N = int(self.N)

    @property
    def k(self) -> int:
        return len(self.hs)

    def validate(self) -> None:
        l, lat = self.l, self.lattice
        self.cone.validate(lat)
        if len(l) != lat.rank or any(len(h) != lat.rank for h in self.hs):
            raise InvalidInput("class length does not match the lattice rank")
        if q_eval(lat, l, l) != 0:
            raise InvalidInput("q(l, l) must vanish")
        for h in self.hs:
            if q_eval(lat, h, h) <= 0:
                raise InvalidInput(f"ample class {list(map(str, h))} has q(h, h) <= 0")
            if q_eval(lat, l, h) <= 0:
                raise InvalidInput(f"q(l, h) must be positive for {list(map(str, h))}")
        if self.n < 1:
            raise InvalidInput("n must be positive")


def _subsets(k: int) -> List[Tuple[int, ...]]:
    out = []
    for size in range(k, -1, -1):
        out.extend(combinations(range(k), size))
    return out


def _h_sum(cfg: DivisorConfig, s: Sequence[int]) -> Vec:
    r = cfg.lattice.rank
    return tuple(sum((cfg.hs[i][j] for i in s), Fraction(0)) for j in range(r))


def koszul_terms(cfg: DivisorConfig) -> List[Tuple[Tuple[int, ...], Vec]]:
    """(S, N l - sum_{i in S} h_i), largest subsets first."""
    out = []
    for s in _subsets(cfg.k):
        hs = _h_sum(cfg, s)
        out.append((s, tuple(cfg.N * a - b for a, b in zip(cfg.l, hs))))
    return out


def n0_threshold(lattice: H2Lattice, l: Sequence, hs: Sequence[Sequence]) -> Fraction:
    """max over nonempty S of q(h_S, h_S) / q(l, h_S)."""
    l = as_vec(l)
    hs = [as_vec(h) for h in hs]
    best: Optional[Fraction] = None
    for size in range(1, len(hs) + 1):
        for s in combinations(range(len(hs)), size):
            h = tuple(sum((hs[i][j] for i in s), Fraction(0)) for j in range(lattice.rank))
            qlh = q_eval(lattice, l, h)
            if qlh <= 0:
                raise InvalidInput("config invariant violated: q(l, h_S) must be positive")
            ratio = q_eval(lattice, h, h) / qlh
            best = ratio if best is None else max(best, ratio)
    return best if best is not None else Fraction(0)


@dataclass
class SpectralGrid:
    n: int
    columns: List[str]
    cells: Dict[Tuple[int, int], str]  # (row, column index) -> cell state
    cases: Dict[str, str] = field(default_factory=dict)

    def column(self, j: int) -> List[str]:
        return [self.cells[(r, j)] for r in range(self.n + 1)]

    def render(self) -> str:
        width = max(len(c) for c in self.columns + [MAYBE]) + 2
        head = "row".ljust(5) + "".join(c.ljust(width) for c in self.columns)
        lines = [head]
        for r in range(self.n, -1, -1):
            lines.append(str(r).ljust(5) + "".join(self.cells[(r, j)].ljust(width)
                                                    for j in range(len(self.columns))))
        return "\n".join(lines)

    def as_dict(self):
        return {
            "n": self.n,
            "columns": list(self.columns),
            "rows": {str(r): self.column_row(r) for r in range(self.n + 1)},
            "cases": dict(self.cases),
        }

    def column_row(self, r: int) -> List[str]:
        return [self.cells[(r, j)] for j in range(len(self.columns))]


def _label(s: Tuple[int, ...]) -> str:
    if not s:
        return "L^N"
    return "L^N(-" + "-".join(f"H{i + 1}" for i in s) + ")"


def _augmented_cone(cfg: DivisorConfig, hs: Vec, eps: Fraction) -> Tuple[ConeSpec, dict]:
    pert = nef_perturbation(cfg.lattice, cfg.l, hs, eps)
    gens = tuple(cfg.cone.generators) + tuple(pert.witness_cone.generators)
    cone = ConeSpec(gens)
    cone.validate(cfg.lattice)
    return cone, pert.as_dict()


def vanishing_grid(cfg: DivisorConfig, trace: Optional[list] = None) -> SpectralGrid:
    cfg.validate()
    n0 = n0_threshold(cfg.lattice, cfg.l, cfg.hs)
    if cfg.hs and cfg.N <= n0:
        raise BelowThreshold(f"below threshold: N = {cfg.N} <= N0 = {n0}")
    terms = koszul_terms(cfg)
    columns = [_label(s) for s, _ in terms] + ["L^N|_X"]
    cells: Dict[Tuple[int, int], str] = {}
    cases: Dict[str, str] = {}
    eps = Fraction(1, cfg.N) if cfg.N else None
    for j, (s, cls) in enumerate(terms):
        if s:
            cone, pert = _augmented_cone(cfg, _h_sum(cfg, s), eps)
        else:
            cone, pert = cfg.cone, None
        rep = classify(cfg.lattice, cone, cls, cfg.n)
        cases[columns[j]] = rep.case
        if trace is not None:
            trace.append({"term": columns[j], "class": [str(x) for x in cls], "case": rep.case,
                          "pairings": [str(x) for x in rep.pairings], "perturbation": pert})
        for r in range(cfg.n + 1):
            cells[(r, j)] = ZERO_CELL if rep.vanishes(r) else MAYBE
    jr = len(terms)
    for r in range(cfg.n + 1):
        cells[(r, jr)] = INPUT
    return SpectralGrid(cfg.n, columns, cells, cases)


@dataclass
class Verdict:
    status: str  # Surjective, NotApplicable, NotProven
    explanation: str
    n0: Optional[Fraction]
    grid: Optional[SpectralGrid]
    trace: List[dict]

    def as_dict(self):
        return {
            "verdict": self.status,
            "explanation": self.explanation,
            "N0": None if self.n0 is None else str(self.n0),
            "grid": None if self.grid is None else self.grid.as_dict(),
            "trace": self.trace,
            "qualifier": "for arbitrary-rank bundles: same zero set for N > N0(B), N0(B) not computed",
        }


def surjectivity_verdict(cfg: DivisorConfig) -> Verdict:
    cfg.validate()
    k, n = cfg.k, cfg.n
    if k >= n:
        return Verdict("NotApplicable",
                       f"needs k < n (dim X = 2n - k > n); got k = {k}, n = {n}", None, None, [])
    n0 = n0_threshold(cfg.lattice, cfg.l, cfg.hs)
    trace: List[dict] = []
    grid = vanishing_grid(cfg, trace)
    bad = []
    for j, col in enumerate(grid.columns[:-2]):
        for r in range(k):
            if grid.cells[(r, j)] != ZERO_CELL:
                bad.append((col, r))
    if bad:
        return Verdict("NotProven", f"nonvanishing cells {bad}", n0, grid, trace)
    expl = (f"all subtracted columns vanish in rows 0..{k - 1}; only the differential "
            f"identified with restriction H^0(L^N) -> H^0(L^N|_X) survives")
    return Verdict("Surjective", expl, n0, grid, trace)
