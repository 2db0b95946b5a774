"""Triangular-norm-like operations on the unit square.

Built-in kinds are the product and the minimum; user-supplied operations are
given as a value table on a rational grid and interpolated bilinearly inside
each grid cell (exactly, with Fractions).  The axiom checker tests the five
conditions boundedness, joint monotonicity, commutativity, T(1,1)=1 and
T(a,1)>0 for a>0 on a finite grid: any reported failure is a genuine
counterexample; a pass is relative to the grid.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .distfn import Rational, as_fraction
from .reports import CheckResult, Report

#: default check grid: all multiples of 1/8 in [0, 1]
DEFAULT_GRID: tuple[Fraction, ...] = tuple(Fraction(k, 8) for k in range(9))

_AXIOM_NAMES = ("T-I", "T-II", "T-III", "T-IV", "T-V")


@dataclass(frozen=True)
class TNorm:
    kind: str  # "product" | "minimum" | "table"
    grid: tuple[Fraction, ...] | None = None
    values: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if self.kind in ("product", "minimum"):
            if self.grid is not None or self.values is not None:
                raise ValueError(f"{self.kind} t-norm takes no table")
            return
        if self.kind != "table":
            raise ValueError(f"unknown t-norm kind: {self.kind!r}")
        if self.grid is None or self.values is None:
            raise ValueError("table t-norm needs a grid and a value matrix")
        g = self.grid
        if len(g) < 2 or g[0] != 0 or g[-1] != 1 or any(a >= b for a, b in zip(g, g[1:])):
            raise ValueError("table grid must increase strictly from 0 to 1")
        if len(self.values) != len(g) or any(len(row) != len(g) for row in self.values):
            raise ValueError("value matrix must be square and match the grid")

    def __call__(self, a: Rational, b: Rational) -> Fraction:
        return apply(self, a, b)


def product_tnorm() -> TNorm:
    return TNorm("product")


def minimum_tnorm() -> TNorm:
    return TNorm("minimum")


def table_tnorm(grid: Sequence[Rational], values: Sequence[Sequence[Rational]]) -> TNorm:
    return TNorm(
        "table",
        tuple(as_fraction(g) for g in grid),
        tuple(tuple(as_fraction(v) for v in row) for row in values),
    )


def _cell_index(grid: tuple[Fraction, ...], x: Fraction) -> int:
    """Index i with grid[i] <= x <= grid[i+1]."""
    i = bisect_right(grid, x) - 1
    return min(i, len(grid) - 2)


def apply(t: TNorm, a: Rational, b: Rational) -> Fraction:
    a = as_fraction(a)
    b = as_fraction(b)
    if not (0 <= a <= 1 and 0 <= b <= 1):
        raise ValueError(f"t-norm arguments must lie in [0,1], got ({a}, {b})")
    if t.kind == "product":
        return a * b
    if t.kind == "minimum":
        return min(a, b)
    grid, values = t.grid, t.values
    i = _cell_index(grid, a)
    j = _cell_index(grid, b)
    x0, x1 = grid[i], grid[i + 1]
    y0, y1 = grid[j], grid[j + 1]
    fa = (a - x0) / (x1 - x0)
    fb = (b - y0) / (y1 - y0)
    v00, v01 = values[i][j], values[i][j + 1]
    v10, v11 = values[i + 1][j], values[i + 1][j + 1]
    return (v00 * (1 - fa) * (1 - fb) + v10 * fa * (1 - fb)
            + v01 * (1 - fa) * fb + v11 * fa * fb)


def check_axioms(t: TNorm, grid: Sequence[Rational] | None = None) -> Report:
    """Grid-relative check of the five t-norm conditions, one result each,
    with a witness tuple for every failure."""
    pts = DEFAULT_GRID if grid is None else tuple(sorted({as_fraction(g) for g in grid}))
    if not pts:
        raise ValueError("check grid must be non-empty")
    if 0 not in pts or 1 not in pts:
        raise ValueError("check grid must contain 0 and 1")

    val = {(a, b): apply(t, a, b) for a in pts for b in pts}
    results = []

    w = next(((a, b, val[a, b]) for a in pts for b in pts
              if not 0 <= val[a, b] <= 1), None)
    results.append(CheckResult("T-I", w is None, w,
                               "" if w is None else "value outside [0,1]"))

    w = None
    for a in pts:
        for b in pts:
            for c in pts:
                if c < a:
                    continue
                for d in pts:
                    if d < b:
                        continue
                    if val[c, d] < val[a, b]:
                        w = (a, b, c, d, val[a, b], val[c, d])
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    results.append(CheckResult("T-II", w is None, w,
                               "" if w is None else "not monotone"))

    w = next(((a, b, val[a, b], val[b, a]) for a in pts for b in pts
              if val[a, b] != val[b, a]), None)
    results.append(CheckResult("T-III", w is None, w,
                               "" if w is None else "not commutative"))

    one = Fraction(1)
    ok = val[one, one] == 1
    results.append(CheckResult("T-IV", ok, None if ok else (one, one, val[one, one]),
                               "" if ok else "T(1,1) != 1"))

    w = next(((a, val[a, one]) for a in pts if a > 0 and val[a, one] <= 0), None)
    results.append(CheckResult("T-V", w is None, w,
                               "" if w is None else "T(a,1) = 0 for a > 0"))

    return Report(f"t-norm axioms ({t.kind})", tuple(results))
