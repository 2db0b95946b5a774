"""Exact piecewise-polynomial distribution functions on [0, oo).

A distribution function here is nondecreasing, left-continuous, equal to 0 at
x = 0, and has supremum 1.  Every function is stored exactly as finitely many
pieces: piece k covers the half-open interval (b_k, b_{k+1}] with rational
endpoints and carries a polynomial of degree <= 2 with rational coefficients;
the last piece covers (b_last, oo) and must be constant for the function to
validate.  Left-continuity is structural: evaluation at a breakpoint uses the
piece whose interval *ends* there, so a jump at b is invisible until x > b.

All arithmetic is exact (`fractions.Fraction`); there is no floating point in
this module.  Functions compare equal iff their canonical piece lists match;
canonicalisation merges adjacent pieces carrying identical polynomials, which
makes pointwise equality decidable structurally.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .reports import CheckResult, Report

Rational = Union[int, str, Fraction]

#: polynomial c0 + c1*x + c2*x^2 as a coefficient triple
Poly = tuple[Fraction, Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DegreeError(ValueError):
    """An operation would need a polynomial piece of degree > 2."""


def as_fraction(value: Rational) -> Fraction:
    """Coerce an int, "a/b" string or Fraction to an exact Fraction.

    Floats are rejected: they would silently smuggle binary rounding into a
    library whose whole point is exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected int, str or Fraction, got {type(value).__name__}")


def _coerce_poly(coeffs: Sequence[Rational]) -> Poly:
    cs = [as_fraction(c) for c in coeffs]
    if len(cs) > 3:
        if any(c != 0 for c in cs[3:]):
            raise DegreeError(f"polynomial degree > 2: {coeffs!r}")
        cs = cs[:3]
    while len(cs) < 3:
        cs.append(_ZERO)
    return (cs[0], cs[1], cs[2])


def poly_eval(poly: Poly, x: Fraction) -> Fraction:
    c0, c1, c2 = poly
    return c0 + x * (c1 + x * c2)


def poly_mul(p: Poly, q: Poly) -> Poly:
    prod = [_ZERO] * 5
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            prod[i + j] += a * b
    if prod[3] != 0 or prod[4] != 0:
        raise DegreeError(
            "product needs polynomial degree > 2; the piecewise representation "
            "is capped at quadratic pieces"
        )
    return (prod[0], prod[1], prod[2])


def _is_constant(poly: Poly) -> bool:
    return poly[1] == 0 and poly[2] == 0


@dataclass(frozen=True)
class DistFn:
    """Piecewise-polynomial distribution function.

    ``breaks[k]`` is the left endpoint of piece k; piece k covers
    ``(breaks[k], breaks[k+1]]`` (the final piece is unbounded).  The value at
    x = 0 is 0 by definition and is not stored.  Instances are immutable and
    hashable; construction canonicalises by merging adjacent identical
    polynomials, so ``==`` decides pointwise equality for valid functions.
    """

    breaks: tuple[Fraction, ...]
    polys: tuple[Poly, ...]

    def __post_init__(self):
        breaks = tuple(as_fraction(b) for b in self.breaks)
        polys = tuple(_coerce_poly(p) for p in self.polys)
        if len(breaks) != len(polys) or not breaks:
            raise ValueError("need one polynomial per breakpoint, at least one piece")
        merged_b = [breaks[0]]
        merged_p = [polys[0]]
        for b, p in zip(breaks[1:], polys[1:]):
            if p == merged_p[-1]:
                continue
            merged_b.append(b)
            merged_p.append(p)
        object.__setattr__(self, "breaks", tuple(merged_b))
        object.__setattr__(self, "polys", tuple(merged_p))

    def value_at(self, x: Rational) -> Fraction:
        """Left-continuous value at x >= 0; at a breakpoint b the piece ending
        at b wins, so e.g. step(1).value_at(1) == 0."""
        x = as_fraction(x)
        if x < 0:
            raise ValueError(f"distribution functions are defined on [0, oo); got {x}")
        if x == 0:
            return _ZERO
        idx = bisect_left(self.breaks, x) - 1
        if idx < 0:
            # only reachable when breaks[0] != 0 (an invalid function)
            idx = 0
        return poly_eval(self.polys[idx], x)

    def breakpoints(self) -> list[Fraction]:
        """All interval endpoints, including 0."""
        return list(self.breaks)

    def tail(self) -> "TailFn":
        return TailFn(self)

    def __mul__(self, other: "DistFn") -> "DistFn":
        return multiply(self, other)

    def __str__(self) -> str:
        parts = []
        for k, (b, p) in enumerate(zip(self.breaks, self.polys)):
            hi = str(self.breaks[k + 1]) if k + 1 < len(self.breaks) else "oo"
            parts.append(f"({b},{hi}]->{_poly_str(p)}" if hi != "oo" else f"({b},oo)->{_poly_str(p)}")
        return "DistFn[" + ", ".join(parts) + "]"


def _poly_str(p: Poly) -> str:
    c0, c1, c2 = p
    if _is_constant(p):
        return str(c0)
    terms = []
    if c2 != 0:
        terms.append(f"{c2}*x^2")
    if c1 != 0:
        terms.append(f"{c1}*x")
    if c0 != 0 or not terms:
        terms.append(str(c0))
    return "+".join(terms).replace("+-", "-")


@dataclass(frozen=True)
class TailFn:
    """Complement 1 - F of a distribution function."""

    base: DistFn

    def value_at(self, x: Rational) -> Fraction:
        return _ONE - self.base.value_at(x)


def tail(f: DistFn) -> TailFn:
    return TailFn(f)


def piecewise(breaks: Sequence[Rational], polys: Sequence[Sequence[Rational]]) -> DistFn:
    """Low-level constructor from raw piece data. Does not validate semantics;
    run :func:`validate` to get a report."""
    return DistFn(tuple(as_fraction(b) for b in breaks), tuple(_coerce_poly(p) for p in polys))


def one() -> DistFn:
    """The identity distance distribution: 0 at 0, 1 on (0, oo)."""
    return DistFn((_ZERO,), ((_ONE, _ZERO, _ZERO),))


def step(a: Rational) -> DistFn:
    """Threshold function: 0 on [0, a], 1 on (a, oo)."""
    a = as_fraction(a)
    if a <= 0:
        raise ValueError(f"step threshold must be positive, got {a}")
    return DistFn((_ZERO, a), ((_ZERO, _ZERO, _ZERO), (_ONE, _ZERO, _ZERO)))


def ramp(d: Rational) -> DistFn:
    """Linear rise x/d on (0, d), then 1 on [d, oo); 0 at 0."""
    d = as_fraction(d)
    if d <= 0:
        raise ValueError(f"ramp slope length must be positive, got {d}")
    return DistFn((_ZERO, d), ((_ZERO, 1 / d, _ZERO), (_ONE, _ZERO, _ZERO)))


def multiply(f: DistFn, g: DistFn) -> DistFn:
    """Pointwise product. Pieces multiply on the common refinement of the two
    breakpoint lists; raises DegreeError if any piece would exceed degree 2."""
    breaks = sorted(set(f.breaks) | set(g.breaks))
    polys = []
    for b in breaks:
        jf = bisect_right(f.breaks, b) - 1
        jg = bisect_right(g.breaks, b) - 1
        polys.append(poly_mul(f.polys[jf], g.polys[jg]))
    return DistFn(tuple(breaks), tuple(polys))


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def _candidates(a: Fraction, b: Fraction | None, poly: Poly) -> list[Fraction]:
    """Points where a degree-<=2 polynomial can attain extremes on [a, b]
    (b None = unbounded piece, probed one unit past the vertex/left end)."""
    pts = [a]
    _c0, c1, c2 = poly
    vertex = None
    if c2 != 0:
        vertex = -c1 / (2 * c2)
    if b is None:
        hi = a + 1
        if vertex is not None and vertex > a:
            hi = max(hi, vertex + 1)
        if vertex is not None and a < vertex < hi:
            pts.append(vertex)
        pts.append(hi)
    else:
        if vertex is not None and a < vertex < b:
            pts.append(vertex)
        pts.append(b)
    return pts


def _shrink_toward(poly: Poly, anchor: Fraction, probe: Fraction, bound: Fraction,
                   below: bool) -> Fraction:
    """Find x strictly between anchor and probe where poly(x) < bound (below)
    or > bound (not below). Caller guarantees the limit at anchor violates, so
    halving terminates."""
    x = probe
    while True:
        v = poly_eval(poly, x)
        if (below and v < bound) or (not below and v > bound):
            return x
        x = (anchor + x) / 2


def validate(f: DistFn) -> Report:
    """Check the distribution-function invariants and report each violation
    with a concrete witness abscissa (or abscissa pair for monotonicity)."""
    results: list[CheckResult] = []

    bad: tuple | None = None
    detail = ""
    if f.breaks[0] != 0:
        bad = (f.breaks[0],)
        detail = "first breakpoint must be 0"
    else:
        for a, b in zip(f.breaks, f.breaks[1:]):
            if not a < b:
                bad = (a, b)
                detail = "breakpoints must be strictly increasing"
                break
    results.append(CheckResult("breakpoints", bad is None, bad, detail))
    if bad is not None:
        # piece geometry is meaningless; stop here
        return Report("distfn", tuple(results))

    n = len(f.breaks)
    mono_witness: tuple | None = None
    range_witness: tuple | None = None

    for k in range(n):
        a = f.breaks[k]
        b = f.breaks[k + 1] if k + 1 < n else None
        poly = f.polys[k]
        pts = _candidates(a, b, poly)
        vals = [poly_eval(poly, x) for x in pts]

        if mono_witness is None:
            for (x1, v1), (x2, v2) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
                if v1 > v2:
                    # the left candidate may be the open endpoint a, where the
                    # value is only a limit; move inside the piece
                    if x1 == a:
                        x1 = _shrink_toward(poly, a, (a + x2) / 2, v2, below=False)
                    mono_witness = (x1, x2)
                    break

        if range_witness is None:
            for x, v in zip(pts, vals):
                if v < 0 or v > 1:
                    if x == a:
                        # limit at the open left endpoint; find an attained point
                        probe = pts[1]
                        x = _shrink_toward(poly, a, (a + probe) / 2,
                                           _ZERO if v < 0 else _ONE,
                                           below=(v < 0))
                    range_witness = (x,)
                    break

        # junction with the next piece: value at b must not exceed the right
        # limit of the following piece
        if mono_witness is None and b is not None:
            here = poly_eval(poly, b)
            nxt = f.polys[k + 1]
            limit = poly_eval(nxt, b)
            if here > limit:
                span = (f.breaks[k + 2] - b) if k + 2 < n else _ONE
                probe = b + span / 2
                x2 = _shrink_toward(nxt, b, probe, here, below=True)
                mono_witness = (b, x2)

    results.append(CheckResult(
        "nondecreasing", mono_witness is None, mono_witness,
        "" if mono_witness is None else "f(x1) > f(x2) with x1 < x2"))
    results.append(CheckResult(
        "range", range_witness is None, range_witness,
        "" if range_witness is None else "value outside [0,1]"))

    last = f.polys[-1]
    sup_ok = _is_constant(last) and last[0] == 1
    results.append(CheckResult(
        "sup", sup_ok, None if sup_ok else (f.breaks[-1],),
        "" if sup_ok else "final unbounded piece must be the constant 1"))

    results.append(CheckResult("origin", True, None, "value at 0 is 0 by construction"))
    return Report("distfn", tuple(results))


def is_valid(f: DistFn) -> bool:
    return validate(f).ok


# --------------------------------------------------------------------------
# threshold where the value 1 is first reached
# --------------------------------------------------------------------------

def first_one(f: DistFn) -> tuple[Fraction | None, bool]:
    """(inf{x : f(x) = 1}, attained-at-that-inf), or (None, False) if the
    value 1 is never reached.  Exact for valid functions: within a valid piece
    the value 1 is attained only at the right endpoint, or the piece is the
    constant 1 and the infimum is its left endpoint."""
    n = len(f.breaks)
    for k in range(n):
        poly = f.polys[k]
        if _is_constant(poly) and poly[0] == 1:
            at = f.breaks[k]
            return at, f.value_at(at) == 1
        if k + 1 < n:
            b = f.breaks[k + 1]
            if poly_eval(poly, b) == 1:
                return b, True
    return None, False


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def to_records(f: DistFn) -> list[dict]:
    """Serialize as piece records {from, to, poly}; "to" null marks the
    unbounded piece and rationals are emitted as strings."""
    records = []
    n = len(f.breaks)
    for k in range(n):
        hi = str(f.breaks[k + 1]) if k + 1 < n else None
        records.append({
            "from": str(f.breaks[k]),
            "to": hi,
            "poly": [str(c) for c in f.polys[k]],
        })
    return records


def from_records(records: Sequence[dict]) -> DistFn:
    """Inverse of :func:`to_records`. Raises ValueError on malformed records."""
    if not records:
        raise ValueError("empty piece list")
    breaks: list[Fraction] = []
    polys: list[Poly] = []
    prev_to: Fraction | None = None
    for i, rec in enumerate(records):
        lo = as_fraction(rec["from"])
        if i == 0:
            if lo != 0:
                raise ValueError("first piece must start at 0")
        elif prev_to is None or lo != prev_to:
            raise ValueError(f"piece {i} does not start where piece {i - 1} ends")
        to = rec.get("to")
        if to is None:
            if i != len(records) - 1:
                raise ValueError("only the last piece may be unbounded")
            prev_to = None
        else:
            prev_to = as_fraction(to)
        breaks.append(lo)
        polys.append(_coerce_poly(rec["poly"]))
    if records[-1].get("to") is not None:
        raise ValueError("last piece must be unbounded (to = null)")
    return DistFn(tuple(breaks), tuple(polys))
