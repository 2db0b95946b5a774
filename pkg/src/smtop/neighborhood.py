"""Sphere constructions over statistical metric spaces and écarts.

Four neighborhood notions live here:

* (u,v)-spheres  {q : F_pq(u) > 1 - v} and their pair-set analogue, the
  entourages {(p,q) : G_pq(u) < v};
* the full per-point family of distinct (u,v)-spheres, enumerated exactly
  from critical abscissae rather than sampled;
* f-spheres {q : G(p,q) < f} of a generalized écart into a poset with least
  element, including écarts over the positive integers whose spheres are
  cofinite sets;
* r-spheres {q : G_pq(u) < G_pr(u)} and the per-point R-families.

Ground sets beyond finite label sets are represented structurally: `NatSet`
is a finite-or-cofinite subset of the positive integers, `BoxSet` a product
of two component sets.  Both expose the small set protocol (`in`,
`issubset`, `&`, truthiness) that the axiom checkers in `gtop` consume.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Union

from .distfn import DistFn, Poly, Rational, as_fraction, poly_eval, tail
from .gtop import NeighborhoodSystem, make_system
from .smspace import Label, SMSpace

DEFAULT_WINDOW = 10


# ---------------------------------------------------------------------------
# set representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NatSet:
    """Finite or cofinite subset of the positive integers.

    ``members`` holds the elements when finite and the excluded elements when
    ``cofinite`` is set.
    """

    members: frozenset[int]
    cofinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for x in self.members:
            if not isinstance(x, int) or x < 1:
                raise ValueError(f"NatSet elements must be positive integers, got {x!r}")

    def __contains__(self, x) -> bool:
        if not isinstance(x, int) or x < 1:
            return False
        return (x not in self.members) if self.cofinite else (x in self.members)

    def __bool__(self) -> bool:
        return True if self.cofinite else bool(self.members)

    def __and__(self, other: "NatSet") -> "NatSet":
        if self.cofinite and other.cofinite:
            return NatSet(self.members | other.members, True)
        if self.cofinite:
            return NatSet(frozenset(x for x in other.members if x not in self.members))
        if other.cofinite:
            return NatSet(frozenset(x for x in self.members if x not in other.members))
        return NatSet(self.members & other.members)

    def issubset(self, other: "NatSet") -> bool:
        if not self.cofinite and not other.cofinite:
            return self.members <= other.members
        if not self.cofinite:
            return not (self.members & other.members)
        if other.cofinite:
            return other.members <= self.members
        return False  # a cofinite set is never inside a finite one

    def sort_key(self):
        if self.cofinite:
            return (1, -len(self.members), tuple(sorted(self.members)))
        return (0, len(self.members), tuple(sorted(self.members)))

    def render(self, window: int) -> list[int]:
        """Members within {1, ..., window}."""
        return [x for x in range(1, window + 1) if x in self]

    def to_plain(self) -> dict:
        return {"cofinite": self.cofinite, "members": sorted(self.members)}

    def __str__(self) -> str:
        inner = "{" + ", ".join(str(x) for x in sorted(self.members)) + "}"
        if self.cofinite:
            return "S" if not self.members else f"S \\ {inner}"
        return inner


FULL_NATS = NatSet(frozenset(), cofinite=True)


def natset(members: Iterable[int]) -> NatSet:
    return NatSet(frozenset(members))


def conatset(excluded: Iterable[int]) -> NatSet:
    return NatSet(frozenset(excluded), cofinite=True)


def _empty_like(component):
    if isinstance(component, NatSet):
        return NatSet(frozenset())
    return frozenset()


@dataclass(frozen=True)
class BoxSet:
    """Product A x B of two component sets (NatSet or frozenset).

    Empty boxes are canonicalised (both components emptied) so that equality
    of values is equality of the sets they denote.
    """

    left: Union[NatSet, frozenset]
    right: Union[NatSet, frozenset]

    def __post_init__(self):
        if not (self.left and self.right):
            object.__setattr__(self, "left", _empty_like(self.left))
            object.__setattr__(self, "right", _empty_like(self.right))

    def __contains__(self, pair) -> bool:
        if not isinstance(pair, tuple) or len(pair) != 2:
            return False
        return pair[0] in self.left and pair[1] in self.right

    def __bool__(self) -> bool:
        return bool(self.left) and bool(self.right)

    def __and__(self, other: "BoxSet") -> "BoxSet":
        return BoxSet(_component_and(self.left, other.left),
                      _component_and(self.right, other.right))

    def issubset(self, other: "BoxSet") -> bool:
        if not self:
            return True
        if not other:
            return False
        return (_component_issubset(self.left, other.left)
                and _component_issubset(self.right, other.right))

    def sort_key(self):
        return (_component_key(self.left), _component_key(self.right))

    def to_plain(self) -> dict:
        from .reports import plain
        return {"box": [plain(self.left), plain(self.right)]}

    def __str__(self) -> str:
        return f"{_component_str(self.left)} x {_component_str(self.right)}"


def _component_and(a, b):
    return a & b


def _component_issubset(a, b) -> bool:
    if isinstance(a, frozenset):
        return a <= b
    return a.issubset(b)


def _component_key(c):
    if isinstance(c, frozenset):
        return (0, len(c), tuple(sorted(map(repr, c))))
    return (1,) + c.sort_key()


def _component_str(c) -> str:
    if isinstance(c, frozenset):
        return "{" + ", ".join(sorted(map(str, c))) + "}"
    return str(c)


# ---------------------------------------------------------------------------
# posets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NaturalsPoset:
    """Non-negative integers under the usual order; least element 0."""

    zero: int = 0

    def contains(self, x) -> bool:
        return isinstance(x, int) and x >= 0

    def lt(self, a, b) -> bool:
        if not (self.contains(a) and self.contains(b)):
            raise ValueError(f"not poset elements: {a!r}, {b!r}")
        return a < b

    def candidates(self, bound) -> list[int]:
        if not self.contains(bound):
            raise ValueError(f"bound must be a non-negative integer, got {bound!r}")
        return list(range(bound + 1))


@dataclass(frozen=True)
class ExplicitPoset:
    """Finite strict partial order given by its relation pairs."""

    elements: tuple
    strict: frozenset  # pairs (a, b) meaning a < b
    zero: Hashable

    def __post_init__(self):
        elems = set(self.elements)
        if len(elems) != len(self.elements):
            raise ValueError("duplicate poset elements")
        if self.zero not in elems:
            raise ValueError("least element must be one of the elements")
        for a, b in self.strict:
            if a not in elems or b not in elems:
                raise ValueError(f"relation pair ({a!r}, {b!r}) off the carrier")
            if a == b:
                raise ValueError(f"strict order must be irreflexive, got ({a!r}, {a!r})")
        rel = set(self.strict)
        for a, b in rel:
            for c, d in rel:
                if b == c and (a, d) not in rel:
                    raise ValueError(f"strict order must be transitive: missing ({a!r}, {d!r})")
        for x in elems:
            if x != self.zero and (self.zero, x) not in rel:
                raise ValueError(f"{self.zero!r} is not below {x!r}: not a least element")

    def contains(self, x) -> bool:
        return x in self.elements

    def lt(self, a, b) -> bool:
        if not (self.contains(a) and self.contains(b)):
            raise ValueError(f"not poset elements: {a!r}, {b!r}")
        return (a, b) in self.strict

    def candidates(self, bound) -> list:
        if bound is None:
            return list(self.elements)
        if not self.contains(bound):
            raise ValueError(f"bound {bound!r} is not a poset element")
        return [e for e in self.elements if e == bound or self.lt(e, bound)]


@dataclass(frozen=True)
class ProductPoset:
    """Componentwise-strict product order: (a1,a2) < (b1,b2) iff a1 < b1 and
    a2 < b2.  Chosen so that product-écart spheres factor as boxes; note the
    pair of zeros is not below mixed pairs like (1, 0) under this order."""

    left: "PosetLike"
    right: "PosetLike"

    @property
    def zero(self):
        return (self.left.zero, self.right.zero)

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == 2
                and self.left.contains(x[0]) and self.right.contains(x[1]))

    def lt(self, a, b) -> bool:
        if not (self.contains(a) and self.contains(b)):
            raise ValueError(f"not poset elements: {a!r}, {b!r}")
        return self.left.lt(a[0], b[0]) and self.right.lt(a[1], b[1])

    def candidates(self, bound) -> list:
        if not (isinstance(bound, tuple) and len(bound) == 2):
            raise ValueError(f"product bound must be a pair, got {bound!r}")
        return [(x, y) for x in self.left.candidates(bound[0])
                for y in self.right.candidates(bound[1])]


PosetLike = Union[NaturalsPoset, ExplicitPoset, ProductPoset]


# ---------------------------------------------------------------------------
# generalized écarts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteEcart:
    """Écart on a finite label set: a total table of poset values on ordered
    pairs of distinct points; the diagonal is the least element."""

    points: tuple[Label, ...]
    table: tuple  # ((p, q), value) pairs
    poset: PosetLike
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        mapping = dict(self.table)
        zero = self.poset.zero
        for (p, q), v in mapping.items():
            if p not in self.points or q not in self.points:
                raise ValueError(f"écart entry for unknown points ({p!r}, {q!r})")
            if not self.poset.contains(v):
                raise ValueError(f"écart value {v!r} is not a poset element")
            if p == q and v != zero:
                raise ValueError(f"écart must vanish on the diagonal, got G({p!r},{p!r}) = {v!r}")
        for p in self.points:
            for q in self.points:
                if p != q and (p, q) not in mapping:
                    raise ValueError(f"écart table missing ordered pair ({p!r}, {q!r})")
        object.__setattr__(self, "_map", mapping)

    def value(self, p: Label, q: Label):
        if p == q:
            if p not in self.points:
                raise KeyError(f"unknown point: {p!r}")
            return self.poset.zero
        return self._map[p, q]


@dataclass(frozen=True)
class MarkedNatEcart:
    """Écart on the positive integers with a distinguished finite marked set:
    explicit table on marked pairs, one default for mixed pairs and one for
    pairs of unmarked points (the latter must be the least element so the
    diagonal vanishes)."""

    marked: frozenset[int]
    table: tuple  # ((p, q), value) on marked x marked
    mixed_default: Hashable
    outside_default: Hashable
    poset: PosetLike
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for x in self.marked:
            if not isinstance(x, int) or x < 1:
                raise ValueError(f"marked elements must be positive integers, got {x!r}")
        mapping = dict(self.table)
        zero = self.poset.zero
        if self.outside_default != zero:
            raise ValueError("default between unmarked points must be the least element "
                             "(the écart vanishes on the diagonal)")
        for v in (self.mixed_default, self.outside_default):
            if not self.poset.contains(v):
                raise ValueError(f"default {v!r} is not a poset element")
        for (p, q), v in mapping.items():
            if p not in self.marked or q not in self.marked:
                raise ValueError(f"table entry ({p!r}, {q!r}) off the marked set")
            if not self.poset.contains(v):
                raise ValueError(f"écart value {v!r} is not a poset element")
            if p == q and v != zero:
                raise ValueError(f"écart must vanish on the diagonal, got G({p},{p}) = {v!r}")
        for p in self.marked:
            for q in self.marked:
                if (p, q) not in mapping:
                    raise ValueError(f"table missing marked pair ({p}, {q})")
        object.__setattr__(self, "_map", mapping)

    def value(self, p: int, q: int):
        if not (isinstance(p, int) and p >= 1 and isinstance(q, int) and q >= 1):
            raise KeyError(f"points must be positive integers: ({p!r}, {q!r})")
        p_in = p in self.marked
        q_in = q in self.marked
        if p_in and q_in:
            return self._map[p, q]
        if p_in or q_in:
            return self.mixed_default
        return self.outside_default


@dataclass(frozen=True)
class ProductEcart:
    """Componentwise product of two écarts; the range is the product poset
    under the componentwise-strict order, so f-spheres factor as boxes."""

    left: "Ecart"
    right: "Ecart"

    @property
    def poset(self) -> ProductPoset:
        return ProductPoset(self.left.poset, self.right.poset)

    def value(self, p, q):
        return (self.left.value(p[0], q[0]), self.right.value(p[1], q[1]))


Ecart = Union[FiniteEcart, MarkedNatEcart, ProductEcart]


def ecart_sphere(g: Ecart, p, f):
    """f-sphere {q : G(p, q) < f}; empty at the least element."""
    if not g.poset.contains(f):
        raise ValueError(f"{f!r} is not an element of the écart's range poset")
    if isinstance(g, FiniteEcart):
        return frozenset(q for q in g.points if g.poset.lt(g.value(p, q), f))
    if isinstance(g, MarkedNatEcart):
        g.value(p, p)  # validates p
        default = g.mixed_default if p in g.marked else g.outside_default
        if g.poset.lt(default, f):
            excluded = frozenset(q for q in g.marked if not g.poset.lt(g.value(p, q), f))
            return NatSet(excluded, cofinite=True)
        return NatSet(frozenset(q for q in g.marked if g.poset.lt(g.value(p, q), f)))
    if isinstance(g, ProductEcart):
        return BoxSet(ecart_sphere(g.left, p[0], f[0]),
                      ecart_sphere(g.right, p[1], f[1]))
    raise TypeError(f"not an écart: {g!r}")


def ecart_ground_points(g: Ecart, window: int = DEFAULT_WINDOW) -> tuple:
    if isinstance(g, FiniteEcart):
        return g.points
    if isinstance(g, MarkedNatEcart):
        return tuple(range(1, window + 1))
    if isinstance(g, ProductEcart):
        return tuple((a, b) for a in ecart_ground_points(g.left, window)
                     for b in ecart_ground_points(g.right, window))
    raise TypeError(f"not an écart: {g!r}")


def _is_windowed(g: Ecart) -> bool:
    if isinstance(g, MarkedNatEcart):
        return True
    if isinstance(g, ProductEcart):
        return _is_windowed(g.left) or _is_windowed(g.right)
    return False


def ecart_system(g: Ecart, f_bound, window: int = DEFAULT_WINDOW) -> NeighborhoodSystem:
    """Per-point family of f-spheres over all f with 0 < f <= f_bound,
    deduplicated, empty spheres excluded (a neighborhood must contain its
    center).  Systems over unbounded grounds are reported on a finite window
    of center points."""
    poset = g.poset
    zero = poset.zero
    fs = [f for f in poset.candidates(f_bound) if poset.lt(zero, f)]
    points = ecart_ground_points(g, window)
    families = {}
    for p in points:
        spheres = [ecart_sphere(g, p, f) for f in fs]
        families[p] = [s for s in dict.fromkeys(spheres) if s]
    return make_system(points, families, window_relative=_is_windowed(g))


# ---------------------------------------------------------------------------
# (u,v)-spheres and entourages
# ---------------------------------------------------------------------------

def _positive(value: Rational, name: str) -> Fraction:
    v = as_fraction(value)
    if v <= 0:
        raise ValueError(f"{name} must be positive, got {v}")
    return v


def sphere(s: SMSpace, p: Label, u: Rational, v: Rational) -> frozenset:
    """(u,v)-sphere around p: points whose distance distribution at u exceeds
    1 - v."""
    u = _positive(u, "u")
    v = _positive(v, "v")
    s.index(p)
    return frozenset(q for q in s.points if s.dist(p, q).value_at(u) > 1 - v)


def entourage(s: SMSpace, u: Rational, v: Rational) -> frozenset:
    """Pair set {(p, q) : G_pq(u) < v}; symmetric, contains the diagonal."""
    u = _positive(u, "u")
    v = _positive(v, "v")
    return frozenset((p, q) for p in s.points for q in s.points
                     if tail(s.dist(p, q)).value_at(u) < v)


def collection_over_Z(s: SMSpace, zs: Iterable[tuple[Rational, Rational]],
                      which: str = "spheres") -> frozenset:
    """Deduplicated collection of spheres (over all centers) or entourages
    for the given finite set of (u, v) parameters."""
    if which not in ("spheres", "entourages"):
        raise ValueError(f"which must be 'spheres' or 'entourages', got {which!r}")
    pairs = [(_positive(u, "u"), _positive(v, "v")) for u, v in zs]
    if which == "spheres":
        return frozenset(sphere(s, p, u, v) for u, v in pairs for p in s.points)
    return frozenset(entourage(s, u, v) for u, v in pairs)


# ---------------------------------------------------------------------------
# critical abscissae: where sphere families can change
# ---------------------------------------------------------------------------

def _poly_sub(a: Poly, b: Poly) -> Poly:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _roots(poly: Poly) -> tuple[list[Fraction], list[tuple[Poly, Fraction, Fraction]]]:
    """Real roots of a degree-<=2 polynomial: (rational roots, bracketed
    irrational roots as (poly, lo, hi) with a sign change across the
    bracket)."""
    c0, c1, c2 = poly
    if c2 == 0:
        if c1 == 0:
            return [], []  # constant: either no roots or identically zero
        return [-c0 / c1], []
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return [], []
    vertex = -c1 / (2 * c2)
    if disc == 0:
        return [vertex], []
    root = _rational_sqrt(disc)
    if root is not None:
        half = root / (2 * c2)
        return sorted([vertex - half, vertex + half]), []
    # irrational pair, one on each side of the vertex
    brackets = []
    for direction in (-1, 1):
        hi = vertex + direction
        while _sign(poly_eval(poly, hi)) == _sign(poly_eval(poly, vertex)):
            hi = vertex + 2 * (hi - vertex)
        lo_pt, hi_pt = (hi, vertex) if direction < 0 else (vertex, hi)
        brackets.append((poly, lo_pt, hi_pt))
    return [], brackets


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _tighten(poly: Poly, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisect a sign-change bracket down to the requested width."""
    s_lo = _sign(poly_eval(poly, lo))
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = _sign(poly_eval(poly, mid))
        if s_mid == 0:
            # the root turned out rational after all
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def critical_abscissae(s: SMSpace, p: Label) -> list[Fraction]:
    """Abscissae where the value profile q -> F_pq(u) can change shape: all
    breakpoints of the functions at p plus every crossing point of their
    polynomial pieces.  Irrational crossings contribute tight rational
    brackets instead, which is enough for exhaustive cell sampling."""
    fns = [s.dist(p, q) for q in s.points]
    crits: set[Fraction] = {b for f in fns for b in f.breaks}
    cells = sorted(crits)
    pending: list[tuple[Poly, Fraction, Fraction]] = []

    for f, g in combinations(set(fns), 2):
        marks = sorted(set(f.breaks) | set(g.breaks))
        for i, lo in enumerate(marks):
            hi = marks[i + 1] if i + 1 < len(marks) else None
            pf = f.polys[_piece_at(f, lo)]
            pg = g.polys[_piece_at(g, lo)]
            diff = _poly_sub(pf, pg)
            rational, brackets = _roots(diff)
            for r in rational:
                if lo < r and (hi is None or r < hi):
                    crits.add(r)
            for poly, blo, bhi in brackets:
                blo = max(blo, lo)
                if hi is not None:
                    bhi = min(bhi, hi)
                if blo < bhi and _sign(poly_eval(poly, blo)) * _sign(poly_eval(poly, bhi)) < 0:
                    pending.append((poly, blo, bhi))

    # isolate irrational crossings: tighten each bracket until it contains no
    # rational critical (always possible, the root is irrational), then merge
    # any still-overlapping brackets (coincident roots from different pairs)
    spans: list[tuple[Fraction, Fraction]] = []
    for poly, lo, hi in pending:
        width = Fraction(1, 2 ** 40)
        while True:
            tlo, thi = _tighten(poly, lo, hi, width)
            if tlo == thi:  # landed on a rational root exactly
                crits.add(tlo)
                break
            if not any(tlo < c < thi for c in crits):
                spans.append((tlo, thi))
                break
            lo, hi = tlo, thi
            width /= 2 ** 10
    spans.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in spans:
        if merged and lo < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    for lo, hi in merged:
        crits.add(lo)
        crits.add(hi)
    return sorted(crits)


def _piece_at(f: DistFn, lo: Fraction) -> int:
    """Index of the piece active just after lo."""
    return min(bisect_right(f.breaks, lo) - 1, len(f.polys) - 1)


def sample_abscissae(s: SMSpace, p: Label) -> list[Fraction]:
    """Positive critical abscissae, midpoints of consecutive criticals, and
    one point beyond the largest: one evaluation point inside every region
    where the value profile at p keeps its shape."""
    crits = critical_abscissae(s, p)  # includes 0
    mids = [(a + b) / 2 for a, b in zip(crits, crits[1:])]
    out = {c for c in crits if c > 0} | set(mids) | {crits[-1] + 1}
    return sorted(out)


def _profile(s: SMSpace, p: Label, u: Fraction) -> dict:
    return {q: s.dist(p, q).value_at(u) for q in s.points}


def _upper_level_sets(s: SMSpace, prof: dict) -> set[frozenset]:
    """Distinct strict upper level sets over thresholds 1 - v for v > 0:
    thresholds 0 and every profile value below 1, plus the whole space
    (thresholds below 0, i.e. v > 1)."""
    out = {frozenset(s.points)}
    thresholds = {Fraction(0)} | {w for w in prof.values() if w < 1}
    for t in thresholds:
        out.add(frozenset(q for q in s.points if prof[q] > t))
    return out


def sphere_family(s: SMSpace, p: Label) -> frozenset:
    """All distinct (u,v)-spheres around p over every u, v > 0."""
    s.index(p)
    family: set[frozenset] = set()
    for u in sample_abscissae(s, p):
        family |= _upper_level_sets(s, _profile(s, p, u))
    return frozenset(family)


def sphere_system(s: SMSpace) -> NeighborhoodSystem:
    """Neighborhood system whose family at each point is its full
    (u,v)-sphere family."""
    return make_system(s.points, {p: sphere_family(s, p) for p in s.points})


# ---------------------------------------------------------------------------
# r-spheres
# ---------------------------------------------------------------------------

def r_sphere(s: SMSpace, p: Label, r: Label, u: Rational) -> frozenset:
    """{q : G_pq(u) < G_pr(u)}; empty when the reference tail vanishes, in
    particular whenever r = p."""
    u = _positive(u, "u")
    bound = tail(s.dist(p, r)).value_at(u)
    return frozenset(q for q in s.points
                     if tail(s.dist(p, q)).value_at(u) < bound)


def r_system(s: SMSpace) -> NeighborhoodSystem:
    """Per-point family {N_p(r; u) : r in S, u > 0}, deduplicated, empty
    spheres excluded."""
    families = {}
    for p in s.points:
        fam: dict[frozenset, None] = {}
        for u in sample_abscissae(s, p):
            prof = _profile(s, p, u)
            for r in s.points:
                bound = prof[r]
                member = frozenset(q for q in s.points if prof[q] > bound)
                if member:
                    fam[member] = None
        families[p] = list(fam)
    return make_system(s.points, families)
