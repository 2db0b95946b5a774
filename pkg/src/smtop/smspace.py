"""Finite statistical metric spaces.

A space is a finite ordered set of point labels with a distribution function
attached to every unordered pair of distinct points; the diagonal is the
identity function (0 at 0, 1 beyond).  Labels are opaque and keep their input
order, product spaces use tuple labels.

The checkers are refuters: `check_sm_axioms` is exact (the triangle-style
condition reduces to threshold data extractable from the pieces), while
`check_menger` scans a witness grid built from breakpoints, their pairwise
sums and the midpoints in between, which is exact for step-function spaces
and a sound refuter in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .distfn import DistFn, Rational, as_fraction, first_one, one, ramp, step, validate
from .reports import CheckResult, Report
from .tnorm import TNorm, apply

Label = Hashable

INF = float("inf")


@dataclass(frozen=True)
class SMSpace:
    points: tuple[Label, ...]
    entries: tuple[tuple[tuple[Label, Label], DistFn], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})
        object.__setattr__(self, "_table", dict(self.entries))

    def __contains__(self, p: Label) -> bool:
        return p in self._index

    def index(self, p: Label) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise KeyError(f"unknown point: {p!r}") from None

    def pair(self, p: Label, q: Label) -> tuple[Label, Label]:
        """Canonical unordered-pair key, ordered by point position."""
        return (p, q) if self.index(p) <= self.index(q) else (q, p)

    def dist(self, p: Label, q: Label) -> DistFn:
        if self.index(p) == self.index(q):
            return one()
        return self._table[self.pair(p, q)]

    def pairs(self) -> list[tuple[Label, Label]]:
        pts = self.points
        return [(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]

    def threshold(self, p: Label, q: Label) -> Fraction | float:
        return threshold(self, p, q)


def build(points: Sequence[Label], entries: Mapping[tuple[Label, Label], DistFn]) -> SMSpace:
    """Construct and structurally validate a space.

    `entries` must cover exactly the unordered pairs of distinct points
    (either orientation); diagonal entries are implicit and rejected.
    """
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        dupes = sorted({p for p in pts if list(pts).count(p) > 1}, key=repr)
        raise ValueError(f"duplicate labels: {dupes}")
    if not pts:
        raise ValueError("a space needs at least one point")
    index = {p: i for i, p in enumerate(pts)}

    table: dict[tuple[Label, Label], DistFn] = {}
    for (p, q), fn in entries.items():
        if p not in index or q not in index:
            raise ValueError(f"entry for unknown point pair ({p!r}, {q!r})")
        if p == q:
            raise ValueError(f"diagonal entry for {p!r}: the diagonal is implicit")
        key = (p, q) if index[p] <= index[q] else (q, p)
        if key in table:
            if table[key] != fn:
                raise ValueError(f"conflicting entries for pair {key!r}")
            continue
        report = validate(fn)
        if not report.ok:
            first = report.failures()[0]
            raise ValueError(
                f"invalid distribution function for pair {key!r}: {first}")
        table[key] = fn

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if (pts[i], pts[j]) not in table:
                raise ValueError(f"missing pair ({pts[i]!r}, {pts[j]!r})")

    return SMSpace(pts, tuple(sorted(table.items(), key=lambda kv: (index[kv[0][0]], index[kv[0][1]]))))


def from_metric(points: Sequence[Label],
                d: Callable[[Label, Label], Rational] | Mapping[tuple[Label, Label], Rational],
                kind: str = "step") -> SMSpace:
    """Space induced by an ordinary metric: each pair gets step(d(p,q)) or
    ramp(d(p,q)).  The metric axioms are checked and violations rejected."""
    pts = tuple(points)
    if isinstance(d, Mapping):
        lookup = dict(d)

        def dval(p, q):
            if p == q:
                return Fraction(0)
            if (p, q) in lookup:
                return as_fraction(lookup[p, q])
            if (q, p) in lookup:
                return as_fraction(lookup[q, p])
            raise ValueError(f"metric table missing pair ({p!r}, {q!r})")
    else:
        def dval(p, q):
            return as_fraction(d(p, q))

    for p in pts:
        if dval(p, p) != 0:
            raise ValueError(f"metric axiom violated: d({p!r},{p!r}) != 0")
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            v = dval(p, q)
            if v != dval(q, p):
                raise ValueError(f"metric axiom violated: d not symmetric at ({p!r},{q!r})")
            if v <= 0:
                raise ValueError(f"metric axiom violated: d({p!r},{q!r}) = {v} for distinct points")
    for p in pts:
        for q in pts:
            for r in pts:
                if dval(p, r) > dval(p, q) + dval(q, r):
                    raise ValueError(
                        f"metric axiom violated: triangle fails at ({p!r},{q!r},{r!r})")

    if kind not in ("step", "ramp"):
        raise ValueError(f"metric space kind must be 'step' or 'ramp', got {kind!r}")
    make = step if kind == "step" else ramp
    entries = {}
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            entries[p, q] = make(dval(p, q))
    return build(pts, entries)


def threshold(s: SMSpace, p: Label, q: Label) -> Fraction | float:
    """inf{x : F_pq(x) = 1}, or +inf when the value 1 is never reached."""
    at, _ = first_one(s.dist(p, q))
    return INF if at is None else at


def _threshold_attained(s: SMSpace, p: Label, q: Label) -> tuple[Fraction | float, bool]:
    at, attained = first_one(s.dist(p, q))
    return (INF, False) if at is None else (at, attained)


def check_sm_axioms(s: SMSpace) -> Report:
    """Exact check of the four space axioms; failures carry point witnesses."""
    results = []

    w = None
    detail = ""
    for p in s.points:
        if s.dist(p, p) != one():  # unreachable with build(); kept for hand-made spaces
            w, detail = (p,), "diagonal entry is not the identity function"
            break
    if w is None:
        for p, q in s.pairs():
            if s.dist(p, q) == one():
                w, detail = (p, q), "distinct points at identity distance"
                break
    results.append(CheckResult("SM-I", w is None, w, detail))

    w = next(((p, q) for p, q in s.pairs() if s.dist(p, q).value_at(0) != 0), None)
    results.append(CheckResult("SM-II", w is None, w,
                               "" if w is None else "value at 0 is not 0"))

    results.append(CheckResult("SM-III", True, None,
                               "symmetric by construction (unordered-pair storage)"))

    thresh = {(p, q): _threshold_attained(s, p, q)
              for p in s.points for q in s.points}
    w = None
    detail = ""
    for p in s.points:
        for q in s.points:
            for r in s.points:
                t1, att1 = thresh[p, q]
                t2, att2 = thresh[q, r]
                if t1 == INF or t2 == INF:
                    continue
                z = t1 + t2
                if att1 and att2:
                    # minimal witnesses x = t1, y = t2 are themselves attained
                    if s.dist(p, r).value_at(z) != 1:
                        w = (p, q, r, t1, t2)
                        detail = f"F(p,r)({z}) = {s.dist(p, r).value_at(z)} != 1"
                        break
                else:
                    tpr, _ = _threshold_attained(s, p, r)
                    if tpr > z:
                        w = (p, q, r, t1, t2)
                        detail = f"F(p,r) first reaches 1 at {tpr} > {z}"
                        break
            if w:
                break
        if w:
            break
    results.append(CheckResult("SM-IV", w is None, w, detail))

    return Report("SM axioms", tuple(results))


def menger_witness_abscissae(fns: Iterable[DistFn]) -> list[Fraction]:
    """Breakpoints of the given functions, their pairwise sums, and midpoints
    of consecutive values in that union."""
    base = sorted({b for f in fns for b in f.breaks})
    sums = {a + b for a in base for b in base}
    pts = sorted(set(base) | sums)
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def check_menger(s: SMSpace, t: TNorm) -> Report:
    """Scan every ordered triple over the witness abscissa grid for the
    triangle inequality under t.  Exact for step-function spaces.

    The inequality only depends on the three distribution functions, so
    point triples sharing a function triple are scanned once."""
    groups: dict[tuple[DistFn, DistFn, DistFn], tuple[Label, Label, Label]] = {}
    for p in s.points:
        for q in s.points:
            for r in s.points:
                key = (s.dist(p, q), s.dist(q, r), s.dist(p, r))
                groups.setdefault(key, (p, q, r))

    failures = []
    for (f_pq, f_qr, f_pr), (p, q, r) in groups.items():
        ws = menger_witness_abscissae((f_pq, f_qr, f_pr))
        vals_x = [(x, f_pq.value_at(x)) for x in ws]
        vals_y = [(y, f_qr.value_at(y)) for y in ws]
        hit = None
        for x, fx in vals_x:
            for y, fy in vals_y:
                rhs = apply(t, fx, fy)
                if f_pr.value_at(x + y) < rhs:
                    hit = (p, q, r, x, y)
                    failures.append(CheckResult(
                        "menger-triple", False, hit,
                        f"F(p,r)({x + y}) = {f_pr.value_at(x + y)} < {rhs}"))
                    break
            if hit:
                break
    if failures:
        return Report("Menger inequality", tuple(failures))
    return Report("Menger inequality", (CheckResult(
        "menger", True, None,
        f"all {len(s.points) ** 3} ordered triples pass "
        f"({len(groups)} distinct function triples)"),))
