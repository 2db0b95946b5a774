"""Neighborhood systems, the three axioms N0/N1/N2, classification, and the
closure / interior / symmetry operators.

A system assigns every point a finite family of neighborhood sets.  Members
are plain frozensets for finite ground sets; systems over the positive
integers (or products of them) use the cofinite / box set types from
`neighborhood`, and their N1/N2 verdicts are window-relative: quantifiers
over points range over the system's declared window.

Explicit systems are checked through integer bitmasks; the generic path
handles cofinite and box members through the common set protocol
(membership, `issubset`, `&`, truthiness).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .reports import CheckResult

Label = Hashable

VERDICTS = ("not-V", "V", "V_alpha", "V_D", "Top")

#: flags required by each type label
TYPE_FLAGS = {
    "V": ("n0",),
    "V_alpha": ("n0", "n1"),
    "V_D": ("n0", "n2"),
    "Top": ("n0", "n1", "n2"),
}


def member_sort_key(member, index: Mapping[Label, int]):
    """Deterministic ordering for family members of any set kind."""
    if isinstance(member, frozenset):
        return (0, len(member), tuple(sorted(index[x] for x in member)))
    return (1,) + member.sort_key()


@dataclass(frozen=True)
class NeighborhoodSystem:
    points: tuple[Label, ...]
    families: tuple[tuple, ...]  # families[i] lists the neighborhoods of points[i]
    window_relative: bool = False

    def family(self, p: Label):
        return self.families[self.points.index(p)]

    def is_explicit(self) -> bool:
        return all(isinstance(m, frozenset) for fam in self.families for m in fam)


def make_system(points: Sequence[Label],
                families: Mapping[Label, Iterable],
                window_relative: bool = False) -> NeighborhoodSystem:
    """Normalize a point -> family mapping: deduplicate members and order them
    deterministically.  Explicit members must be subsets of the point set."""
    pts = tuple(points)
    index = {p: i for i, p in enumerate(pts)}
    if len(index) != len(pts):
        raise ValueError("duplicate points")
    fams = []
    for p in pts:
        members = list(dict.fromkeys(families.get(p, ())))
        for m in members:
            if isinstance(m, frozenset) and not m <= set(pts):
                raise ValueError(f"neighborhood {sorted(m, key=repr)} at {p!r} "
                                 "is not a subset of the point set")
        members.sort(key=lambda m: member_sort_key(m, index))
        fams.append(tuple(members))
    return NeighborhoodSystem(pts, tuple(fams), window_relative)


# ---------------------------------------------------------------------------
# bitmask backend for explicit systems
# ---------------------------------------------------------------------------

class _Masks:
    def __init__(self, sys: NeighborhoodSystem):
        self.points = sys.points
        self.index = {p: i for i, p in enumerate(sys.points)}
        self.families = [
            [self._mask(m) for m in fam] for fam in sys.families
        ]
        # minimal antichain per point, ascending popcount: enough for
        # "does some neighborhood fit inside X" queries
        self.minimal = [self._minimal(fam) for fam in self.families]

    def _mask(self, member: frozenset) -> int:
        m = 0
        for x in member:
            m |= 1 << self.index[x]
        return m

    @staticmethod
    def _minimal(masks: list[int]) -> list[int]:
        out: list[int] = []
        for m in sorted(set(masks), key=lambda v: v.bit_count()):
            if not any(k & m == k for k in out):
                out.append(m)
        return out

    def unmask(self, m: int) -> frozenset:
        return frozenset(p for p, i in self.index.items() if m >> i & 1)


def _check_n0_masks(mk: _Masks) -> CheckResult:
    for i, fam in enumerate(mk.families):
        if not fam:
            return CheckResult("n0", False, (mk.points[i], None),
                               "empty neighborhood family")
        for m in fam:
            if not m >> i & 1:
                return CheckResult("n0", False, (mk.points[i], mk.unmask(m)),
                                   "neighborhood misses its center")
    return CheckResult("n0", True)


def _check_n1_masks(mk: _Masks) -> CheckResult:
    for i, fam in enumerate(mk.families):
        order = sorted(fam, key=lambda v: v.bit_count())
        for up in fam:
            ok = False
            for wp in order:
                good = True
                bits = wp
                while bits:
                    q = (bits & -bits).bit_length() - 1
                    bits &= bits - 1
                    if not any(uq & up == uq for uq in mk.minimal[q]):
                        good = False
                        break
                if good:
                    ok = True
                    break
            if not ok:
                return CheckResult("n1", False, (mk.points[i], mk.unmask(up)),
                                   "no witness neighborhood works")
    return CheckResult("n1", True)


def _check_n2_masks(mk: _Masks) -> CheckResult:
    for i, fam in enumerate(mk.families):
        for a, up in enumerate(fam):
            for wp in fam[a:]:
                inter = up & wp
                if not any(v & inter == v for v in mk.minimal[i]):
                    return CheckResult(
                        "n2", False, (mk.points[i], mk.unmask(up), mk.unmask(wp)),
                        "no neighborhood inside the intersection")
    return CheckResult("n2", True)


# ---------------------------------------------------------------------------
# generic backend (cofinite / box members)
# ---------------------------------------------------------------------------

def _members_in_window(member, points) -> list:
    if isinstance(member, frozenset):
        return list(member)
    return [p for p in points if p in member]


def _check_n0_generic(sys: NeighborhoodSystem) -> CheckResult:
    for p, fam in zip(sys.points, sys.families):
        if not fam:
            return CheckResult("n0", False, (p, None), "empty neighborhood family")
        for m in fam:
            if p not in m:
                return CheckResult("n0", False, (p, m), "neighborhood misses its center")
    return CheckResult("n0", True)


def _check_n1_generic(sys: NeighborhoodSystem) -> CheckResult:
    fam_of = dict(zip(sys.points, sys.families))
    for p, fam in zip(sys.points, sys.families):
        for up in fam:
            ok = False
            for wp in fam:
                good = True
                for q in _members_in_window(wp, sys.points):
                    if not any(uq.issubset(up) for uq in fam_of[q]):
                        good = False
                        break
                if good:
                    ok = True
                    break
            if not ok:
                detail = "no witness neighborhood works"
                if sys.window_relative:
                    detail += " (window-relative)"
                return CheckResult("n1", False, (p, up), detail)
    return CheckResult("n1", True, None,
                       "window-relative" if sys.window_relative else "")


def _check_n2_generic(sys: NeighborhoodSystem) -> CheckResult:
    for p, fam in zip(sys.points, sys.families):
        for a, up in enumerate(fam):
            for wp in fam[a:]:
                inter = up & wp
                if not any(v.issubset(inter) for v in fam):
                    detail = "no neighborhood inside the intersection"
                    if sys.window_relative:
                        detail += " (window-relative)"
                    return CheckResult("n2", False, (p, up, wp), detail)
    return CheckResult("n2", True, None,
                       "window-relative" if sys.window_relative else "")


# ---------------------------------------------------------------------------
# public checkers
# ---------------------------------------------------------------------------

def check_N0(sys: NeighborhoodSystem) -> CheckResult:
    """Every point carries a non-empty family and each member contains it."""
    if sys.is_explicit():
        return _check_n0_masks(_Masks(sys))
    return _check_n0_generic(sys)


def check_N1(sys: NeighborhoodSystem) -> CheckResult:
    """For each neighborhood U of p there is a W of p such that every q in W
    has a neighborhood inside U."""
    if sys.is_explicit():
        return _check_n1_masks(_Masks(sys))
    return _check_n1_generic(sys)


def check_N2(sys: NeighborhoodSystem) -> CheckResult:
    """Every pair of neighborhoods of p contains a third one of p inside
    their intersection."""
    if sys.is_explicit():
        return _check_n2_masks(_Masks(sys))
    return _check_n2_generic(sys)


@dataclass(frozen=True)
class Classification:
    n0: CheckResult
    n1: CheckResult
    n2: CheckResult
    verdict: str

    def meets(self, type_name: str) -> bool:
        """Does the system satisfy all flags the named type requires?"""
        if type_name not in TYPE_FLAGS:
            raise ValueError(f"unknown type {type_name!r}; expected one of {sorted(TYPE_FLAGS)}")
        return all(getattr(self, flag).passed for flag in TYPE_FLAGS[type_name])

    def lines(self) -> list[str]:
        return [f"verdict: {self.verdict}", f"  {self.n0}", f"  {self.n1}", f"  {self.n2}"]


def classify(sys: NeighborhoodSystem) -> Classification:
    if sys.is_explicit():
        mk = _Masks(sys)
        n0, n1, n2 = _check_n0_masks(mk), _check_n1_masks(mk), _check_n2_masks(mk)
    else:
        n0 = _check_n0_generic(sys)
        n1 = _check_n1_generic(sys)
        n2 = _check_n2_generic(sys)
    if not n0.passed:
        verdict = "not-V"
    elif n1.passed and n2.passed:
        verdict = "Top"
    elif n2.passed:
        verdict = "V_D"
    elif n1.passed:
        verdict = "V_alpha"
    else:
        verdict = "V"
    return Classification(n0, n1, n2, verdict)


# ---------------------------------------------------------------------------
# closure / interior / symmetry
# ---------------------------------------------------------------------------

def closure(sys: NeighborhoodSystem, subset: Iterable[Label]) -> frozenset:
    """Points whose every neighborhood meets the subset."""
    e = frozenset(subset)
    unknown = e - set(sys.points)
    if unknown:
        raise ValueError(f"subset contains unknown points: {sorted(unknown, key=repr)}")
    out = []
    for p, fam in zip(sys.points, sys.families):
        # literal definition: every neighborhood of p meets the subset
        # (vacuously true for an empty family)
        if all(any(x in n for x in e) for n in fam):
            out.append(p)
    return frozenset(out)


def interior(sys: NeighborhoodSystem, subset: Iterable[Label]) -> frozenset:
    """Complement of the closure of the complement."""
    e = frozenset(subset)
    pts = frozenset(sys.points)
    if not e <= pts:
        raise ValueError("subset contains unknown points")
    return pts - closure(sys, pts - e)


def is_symmetric(sys: NeighborhoodSystem) -> CheckResult:
    """p lies in the closure of {q} iff q lies in the closure of {p}."""
    def in_closure_of(p, q) -> bool:
        fam = sys.families[sys.points.index(p)]
        return all(q in n for n in fam)

    for i, p in enumerate(sys.points):
        for q in sys.points[i + 1:]:
            if in_closure_of(p, q) != in_closure_of(q, p):
                return CheckResult("symmetric", False, (p, q),
                                   "one-sided singleton closure")
    return CheckResult("symmetric", True)
