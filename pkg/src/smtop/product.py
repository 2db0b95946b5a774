"""Cartesian products of spaces, systems and écarts, with brute-force
verification of the five product-preservation statements.

The product of two spaces multiplies distance distributions pointwise; the
product of two neighborhood systems is the box system (one neighborhood from
each factor).  Product écarts take values in the componentwise-strict product
order so that their spheres factor as boxes.  The randomized suite generates
small systems of a verified type, boxes them, and demands the type survive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import count

from .distfn import multiply
from .gtop import (Classification, NeighborhoodSystem, TYPE_FLAGS, check_N0,
                   classify, make_system)
from .neighborhood import BoxSet, Ecart, ProductEcart, ecart_ground_points, ecart_sphere
from .reports import CheckResult, Report
from .smspace import Label, SMSpace, build, check_menger, check_sm_axioms
from .tnorm import TNorm, product_tnorm


def product_space(s1: SMSpace, s2: SMSpace) -> SMSpace:
    """Space on pair labels whose distributions are pointwise products of the
    factor distributions."""
    points = [(p1, p2) for p1 in s1.points for p2 in s2.points]
    entries = {}
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            entries[p, q] = multiply(s1.dist(p[0], q[0]), s2.dist(p[1], q[1]))
    return build(points, entries)


def verify_product_axioms(s1: SMSpace, s2: SMSpace) -> Report:
    """Factors must satisfy the space axioms; then the product must too."""
    results = []
    for name, rep in (("factor-1", check_sm_axioms(s1)), ("factor-2", check_sm_axioms(s2))):
        if not rep.ok:
            first = rep.failures()[0]
            results.append(CheckResult(f"{name}-precondition", False, first.witness,
                                       f"factor violation: {first.name}: {first.detail}"))
    if results:
        return Report("product space axioms", tuple(results))
    prod = check_sm_axioms(product_space(s1, s2))
    return Report("product space axioms", prod.results)


def verify_product_menger(s1: SMSpace, s2: SMSpace, t: TNorm | None = None) -> Report:
    """Factors must satisfy the triangle inequality under t (product t-norm
    by default); then the product must too."""
    t = t or product_tnorm()
    results = []
    for name, rep in (("factor-1", check_menger(s1, t)), ("factor-2", check_menger(s2, t))):
        if not rep.ok:
            first = rep.failures()[0]
            results.append(CheckResult(f"{name}-precondition", False, first.witness,
                                       f"factor violation: {first.detail}"))
    if results:
        return Report("product Menger inequality", tuple(results))
    prod = check_menger(product_space(s1, s2), t)
    return Report("product Menger inequality", prod.results)


# ---------------------------------------------------------------------------
# box systems and type preservation
# ---------------------------------------------------------------------------

def _box_member(a, b):
    if isinstance(a, frozenset) and isinstance(b, frozenset):
        return frozenset((x, y) for x in a for y in b)
    return BoxSet(a, b)


def box_system(sys1: NeighborhoodSystem, sys2: NeighborhoodSystem) -> NeighborhoodSystem:
    """System on pair points whose neighborhoods are products of one
    neighborhood from each factor."""
    points = [(p, q) for p in sys1.points for q in sys2.points]
    families = {}
    for p, fam1 in zip(sys1.points, sys1.families):
        for q, fam2 in zip(sys2.points, sys2.families):
            families[p, q] = [_box_member(a, b) for a in fam1 for b in fam2]
    return make_system(points, families,
                       window_relative=sys1.window_relative or sys2.window_relative)


def verify_type_preservation(sys1: NeighborhoodSystem, sys2: NeighborhoodSystem,
                             which: str) -> Report:
    """Check that the box of two systems of the given type keeps the type.
    A factor that does not meet the type is reported, never silently skipped."""
    if which not in TYPE_FLAGS:
        raise ValueError(f"unknown type {which!r}")
    results = []
    cls1, cls2 = classify(sys1), classify(sys2)
    for name, cls in (("factor-1", cls1), ("factor-2", cls2)):
        if not cls.meets(which):
            missing = [f for f in TYPE_FLAGS[which] if not getattr(cls, f).passed]
            results.append(CheckResult(f"{name}-precondition", False,
                                       getattr(cls, missing[0]).witness,
                                       f"factor is {cls.verdict}, not {which}"))
    if results:
        return Report(f"box preserves {which}", tuple(results))
    box_cls = classify(box_system(sys1, sys2))
    flags = TYPE_FLAGS[which]
    results = [getattr(box_cls, f) for f in flags]
    if not box_cls.meets(which):
        results.append(CheckResult("preservation", False, None,
                                   f"box classifies as {box_cls.verdict}; "
                                   "counterexample or implementation bug - investigate"))
    return Report(f"box preserves {which}", tuple(results))


# ---------------------------------------------------------------------------
# product écarts
# ---------------------------------------------------------------------------

def product_ecart(g1: Ecart, g2: Ecart) -> ProductEcart:
    """Componentwise écart on the product ground set."""
    return ProductEcart(g1, g2)


def verify_ecart_product(g1: Ecart, g2: Ecart, f_bound, window: int = 10) -> Report:
    """Dual-route check of the product-écart spheres: the structural box
    construction against a brute-force evaluation of the defining inequality
    over the windowed ground set, for every candidate f pair."""
    prod = product_ecart(g1, g2)
    poset = prod.poset
    points = ecart_ground_points(prod, window)
    candidates = poset.candidates(f_bound)
    checked = 0
    for p in points:
        for f in candidates:
            box = ecart_sphere(prod, p, f)
            direct = frozenset(q for q in points if poset.lt(prod.value(p, q), f))
            rendered = frozenset(q for q in points if q in box)
            checked += 1
            if direct != rendered:
                return Report("product écart spheres", (CheckResult(
                    "sphere-box-identity", False, (p, f),
                    f"direct {sorted(direct)} != box {sorted(rendered)}"),))
    return Report("product écart spheres", (CheckResult(
        "sphere-box-identity", True, None,
        f"{checked} center/f combinations on a {window}-window"),))


# ---------------------------------------------------------------------------
# R-system of a product space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SystemComparison:
    relation: str  # equal | a-refines-b | b-refines-a | incomparable
    witness_ab: tuple | None = None  # (p, member of b) with no a-member inside
    witness_ba: tuple | None = None


def _refines(a: NeighborhoodSystem, b: NeighborhoodSystem):
    """a refines b when every b-neighborhood contains an a-neighborhood at
    each point; returns a witness (p, member) when it does not."""
    fam_a = dict(zip(a.points, a.families))
    for p, fam in zip(b.points, b.families):
        mine = fam_a[p]
        for member in fam:
            if not any(m.issubset(member) for m in mine):
                return (p, member)
    return None


def compare_systems(a: NeighborhoodSystem, b: NeighborhoodSystem) -> SystemComparison:
    if set(a.points) != set(b.points):
        raise ValueError("systems live on different point sets")
    wab = _refines(a, b)
    wba = _refines(b, a)
    if wab is None and wba is None:
        relation = "equal"
    elif wab is None:
        relation = "a-refines-b"
    elif wba is None:
        relation = "b-refines-a"
    else:
        relation = "incomparable"
    return SystemComparison(relation, wab, wba)


def verify_r_product(s1: SMSpace, s2: SMSpace) -> Report:
    """The R-system of the product space must be a valid type-V system; its
    relation to the box of the factor R-systems is reported as information."""
    from .neighborhood import r_system

    results = []
    for name, rep in (("factor-1", check_sm_axioms(s1)), ("factor-2", check_sm_axioms(s2))):
        if not rep.ok:
            first = rep.failures()[0]
            results.append(CheckResult(f"{name}-precondition", False, first.witness,
                                       f"factor violation: {first.name}"))
    if results:
        return Report("product R-system", tuple(results))

    prod = product_space(s1, s2)
    rsys = r_system(prod)
    n0 = check_N0(rsys)
    results.append(n0)
    cls = classify(rsys)
    results.append(CheckResult("classification", True, None, f"verdict: {cls.verdict}"))
    boxed = box_system(r_system(s1), r_system(s2))
    cmp = compare_systems(rsys, boxed)
    results.append(CheckResult("box-comparison", True, None,
                               f"direct vs box of factor R-systems: {cmp.relation}"))
    return Report("product R-system", tuple(results))


# ---------------------------------------------------------------------------
# randomized preservation suite
# ---------------------------------------------------------------------------

_LETTERS = "abcdefgh"


def _random_subset(rng: random.Random, pts, center) -> frozenset:
    return frozenset({center} | {p for p in pts if p != center and rng.random() < 0.5})


def _style_plain(rng, pts, max_nbhds):
    return {p: {_random_subset(rng, pts, p) for _ in range(rng.randint(1, max_nbhds))}
            for p in pts}


def _style_chain(rng, pts, max_nbhds, from_singleton=False):
    fams = {}
    for p in pts:
        current = frozenset({p}) if from_singleton else _random_subset(rng, pts, p)
        chain = [current]
        while len(chain) < rng.randint(1, max_nbhds):
            current = current | _random_subset(rng, pts, p)
            chain.append(current)
        fams[p] = set(chain)
    return fams


def _style_singleton(rng, pts, max_nbhds):
    fams = _style_plain(rng, pts, max_nbhds)
    for p in pts:
        trimmed = set(list(fams[p])[:max_nbhds - 1])
        trimmed.add(frozenset({p}))
        fams[p] = trimmed
    return fams


def _style_full(rng, pts, max_nbhds):
    full = frozenset(pts)
    return {p: {full} for p in pts}


_GUARANTEED = {
    "V": lambda rng, pts, m: _style_plain(rng, pts, m),
    "V_alpha": lambda rng, pts, m: _style_singleton(rng, pts, m),
    "V_D": lambda rng, pts, m: _style_chain(rng, pts, m),
    "Top": lambda rng, pts, m: _style_chain(rng, pts, m, from_singleton=True),
}

_STYLES = {
    "V": ("plain", "plain", "plain", "chain", "singleton", "full"),
    "V_alpha": ("singleton", "singleton", "plain", "chain0", "full"),
    "V_D": ("chain", "chain", "plain", "chain0", "full"),
    "Top": ("chain0", "chain0", "plain", "chain", "singleton", "full"),
}


def _generate(rng, style, pts, max_nbhds):
    if style == "plain":
        return _style_plain(rng, pts, max_nbhds)
    if style == "chain":
        return _style_chain(rng, pts, max_nbhds)
    if style == "chain0":
        return _style_chain(rng, pts, max_nbhds, from_singleton=True)
    if style == "singleton":
        return _style_singleton(rng, pts, max_nbhds)
    return _style_full(rng, pts, max_nbhds)


def random_typed_system(rng: random.Random, type_name: str,
                        max_points: int = 5, max_nbhds: int = 4) -> NeighborhoodSystem:
    """A random small system whose classification meets the named type."""
    if type_name not in TYPE_FLAGS:
        raise ValueError(f"unknown type {type_name!r}")
    for attempt in count():
        n = rng.randint(2, max_points)
        pts = tuple(_LETTERS[:n])
        if attempt >= 25:
            fams = _GUARANTEED[type_name](rng, pts, max_nbhds)
        else:
            fams = _generate(rng, rng.choice(_STYLES[type_name]), pts, max_nbhds)
        sys = make_system(pts, fams)
        if classify(sys).meets(type_name):
            return sys


def box_preservation_trials(trials: int = 1000, seed: int = 0,
                            types: tuple[str, ...] = ("V", "V_alpha", "V_D", "Top"),
                            max_points: int = 5, max_nbhds: int = 4) -> Report:
    """Generate `trials` pairs of verified-type systems per type and demand
    the box system keep the type every single time."""
    rng = random.Random(seed)
    results = []
    for type_name in types:
        failures = 0
        first_witness = None
        for k in range(trials):
            s1 = random_typed_system(rng, type_name, max_points, max_nbhds)
            s2 = random_typed_system(rng, type_name, max_points, max_nbhds)
            box_cls = classify(box_system(s1, s2))
            if not box_cls.meets(type_name):
                failures += 1
                if first_witness is None:
                    first_witness = (type_name, k, box_cls.verdict)
        results.append(CheckResult(
            f"box-preserves-{type_name}", failures == 0, first_witness,
            f"{trials - failures}/{trials} pairs preserved"))
    return Report("box type preservation", tuple(results))
