"""Acceptance suite: every criterion exercised at its stated (exact)
tolerance, one printed pass/fail line per criterion.

Run with `pytest -v tests/test_acceptance.py` (add -s to see the lines while
running).  Everything here is exact rational arithmetic; "tolerance" is set
membership and set equality throughout.
"""

import json
import random
import shutil
from fractions import Fraction as F
from importlib import resources

from smtop.cli import main as cli_main
from smtop.fixtures import coin_space, dice_space, example_ecart, ramp_space
from smtop.gtop import check_N0, classify, closure, interior, is_symmetric, make_system
from smtop.neighborhood import (
    conatset, ecart_sphere, ecart_system, entourage, natset, r_sphere,
    r_system, sphere, sphere_family, sphere_system, tail,
)
from smtop.product import (
    box_preservation_trials, product_ecart, product_space, verify_ecart_product,
    verify_product_axioms, verify_product_menger, verify_r_product,
)
from smtop.smspace import build, check_menger
from smtop.distfn import one, step
from smtop.tnorm import product_tnorm

WINDOW = 10


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {num:02d} {name}: {status}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def test_criterion_01_coin_sphere_tables():
    s = coin_space()
    grid = [F(1, 2), F(1), F(3, 2), F(2)]
    mismatches = []
    for p in s.points:
        for u in grid:
            for v in grid:
                expected = frozenset({p}) if u <= 1 and v <= 1 else frozenset(s.points)
                got = sphere(s, p, u, v)
                if got != expected:
                    mismatches.append((p, u, v, sorted(got)))
    _verdict(1, "two-outcome sphere tables", not mismatches,
             f"{2 * len(grid) ** 2} cells checked" if not mismatches else str(mismatches[:3]))


def test_criterion_02_dice_entourage_chain():
    s = dice_space()
    rows = [(F(1, 2), 0, 6), (F(3, 2), 1, 16), (F(5, 2), 2, 24),
            (F(7, 2), 3, 30), (F(9, 2), 4, 34), (F(6), 5, 36)]
    ok = True
    detail = []
    for u, k, size in rows:
        got = entourage(s, u, F(1, 2))
        independent = frozenset((p, q) for p in s.points for q in s.points
                                if abs(int(p) - int(q)) <= k)
        if got != independent or len(got) != size:
            ok = False
        detail.append(str(len(got)))
    _verdict(2, "six-outcome entourage chain", ok, "sizes " + ",".join(detail))


def _expected_f_sphere_tables():
    full = conatset([])
    t1 = {0: natset([]), 1: natset([1]), 2: conatset([2, 3]), 3: conatset([3])}
    t1.update({f: full for f in range(4, WINDOW + 1)})
    t2 = {0: natset([]), 1: natset([2]), 2: conatset([1, 3]), 3: conatset([1, 3]),
          4: conatset([1, 3]), 5: conatset([3]), 6: conatset([3])}
    t2.update({f: full for f in range(7, WINDOW + 1)})
    t3 = {0: natset([]), 1: natset([3]), 2: conatset([2])}
    t3.update({f: full for f in range(3, WINDOW + 1)})
    tout = {0: natset([]), 1: conatset([1, 2, 3])}
    tout.update({f: full for f in range(2, WINDOW + 1)})
    return {1: t1, 2: t2, 3: t3, "out": tout}


def test_criterion_03_ecart_sphere_tables():
    g = example_ecart()
    tables = _expected_f_sphere_tables()
    mismatches = []
    checked = 0
    for p in (1, 2, 3):
        for f in range(WINDOW + 1):
            checked += 1
            if ecart_sphere(g, p, f) != tables[p][f]:
                mismatches.append((p, f))
    for p in (4, 7, 10):
        for f in range(WINDOW + 1):
            checked += 1
            if ecart_sphere(g, p, f) != tables["out"][f]:
                mismatches.append((p, f))
    _verdict(3, "marked-set écart sphere tables", not mismatches,
             f"{checked} (p,f) cells, window {WINDOW}" if not mismatches else str(mismatches))


def test_criterion_04_r_sphere_reproduction():
    ramp = ramp_space(WINDOW)
    ok = r_sphere(ramp, "1", "2", F(1, 4)) == frozenset({"1"})
    empties = 0
    for s in (coin_space(), dice_space(), ramp):
        for p in s.points:
            for u in (F(1, 2), F(1), F(3, 2), F(4)):
                if r_sphere(s, p, p, u) != frozenset():
                    ok = False
                empties += 1
    _verdict(4, "r-sphere worked example", ok, f"{empties} self-spheres empty")


def test_criterion_05_product_axioms_and_menger():
    pairs = [("coin x coin", coin_space(), coin_space()),
             ("coin x dice", coin_space(), dice_space()),
             ("dice x dice", dice_space(), dice_space())]
    ok = True
    for name, a, b in pairs:
        if not verify_product_axioms(a, b).ok:
            ok = False
        if not verify_product_menger(a, b, product_tnorm()).ok:
            ok = False
    _verdict(5, "product spaces satisfy axioms and product-t-norm triangle", ok,
             "coin x coin, coin x dice, dice x dice")


def test_criterion_06_box_preservation_1000_trials():
    report = box_preservation_trials(trials=1000, seed=0,
                                     types=("V", "V_alpha", "V_D", "Top"))
    detail = "; ".join(r.detail for r in report.results)
    _verdict(6, "box products preserve V/V_alpha/V_D/Top", report.ok, detail)


def test_criterion_07_product_ecart_identity_and_type():
    g = example_ecart()
    rep = verify_ecart_product(g, g, (WINDOW, WINDOW), window=WINDOW)
    sys_ = ecart_system(product_ecart(g, g), (WINDOW, WINDOW), window=WINDOW)
    n0 = check_N0(sys_)
    _verdict(7, "product écart spheres factor as boxes; system is type V",
             rep.ok and n0.passed, rep.results[0].detail)


def test_criterion_08_product_r_systems_valid():
    ok = True
    for a, b in ((coin_space(), coin_space()), (coin_space(), dice_space())):
        rep = verify_r_product(a, b)
        if not rep.ok or not rep.result("n0").passed:
            ok = False
    _verdict(8, "product R-systems are valid type-V systems", ok,
             "coin x coin, coin x dice")


# ---------------------------------------------------------------------------
# criterion 9: exhaustive invariant suites on the bundled spaces
# ---------------------------------------------------------------------------

def _family_oracle(s, u_grid, v_grid):
    """Brute-force family via the defining inequality on a dense grid."""
    fams = {}
    for p in s.points:
        seen = set()
        for u in u_grid:
            prof = {q: s.dist(p, q).value_at(u) for q in s.points}
            for v in v_grid:
                seen.add(frozenset(q for q in s.points if prof[q] > 1 - v))
        fams[p] = seen
    return fams


def test_criterion_09_invariant_suites():
    spaces = [("coin", coin_space()), ("dice", dice_space()), ("ramp", ramp_space(WINDOW))]
    problems = []

    params = [F(1, 2), F(1), F(3, 2), F(3), F(11, 2)]
    vs = [F(1, 4), F(1, 2), F(1), F(3, 2)]
    for name, s in spaces:
        # sphere monotonicity in (u, v) and entourage symmetry + slice law
        for p in s.points:
            for i, u in enumerate(params):
                for v_i, v in enumerate(vs):
                    sp = sphere(s, p, u, v)
                    for u2 in params[i:]:
                        for v2 in vs[v_i:]:
                            if not sp <= sphere(s, p, u2, v2):
                                problems.append((name, "monotone", p, u, v))
        for u in params:
            for v in vs:
                ent = entourage(s, u, v)
                if any((q, p) not in ent for p, q in ent):
                    problems.append((name, "entourage-symmetry", u, v))
                for p in s.points:
                    if sphere(s, p, u, v) != frozenset(q for q in s.points
                                                       if (p, q) in ent):
                        problems.append((name, "slice-law", p, u, v))

        # tail complement identity at breakpoints and midpoints
        for p, q in s.pairs():
            f = s.dist(p, q)
            pts = f.breakpoints()
            xs = pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]
            g = tail(f)
            for x in xs:
                if f.value_at(x) + g.value_at(x) != 1:
                    problems.append((name, "tail-complement", p, q, x))

        # closure/interior duality, closure monotonicity, symmetry
        sys_ = sphere_system(s)
        pts = frozenset(s.points)
        subsets = [frozenset(), frozenset(list(s.points)[:1]),
                   frozenset(list(s.points)[:2]), pts]
        for e in subsets:
            if interior(sys_, e) != pts - closure(sys_, pts - e):
                problems.append((name, "duality", sorted(e)))
            for e2 in subsets:
                if e <= e2 and not closure(sys_, e) <= closure(sys_, e2):
                    problems.append((name, "closure-monotone", sorted(e), sorted(e2)))
            if not e <= closure(sys_, e):
                problems.append((name, "closure-expansive", sorted(e)))
        if not is_symmetric(sys_).passed:
            problems.append((name, "symmetry"))
        if not is_symmetric(r_system(s)).passed:
            problems.append((name, "r-system-symmetry"))

    # sphere_family equals the dense-grid brute-force oracle exactly
    oracle_grids = {
        "coin": ([F(k, 2) for k in range(1, 5)], [F(1, 2), F(1), F(3, 2)]),
        "dice": ([F(k, 2) for k in range(1, 14)], [F(1, 2), F(1), F(3, 2)]),
        # ramp profile values at half-integer u have denominators <= 18, so
        # consecutive distinct values differ by at least 1/324; a v-grid in
        # steps of 1/648 separates every pair
        "ramp": ([F(k, 2) for k in range(1, 22)],
                 [F(k, 648) for k in range(1, 649)] + [F(3, 2)]),
    }
    for name, s in spaces:
        u_grid, v_grid = oracle_grids[name]
        oracle = _family_oracle(s, u_grid, v_grid)
        for p in s.points:
            if sphere_family(s, p) != frozenset(oracle[p]):
                problems.append((name, "family-oracle", p))

    _verdict(9, "invariant suites on bundled spaces", not problems,
             str(problems[:5]) if problems else "monotonicity, symmetry, slice law, "
             "complements, duality, family oracle")


def test_criterion_10_negative_controls(tmp_path, capsys):
    problems = []

    # Menger-violating space is reported with an independently valid witness
    bad = build(["p", "q", "r"],
                {("p", "q"): step(1), ("q", "r"): step(1), ("p", "r"): step(10)})
    t = product_tnorm()
    report = check_menger(bad, t)
    if report.ok:
        problems.append("menger violation not detected")
    else:
        p, q, r, x, y = report.failures()[0].witness
        lhs = bad.dist(p, r).value_at(x + y)
        rhs = t(bad.dist(p, q).value_at(x), bad.dist(q, r).value_at(y))
        if not lhs < rhs:
            problems.append("menger witness does not violate the inequality")

    # the N1-failing three-point system classifies as V_D
    nsys = make_system(["a", "b", "c"],
                       {"a": [frozenset({"a", "b"})],
                        "b": [frozenset({"b", "c"})],
                        "c": [frozenset({"c"})]})
    cls = classify(nsys)
    if cls.verdict != "V_D" or cls.n1.passed:
        problems.append(f"expected V_D, got {cls.verdict}")

    # tampered golden fixture fails with a diff
    data = resources.files("smtop.data")
    for fname in ("coin.space", "dice.space", "ramp10.space", "example3.ecart"):
        shutil.copy(str(data / fname), tmp_path / fname)
    doc = json.loads((tmp_path / "coin.space").read_text())
    doc["entries"][0]["fn"]["a"] = "2"
    (tmp_path / "coin.space").write_text(json.dumps(doc))
    code = cli_main(["paper-examples", "--fixtures", str(tmp_path)])
    out = capsys.readouterr().out
    if code == 0 or "FAIL" not in out or "expected" not in out:
        problems.append("tampered fixture not reported with a diff")

    _verdict(10, "negative controls", not problems,
             str(problems) if problems else "menger witness, V_D verdict, tamper diff")
