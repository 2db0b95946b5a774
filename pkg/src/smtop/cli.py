"""Command-line front end.

Every command loads its inputs from JSON files (see `files`), prints
line-oriented text by default and the same data as JSON under --json, and
exits 0 iff no check in the invocation failed.  Load failures exit 2
(parse), 3 (schema) or 4 (validation).  The environment variable
SMTOP_WINDOW bounds the rendering window for systems over the positive
integers (default 10).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import files
from .distfn import as_fraction, validate as validate_fn
from .fixtures import coin_space, dice_space, example_ecart
from .gtop import (NeighborhoodSystem, check_N0, classify, closure, interior,
                   is_symmetric)
from .neighborhood import (DEFAULT_WINDOW, Ecart, MarkedNatEcart, NatSet,
                           conatset, ecart_sphere, ecart_system, entourage,
                           natset, r_sphere, r_system, sphere, sphere_system)
from .product import (box_preservation_trials, product_ecart, product_space,
                      verify_ecart_product, verify_product_axioms,
                      verify_product_menger, verify_r_product)
from .reports import CheckResult, Report, plain
from .smspace import SMSpace, check_menger, check_sm_axioms
from .tnorm import minimum_tnorm, product_tnorm, table_tnorm


def _window() -> int:
    raw = os.environ.get("SMTOP_WINDOW", "")
    try:
        w = int(raw) if raw else DEFAULT_WINDOW
    except ValueError:
        raise files.SchemaError(f"SMTOP_WINDOW must be an integer, got {raw!r}")
    if w < 1:
        raise files.SchemaError(f"SMTOP_WINDOW must be positive, got {w}")
    return w


def _label_str(p) -> str:
    if isinstance(p, tuple):
        return "(" + ",".join(_label_str(x) for x in p) + ")"
    return str(p)


def _parse_label(s: SMSpace, raw: str):
    if raw in s:
        return raw
    if "," in raw:
        cand = tuple(raw.split(","))
        if cand in s:
            return cand
    raise files.SchemaError(f"unknown point {raw!r}")


def _fmt_pointset(s: SMSpace, members) -> str:
    ordered = sorted(members, key=s.index)
    return "{" + ", ".join(_label_str(p) for p in ordered) + "}"


def _fmt_member(member, sys_points=None) -> str:
    if isinstance(member, frozenset):
        if sys_points is not None:
            index = {p: i for i, p in enumerate(sys_points)}
            ordered = sorted(member, key=index.__getitem__)
        else:
            ordered = sorted(member, key=repr)
        return "{" + ", ".join(_label_str(p) for p in ordered) + "}"
    return str(member)


def _members_plain(member):
    if isinstance(member, frozenset):
        return sorted((plain(x) for x in member), key=repr)
    return plain(member)


def _rat_arg(raw: str, name: str) -> Fraction:
    try:
        return as_fraction(raw)
    except ValueError as exc:
        raise files.ParseError(f"{name}: {exc}") from exc


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _report_out(args, report: Report) -> int:
    _emit(args, report.to_dict(), report.lines())
    return 0 if report.ok else 1


def _tnorm_arg(raw: str):
    if raw in ("product", "prod"):
        return product_tnorm()
    if raw in ("min", "minimum"):
        return minimum_tnorm()
    doc = files._read_json(raw)
    if not isinstance(doc, dict) or "grid" not in doc or "values" not in doc:
        raise files.SchemaError(f"{raw}: t-norm table needs grid and values")
    grid = [files._rat(g, f"{raw}: grid") for g in doc["grid"]]
    values = [[files._rat(v, f"{raw}: values") for v in row] for row in doc["values"]]
    try:
        return table_tnorm(grid, values)
    except ValueError as exc:
        raise files.ValidationError(f"{raw}: {exc}") from exc


# ---------------------------------------------------------------------------
# simple commands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = files.load(args.file)
    if isinstance(obj, SMSpace):
        for p, q in obj.pairs():
            rep = validate_fn(obj.dist(p, q))
            if not rep.ok:  # unreachable via load(), kept as a belt
                print(f"invalid function at ({p}, {q})", file=sys.stderr)
                return 4
        summary = f"OK: statistical metric space with {len(obj.points)} points"
    else:
        summary = "OK: generalized écart"
    _emit(args, {"ok": True, "summary": summary}, [summary])
    return 0


def cmd_sphere(args) -> int:
    s = files.load_space(args.space)
    p = _parse_label(s, args.p)
    got = sphere(s, p, _rat_arg(args.u, "u"), _rat_arg(args.v, "v"))
    _emit(args, {"sphere": [plain(_label_str(x)) for x in sorted(got, key=s.index)]},
          [_fmt_pointset(s, got)])
    return 0


def cmd_entourage(args) -> int:
    s = files.load_space(args.space)
    got = entourage(s, _rat_arg(args.u, "u"), _rat_arg(args.v, "v"))
    ordered = sorted(got, key=lambda pq: (s.index(pq[0]), s.index(pq[1])))
    text = "{" + ", ".join(f"({_label_str(p)},{_label_str(q)})" for p, q in ordered) + "}"
    _emit(args, {"entourage": [[_label_str(p), _label_str(q)] for p, q in ordered],
                 "size": len(ordered)},
          [text, f"size: {len(ordered)}"])
    return 0


def cmd_ecart_sphere(args) -> int:
    g = files.load_ecart(args.ecart)
    p = _ecart_point(g, args.p)
    f = _poset_elem(g, args.f)
    got = ecart_sphere(g, p, f)
    w = _window()
    if isinstance(got, NatSet):
        rendered = got.render(w)
        _emit(args, {"sphere": plain(got), "window": rendered},
              [str(got), f"window({w}): " + "{" + ", ".join(map(str, rendered)) + "}"])
    else:
        _emit(args, {"sphere": _members_plain(got)}, [_fmt_member(got)])
    return 0


def _ecart_point(g: Ecart, raw: str):
    if isinstance(g, MarkedNatEcart):
        try:
            return int(raw)
        except ValueError:
            raise files.SchemaError(f"écart points are positive integers, got {raw!r}")
    return raw


def _poset_elem(g: Ecart, raw: str):
    try:
        return int(raw)
    except ValueError:
        return raw


def cmd_r_sphere(args) -> int:
    s = files.load_space(args.space)
    p = _parse_label(s, args.p)
    r = _parse_label(s, args.r)
    got = r_sphere(s, p, r, _rat_arg(args.u, "u"))
    _emit(args, {"sphere": [_label_str(x) for x in sorted(got, key=s.index)]},
          [_fmt_pointset(s, got)])
    return 0


# ---------------------------------------------------------------------------
# families and systems
# ---------------------------------------------------------------------------

def _derive_system(obj, kind: str | None, bound, window: int) -> NeighborhoodSystem:
    if isinstance(obj, SMSpace):
        kind = kind or "uv"
        if kind == "uv":
            return sphere_system(obj)
        if kind == "r":
            return r_system(obj)
        raise files.SchemaError(f"kind {kind!r} does not apply to a space file")
    kind = kind or "ecart"
    if kind != "ecart":
        raise files.SchemaError(f"kind {kind!r} does not apply to an écart file")
    b = bound if bound is not None else window
    f_bound = _bound_for(obj, b)
    return ecart_system(obj, f_bound, window)


def _bound_for(g: Ecart, b):
    poset = g.poset
    from .neighborhood import ProductPoset
    if isinstance(poset, ProductPoset):
        return (b, b)
    return b


def _system_payload(sys: NeighborhoodSystem) -> dict:
    return {
        "points": [plain(_label_str(p)) for p in sys.points],
        "families": [[_members_plain(m) for m in fam] for fam in sys.families],
        "window_relative": sys.window_relative,
    }


def _system_lines(sys: NeighborhoodSystem) -> list[str]:
    out = []
    for p, fam in zip(sys.points, sys.families):
        sets = "  ".join(_fmt_member(m, sys.points) for m in fam)
        out.append(f"{_label_str(p)}: {sets}")
    if sys.window_relative:
        out.append("(window-relative)")
    return out


def cmd_family(args) -> int:
    obj = files.load(args.file)
    window = _window()
    sys_ = _derive_system(obj, args.kind, args.bound, window)
    if args.at is not None:
        if isinstance(obj, SMSpace):
            p = _parse_label(obj, args.at)
        else:
            p = _ecart_point(obj, args.at)
        if p not in sys_.points:
            raise files.SchemaError(f"point {args.at!r} not in the derived system")
        fam = sys_.family(p)
        _emit(args, {"point": plain(_label_str(p)),
                     "family": [_members_plain(m) for m in fam]},
              [_fmt_member(m, sys_.points) for m in fam])
        return 0
    if args.json and sys_.is_explicit():
        print(json.dumps(files.system_to_dict(sys_), indent=2))
        return 0
    _emit(args, _system_payload(sys_), _system_lines(sys_))
    return 0


def _load_any_system(path: str, bound, window: int) -> NeighborhoodSystem:
    doc = files._read_json(path)
    if isinstance(doc, dict) and "families" in doc:
        return files.load_system(path)
    obj = files.load(path)
    return _derive_system(obj, None, bound, window)


def cmd_classify(args) -> int:
    sys_ = _load_any_system(args.system, args.bound, _window())
    cls = classify(sys_)
    payload = {
        "verdict": cls.verdict,
        "n0": {"passed": cls.n0.passed, "witness": plain(cls.n0.witness)},
        "n1": {"passed": cls.n1.passed, "witness": plain(cls.n1.witness)},
        "n2": {"passed": cls.n2.passed, "witness": plain(cls.n2.witness)},
        "window_relative": sys_.window_relative,
    }
    _emit(args, payload, cls.lines())
    return 0


def cmd_closure(args) -> int:
    return _closure_like(args, closure)


def cmd_interior(args) -> int:
    return _closure_like(args, interior)


def _closure_like(args, op) -> int:
    sys_ = _load_any_system(args.system, None, _window())
    index = {p: i for i, p in enumerate(sys_.points)}
    subset = []
    for raw in args.labels:
        p = raw if raw in index else (tuple(raw.split(",")) if "," in raw else raw)
        if p not in index:
            raise files.SchemaError(f"unknown point {raw!r}")
        subset.append(p)
    got = op(sys_, subset)
    ordered = sorted(got, key=index.__getitem__)
    _emit(args, {op.__name__: [plain(_label_str(p)) for p in ordered]},
          ["{" + ", ".join(_label_str(p) for p in ordered) + "}"])
    return 0


def cmd_symmetric(args) -> int:
    sys_ = _load_any_system(args.system, None, _window())
    res = is_symmetric(sys_)
    _emit(args, {"symmetric": res.passed, "witness": plain(res.witness)}, [str(res)])
    return 0 if res.passed else 1


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def cmd_product(args) -> int:
    s1 = files.load_space(args.space1)
    s2 = files.load_space(args.space2)
    prod = product_space(s1, s2)
    if args.emit == "space":
        print(json.dumps(files.space_to_dict(prod), indent=2))
        return 0
    sys_ = sphere_system(prod)
    if args.emit == "spheres":
        if args.json:
            print(json.dumps(files.system_to_dict(sys_), indent=2))
        else:
            for line in _system_lines(sys_):
                print(line)
        return 0
    cls = classify(sys_)
    _emit(args, {"verdict": cls.verdict}, cls.lines())
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.target == "sm":
        return _report_out(args, check_sm_axioms(files.load_space(args.space1)))
    if args.target == "menger":
        t = _tnorm_arg(args.tnorm)
        return _report_out(args, check_menger(files.load_space(args.space1), t))
    if args.target == "product":
        s1 = files.load_space(args.space1)
        s2 = files.load_space(args.space2)
        t = _tnorm_arg(args.tnorm)
        rep1 = verify_product_axioms(s1, s2)
        rep2 = verify_product_menger(s1, s2, t)
        combined = Report("product verification", rep1.results + rep2.results)
        return _report_out(args, combined)
    if args.target == "theorems":
        return _verify_theorems(args)
    raise files.SchemaError(f"unknown verify target {args.target!r}")


def _verify_theorems(args) -> int:
    window = _window()
    results = []

    trials = box_preservation_trials(trials=args.trials, seed=args.seed,
                                     types=tuple(args.types.split(",")))
    results.extend(trials.results)

    g = example_ecart()
    ecart_rep = verify_ecart_product(g, g, (window, window), window)
    results.extend(ecart_rep.results)
    prod_sys = ecart_system(product_ecart(g, g), (window, window), window)
    n0 = check_N0(prod_sys)
    results.append(CheckResult("ecart-product-type-V", n0.passed, n0.witness,
                               "product écart system is a valid type-V system"
                               if n0.passed else n0.detail))

    for name, (a, b) in (("coin x coin", (coin_space(), coin_space())),
                         ("coin x dice", (coin_space(), dice_space()))):
        rep = verify_r_product(a, b)
        ok = rep.ok
        detail = "; ".join(r.detail for r in rep.results if r.detail)
        results.append(CheckResult(f"r-product {name}", ok,
                                   None if ok else rep.failures()[0].witness, detail))

    return _report_out(args, Report("product theorems", tuple(results)))


# ---------------------------------------------------------------------------
# golden example reproduction
# ---------------------------------------------------------------------------

def _fixture_path(fixdir: str | None, name: str) -> str:
    if fixdir is not None:
        return os.path.join(fixdir, name)
    return str(resources.files("smtop.data").joinpath(name))


def _ex1_checks(fixdir) -> list[CheckResult]:
    s = files.load_space(_fixture_path(fixdir, "coin.space"))
    out = []
    grid = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]
    for p in s.points:
        both = frozenset(s.points)
        fail = None
        for u in grid:
            for v in grid:
                expected = frozenset({p}) if u <= 1 and v <= 1 else both
                got = sphere(s, p, u, v)
                if got != expected:
                    fail = (p, u, v)
                    detail = (f"N_{p}({u},{v}) = {_fmt_pointset(s, got)}, "
                              f"expected {_fmt_pointset(s, expected)}")
                    break
            if fail:
                break
        out.append(CheckResult(f"sphere-table-p={p}", fail is None, fail,
                               "" if fail is None else detail))
    return out


def _ex2_checks(fixdir) -> list[CheckResult]:
    s = files.load_space(_fixture_path(fixdir, "dice.space"))
    out = []
    rows = [(Fraction(1, 2), 0, 6), (Fraction(3, 2), 1, 16), (Fraction(5, 2), 2, 24),
            (Fraction(7, 2), 3, 30), (Fraction(9, 2), 4, 34), (Fraction(6), 5, 36)]
    v = Fraction(1, 2)
    for u, k, size in rows:
        got = entourage(s, u, v)
        expected = frozenset((p, q) for p in s.points for q in s.points
                             if abs(int(p) - int(q)) <= k)
        ok = got == expected and len(got) == size
        out.append(CheckResult(
            f"entourage-u={u}", ok, None if ok else (u, v),
            f"|U| = {len(got)}" if ok else
            f"|U| = {len(got)}, expected {size} with d <= {k}"))
    full = frozenset((p, q) for p in s.points for q in s.points)
    got = entourage(s, Fraction(1, 2), Fraction(3, 2))
    ok = got == full
    out.append(CheckResult("entourage-v>1", ok, None if ok else (Fraction(1, 2), Fraction(3, 2)),
                           "whole square" if ok else f"|U| = {len(got)}, expected 36"))
    return out


def _ex3_expected(window: int):
    full = conatset([])
    tables = {
        1: {0: natset([]), 1: natset([1]), 2: conatset([2, 3]), 3: conatset([3])},
        2: {0: natset([]), 1: natset([2]), 2: conatset([1, 3]), 3: conatset([1, 3]),
            4: conatset([1, 3]), 5: conatset([3]), 6: conatset([3])},
        3: {0: natset([]), 1: natset([3]), 2: conatset([2])},
    }
    floor = {1: 4, 2: 7, 3: 3}
    for p, tab in tables.items():
        for f in range(window + 1):
            if f >= floor[p]:
                tab[f] = full
    unmarked = {0: natset([])}
    unmarked[1] = conatset([1, 2, 3])
    for f in range(2, window + 1):
        unmarked[f] = full
    return tables, unmarked


def _ex3_checks(fixdir) -> list[CheckResult]:
    g = files.load_ecart(_fixture_path(fixdir, "example3.ecart"))
    window = _window()
    tables, unmarked = _ex3_expected(window)
    out = []
    for p, tab in tables.items():
        fail = None
        for f in range(window + 1):
            got = ecart_sphere(g, p, f)
            if got != tab[f]:
                fail = (p, f)
                detail = f"N_{p}({f}) = {got}, expected {tab[f]}"
                break
        out.append(CheckResult(f"f-sphere-table-p={p}", fail is None, fail,
                               "" if fail is None else detail))
    fail = None
    for p in (4, 7, max(4, window)):
        for f in range(window + 1):
            got = ecart_sphere(g, p, f)
            if got != unmarked[f]:
                fail = (p, f)
                detail = f"N_{p}({f}) = {got}, expected {unmarked[f]}"
                break
        if fail:
            break
    out.append(CheckResult("f-sphere-table-unmarked", fail is None, fail,
                           "" if fail is None else detail))
    return out


def _rsphere_checks(fixdir) -> list[CheckResult]:
    ramp = files.load_space(_fixture_path(fixdir, "ramp10.space"))
    out = []
    got = r_sphere(ramp, "1", "2", Fraction(1, 4))
    ok = got == frozenset({"1"})
    out.append(CheckResult("r-sphere-1-2-1/4", ok, None if ok else ("1", "2", Fraction(1, 4)),
                           f"N = {_fmt_pointset(ramp, got)}"))
    spaces = [("coin", files.load_space(_fixture_path(fixdir, "coin.space"))),
              ("dice", files.load_space(_fixture_path(fixdir, "dice.space"))),
              ("ramp", ramp)]
    fail = None
    for name, s in spaces:
        for p in s.points:
            for u in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(5)):
                if r_sphere(s, p, p, u):
                    fail = (name, p, u)
                    break
            if fail:
                break
        if fail:
            break
    out.append(CheckResult("r-sphere-center-empty", fail is None, fail,
                           "N_p(p; u) is empty on every bundled space" if fail is None
                           else "non-empty self-sphere"))
    return out


_GROUPS = {
    "ex1": ("example-1 coin sphere tables", _ex1_checks),
    "ex2": ("example-2 dice entourages", _ex2_checks),
    "ex3": ("example-3 écart sphere tables", _ex3_checks),
    "rsphere": ("r-sphere worked example", _rsphere_checks),
}


def cmd_paper_examples(args) -> int:
    names = [args.group] if args.group else list(_GROUPS)
    if args.group and args.group not in _GROUPS:
        raise files.SchemaError(f"unknown group {args.group!r}; "
                                f"expected one of {', '.join(_GROUPS)}")
    reports = []
    for name in names:
        title, fn = _GROUPS[name]
        reports.append(Report(title, tuple(fn(args.fixtures))))
    ok = all(r.ok for r in reports)
    if args.json:
        print(json.dumps({"ok": ok, "groups": [r.to_dict() for r in reports]}, indent=2))
    else:
        for r in reports:
            for line in r.lines():
                print(line)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_json(p):
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="smtop",
        description="Exact verification of finite statistical metric spaces "
                    "and their generalized topologies.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a file and validate its invariants")
    p.add_argument("file")
    _add_json(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sphere", help="(u,v)-sphere around a point")
    p.add_argument("space"), p.add_argument("p"), p.add_argument("u"), p.add_argument("v")
    _add_json(p)
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("entourage", help="pair set {(p,q): G_pq(u) < v}")
    p.add_argument("space"), p.add_argument("u"), p.add_argument("v")
    _add_json(p)
    p.set_defaults(func=cmd_entourage)

    p = sub.add_parser("ecart-sphere", help="f-sphere of an écart")
    p.add_argument("ecart"), p.add_argument("p"), p.add_argument("f")
    _add_json(p)
    p.set_defaults(func=cmd_ecart_sphere)

    p = sub.add_parser("r-sphere", help="r-sphere {q: G_pq(u) < G_pr(u)}")
    p.add_argument("space"), p.add_argument("p"), p.add_argument("r"), p.add_argument("u")
    _add_json(p)
    p.set_defaults(func=cmd_r_sphere)

    p = sub.add_parser("family", help="neighborhood family/system derived from a file")
    p.add_argument("file")
    p.add_argument("--at", help="single point instead of the whole system")
    p.add_argument("--kind", choices=["uv", "r", "ecart"])
    p.add_argument("--bound", type=int, help="f bound for écart systems")
    _add_json(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("classify", help="N0/N1/N2 verdict of a system")
    p.add_argument("system", help="system file, or a space/écart file to derive from")
    p.add_argument("--bound", type=int)
    _add_json(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("closure", help="closure of a point set")
    p.add_argument("system"), p.add_argument("labels", nargs="*")
    _add_json(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("interior", help="interior of a point set")
    p.add_argument("system"), p.add_argument("labels", nargs="*")
    _add_json(p)
    p.set_defaults(func=cmd_interior)

    p = sub.add_parser("symmetric", help="singleton-closure symmetry check")
    p.add_argument("system")
    _add_json(p)
    p.set_defaults(func=cmd_symmetric)

    p = sub.add_parser("product", help="product of two spaces")
    p.add_argument("space1"), p.add_argument("space2")
    p.add_argument("--emit", choices=["space", "spheres", "classification"],
                   default="space")
    _add_json(p)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("target", choices=["sm", "menger", "product", "theorems"])
    p.add_argument("space1", nargs="?")
    p.add_argument("space2", nargs="?")
    p.add_argument("--tnorm", default="product",
                   help="product, min, or a path to a table file")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--types", default="V,V_alpha,V_D,Top")
    _add_json(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("paper-examples",
                       help="recompute every bundled worked example and diff")
    p.add_argument("--group", help="ex1 | ex2 | ex3 | rsphere")
    p.add_argument("--fixtures", help="directory with the bundled files "
                                      "(defaults to the packaged data)")
    _add_json(p)
    p.set_defaults(func=cmd_paper_examples)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify" and args.target in ("sm", "menger") and not args.space1:
            raise files.SchemaError(f"verify {args.target} needs a space file")
        if args.command == "verify" and args.target == "product" and not args.space2:
            raise files.SchemaError("verify product needs two space files")
        return args.func(args)
    except files.LoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
