"""Loading and saving of space, écart and system files.

All files are JSON.  A space file carries exactly one of three blocks:
``entries`` (explicit distribution functions per pair), ``metric`` (a
distance table plus a kind, step or ramp), or ``ecart``.  Rationals are
strings like "3/2" or plain integers; labels are strings, or arrays for the
tuple labels of product spaces; écart ground points are integers.

Errors are split by stage so the CLI can exit distinctly: ParseError (bad
JSON or a malformed rational, exit 2), SchemaError (wrong shape, exit 3),
ValidationError (well-formed but semantically invalid, exit 4).
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any

from . import distfn
from .gtop import NeighborhoodSystem, make_system
from .neighborhood import (Ecart, ExplicitPoset, FiniteEcart, MarkedNatEcart,
                           NaturalsPoset)
from .smspace import SMSpace, build, from_metric


class LoadError(Exception):
    exit_code = 1


class ParseError(LoadError):
    exit_code = 2


class SchemaError(LoadError):
    exit_code = 3


class ValidationError(LoadError):
    exit_code = 4


def _rat(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{where}: expected a rational string or integer, got {value!r}")
    try:
        return distfn.as_fraction(value)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _label(value: Any, where: str):
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return tuple(_label(v, where) for v in value)
    raise SchemaError(f"{where}: labels must be strings (or arrays for pair labels), "
                      f"got {value!r}")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    return obj[key]


def fn_from_dict(obj: Any, where: str) -> distfn.DistFn:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: function must be an object")
    kind = _require(obj, "kind", where)
    if kind == "one":
        return distfn.one()
    if kind == "step":
        a = _rat(_require(obj, "a", where), where)
        try:
            return distfn.step(a)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    if kind == "ramp":
        d = _rat(_require(obj, "d", where), where)
        try:
            return distfn.ramp(d)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    if kind == "pieces":
        pieces = _require(obj, "pieces", where)
        if not isinstance(pieces, list) or not pieces:
            raise SchemaError(f"{where}: pieces must be a non-empty list")
        breaks = []
        polys = []
        prev_to: Fraction | None = None
        for i, rec in enumerate(pieces):
            here = f"{where}, piece {i}"
            if not isinstance(rec, dict):
                raise SchemaError(f"{here}: must be an object")
            lo = _rat(_require(rec, "from", here), here)
            to = _require(rec, "to", here)
            coeffs = _require(rec, "poly", here)
            if not isinstance(coeffs, list) or not coeffs:
                raise SchemaError(f"{here}: poly must be a list of coefficients")
            if i == 0 and lo != 0:
                raise SchemaError(f"{here}: first piece must start at 0")
            if i > 0 and lo != prev_to:
                raise SchemaError(f"{here}: starts at {lo}, previous piece ended at {prev_to}")
            if to is None:
                if i != len(pieces) - 1:
                    raise SchemaError(f"{here}: only the last piece may be unbounded")
                prev_to = None
            else:
                prev_to = _rat(to, here)
            breaks.append(lo)
            polys.append([_rat(c, here) for c in coeffs])
        if pieces[-1].get("to") is not None:
            raise SchemaError(f"{where}: last piece must have to = null")
        try:
            return distfn.piecewise(breaks, polys)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: unknown function kind {kind!r}")


def fn_to_dict(f: distfn.DistFn) -> dict:
    return {"kind": "pieces", "pieces": distfn.to_records(f)}


def poset_from_dict(obj: Any, where: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: poset must be an object")
    kind = _require(obj, "kind", where)
    if kind == "naturals":
        return NaturalsPoset()
    if kind == "explicit":
        elements = _require(obj, "elements", where)
        less = _require(obj, "less", where)
        zero = _require(obj, "zero", where)
        if not isinstance(elements, list) or not isinstance(less, list):
            raise SchemaError(f"{where}: elements and less must be lists")
        try:
            return ExplicitPoset(tuple(elements),
                                 frozenset((a, b) for a, b in less), zero)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: unknown poset kind {kind!r}")


def _ecart_from_dict(obj: dict, where: str) -> Ecart:
    ground = _require(obj, "ground", where)
    poset = poset_from_dict(obj.get("poset", {"kind": "naturals"}), f"{where}.poset")
    table_rows = _require(obj, "table", where)
    if not isinstance(table_rows, list):
        raise SchemaError(f"{where}: table must be a list")

    if ground == "naturals":
        marked = _require(obj, "marked", where)
        defaults = _require(obj, "defaults", where)
        if not isinstance(marked, list) or not all(isinstance(x, int) for x in marked):
            raise SchemaError(f"{where}: marked must be a list of integers")
        if not isinstance(defaults, dict):
            raise SchemaError(f"{where}: defaults must be an object")
        table = []
        for i, row in enumerate(table_rows):
            here = f"{where}.table[{i}]"
            if not isinstance(row, dict):
                raise SchemaError(f"{here}: must be an object")
            p = _require(row, "p", here)
            q = _require(row, "q", here)
            v = _require(row, "value", here)
            table.append(((p, q), v))
        try:
            return MarkedNatEcart(frozenset(marked), tuple(table),
                                  _require(defaults, "mixed", f"{where}.defaults"),
                                  _require(defaults, "outside", f"{where}.defaults"),
                                  poset)
        except (TypeError, ValueError, KeyError) as exc:
            raise ValidationError(f"{where}: {exc}") from exc

    if ground == "finite":
        points = [_label(p, f"{where}.points") for p in _require(obj, "points", where)]
        table = []
        for i, row in enumerate(table_rows):
            here = f"{where}.table[{i}]"
            p = _label(_require(row, "p", here), here)
            q = _label(_require(row, "q", here), here)
            table.append(((p, q), _require(row, "value", here)))
        try:
            return FiniteEcart(tuple(points), tuple(table), poset)
        except (TypeError, ValueError, KeyError) as exc:
            raise ValidationError(f"{where}: {exc}") from exc

    raise SchemaError(f"{where}: unknown ground {ground!r}")


def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def load(path: str):
    """Load a space or écart file; returns SMSpace or an écart object."""
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    blocks = [k for k in ("entries", "metric", "ecart") if k in doc]
    if len(blocks) != 1:
        raise SchemaError(f"{path}: exactly one of entries/metric/ecart required, "
                          f"found {blocks or 'none'}")

    if blocks[0] == "ecart":
        return _ecart_from_dict(doc["ecart"], f"{path}: ecart")

    points = [_label(p, f"{path}: points") for p in _require(doc, "points", path)]

    if blocks[0] == "entries":
        entries = {}
        rows = doc["entries"]
        if not isinstance(rows, list):
            raise SchemaError(f"{path}: entries must be a list")
        for i, row in enumerate(rows):
            here = f"{path}: entries[{i}]"
            if not isinstance(row, dict):
                raise SchemaError(f"{here}: must be an object")
            p = _label(_require(row, "p", here), here)
            q = _label(_require(row, "q", here), here)
            entries[p, q] = fn_from_dict(_require(row, "fn", here), here)
        try:
            return build(points, entries)
        except ValueError as exc:
            raise ValidationError(f"{path}: {exc}") from exc

    metric = doc["metric"]
    if not isinstance(metric, dict):
        raise SchemaError(f"{path}: metric must be an object")
    kind = _require(metric, "kind", f"{path}: metric")
    rows = _require(metric, "distances", f"{path}: metric")
    table = {}
    for i, row in enumerate(rows):
        here = f"{path}: metric.distances[{i}]"
        p = _label(_require(row, "p", here), here)
        q = _label(_require(row, "q", here), here)
        table[p, q] = _rat(_require(row, "d", here), here)
    try:
        return from_metric(points, table, kind=kind)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def load_space(path: str) -> SMSpace:
    obj = load(path)
    if not isinstance(obj, SMSpace):
        raise SchemaError(f"{path}: expected a space file, found an écart")
    return obj


def load_ecart(path: str) -> Ecart:
    obj = load(path)
    if isinstance(obj, SMSpace):
        raise SchemaError(f"{path}: expected an écart file, found a space")
    return obj


def load_system(path: str) -> NeighborhoodSystem:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    points = [_label(p, f"{path}: points") for p in _require(doc, "points", path)]
    fams = _require(doc, "families", path)
    if not isinstance(fams, list) or len(fams) != len(points):
        raise SchemaError(f"{path}: families must be a list aligned with points")
    mapping = {}
    for p, fam in zip(points, fams):
        if not isinstance(fam, list):
            raise SchemaError(f"{path}: family of {p!r} must be a list of sets")
        mapping[p] = [frozenset(_label(x, f"{path}: families") for x in member)
                      for member in fam]
    try:
        return make_system(points, mapping)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------

def _label_out(p):
    if isinstance(p, tuple):
        return [_label_out(x) for x in p]
    return p


def space_to_dict(s: SMSpace) -> dict:
    return {
        "schema": 1,
        "points": [_label_out(p) for p in s.points],
        "entries": [
            {"p": _label_out(p), "q": _label_out(q), "fn": fn_to_dict(s.dist(p, q))}
            for p, q in s.pairs()
        ],
    }


def system_to_dict(sys: NeighborhoodSystem) -> dict:
    if not sys.is_explicit():
        raise ValueError("only explicit systems can be written to system files")
    index = {p: i for i, p in enumerate(sys.points)}
    return {
        "schema": 1,
        "points": [_label_out(p) for p in sys.points],
        "families": [
            [sorted((_label_out(x) for x in member), key=lambda v: index[_label_in(v)])
             for member in fam]
            for fam in sys.families
        ],
    }


def _label_in(v):
    if isinstance(v, list):
        return tuple(_label_in(x) for x in v)
    return v
