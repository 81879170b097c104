"""Catalogue of worked examples stored as JSON documents.

Each document is one entry.  ``parse`` and ``serialize`` round-trip a
document bit-identically; ``load`` resolves ``extends`` and checks every
section against a fixed set of keys.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Optional

from ..arrangement import (
    Arrangement,
    BlowupPoint,
    CanonicalClass,
    CrossingPoint,
    Curve,
    as_int,
    as_rat,
    blowup,
)
from ..bmy import WeightAssignment, parse_weight
from ..dm import DMWeights
from ..errors import InputError
from ..fpgroup import Presentation
from ..quotient import ActionOnArrangement
from ..torus import EISENSTEIN, GAUSSIAN, AbelianCurve, AffineAuto, QuadraticRing, TorusPoint

DATA_DIR = Path(__file__).parent / "data"

KINDS = ("pair", "signature", "presentations", "dm", "torus")

TOP_KEYS = {
    "id", "kind", "description", "extends", "surface", "curves", "intersections",
    "crossings", "blowups", "weights", "default_weights", "expected", "actions",
    "torus", "notes", "metadata", "groups", "subgroups", "records", "automorphisms",
    "sublattices",
}
SURFACE_KEYS = {"euler", "canonical"}
CANONICAL_KEYS = {"combination", "pairings", "square"}
CURVE_KEYS = {"name", "genus", "self_int", "orbifold_candidate"}
INTERSECTION_KEYS = {"curves", "count"}
CROSSING_KEYS = {"name", "curves"}
BLOWUP_KEYS = {"name", "at", "curves"}
EXPECTED_KEYS = {"value", "origin", "oracle"}
ORIGINS = {"reported", "derived", "trivial"}
ACTION_KEYS = {
    "description", "group_order", "curves", "extra_curves", "generators", "branch",
    "quotient", "torus_generators", "torus_curves", "notes",
}
QUOTIENT_KEYS = {"entry", "cover_weights", "weights", "image", "e_orb"}
TORUS_KEYS = {"ring", "curves", "points"}
TORUS_CURVE_KEYS = {"graph", "vertical", "direction", "offset"}
AUTO_KEYS = {"ring", "blocks", "matrix", "translation", "sublattice", "description"}
GROUP_KEYS = {"generators", "triangle", "names", "relators", "description"}
SUBGROUP_KEYS = {"group", "words", "expected", "search", "discrepancy", "elliptic", "description"}
RECORD_KEYS = {"numerators", "denominator", "arithmetic", "int_class", "signature", "note"}


# ---------------------------------------------------------------- document format

def parse(text: str, source: str = "<document>") -> dict:
    """Parse a document.  Errors carry line and column."""
    try:
        data = json.loads(text, parse_float=_no_float, parse_constant=_no_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except _FloatFound as exc:
        line, col = _float_position(text)
        raise InputError(f"{source}:{line}:{col}: floating point number {exc.args[0]} is not accepted; "
                         "write rationals as \"p/q\"") from None
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be an object")
    return data


class _FloatFound(Exception):
    pass


def _no_float(literal: str):
    raise _FloatFound(literal)


_NUMBER = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?|NaN|-?Infinity')


def _float_position(text: str) -> tuple:
    """1-based line and column of the first non-integer number outside strings."""
    for m in _NUMBER.finditer(text):
        tok = m.group()
        if tok.startswith('"') or tok.lstrip("-").isdigit():
            continue
        line = text.count("\n", 0, m.start()) + 1
        return line, m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return 1, 1


def _is_scalar(x: Any) -> bool:
    return not isinstance(x, (dict, list))


def serialize(data: Any, indent: int = 0) -> str:
    """Deterministic pretty printer: objects one key per line, scalar lists inline."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {serialize(v, indent + 1)}" for k, v in data.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(data, list):
        if all(_is_scalar(x) for x in data):
            return "[" + ", ".join(json.dumps(x, ensure_ascii=False) for x in data) + "]"
        items = [inner + serialize(x, indent + 1) for x in data]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(data, ensure_ascii=False)


def dumps(data: dict) -> str:
    return serialize(data) + "\n"


# ---------------------------------------------------------------- helpers

def _check_keys(obj: Any, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise InputError(f"{where}: unknown key(s) {sorted(extra)}")
    return obj


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise InputError(f"{where}: missing {key!r}")
    return obj[key]


def _ring(name: str) -> QuadraticRing:
    if name == "gaussian":
        return GAUSSIAN
    if name == "eisenstein":
        return EISENSTEIN
    raise InputError(f"unknown ring {name!r}")


def _elem(x, where: str) -> tuple:
    if not (isinstance(x, list) and len(x) == 2):
        raise InputError(f"{where}: ring element must be a pair of integers")
    return (as_int(x[0], where), as_int(x[1], where))


def _point(xs, where: str) -> tuple:
    if not isinstance(xs, list):
        raise InputError(f"{where}: expected a list of rationals")
    return tuple(as_rat(x) for x in xs)


def parse_torus_curve(ring: QuadraticRing, spec: dict, where: str) -> AbelianCurve:
    _check_keys(spec, TORUS_CURVE_KEYS, where)
    offset = _point(spec.get("offset", [0, 0]), where)
    if "graph" in spec:
        return AbelianCurve.graph(ring, _elem(spec["graph"], where), offset)
    if "vertical" in spec:
        return AbelianCurve.vertical(ring, _point(spec["vertical"], where))
    if "direction" in spec:
        a, b = spec["direction"]
        return AbelianCurve.through(ring, _elem(a, where), _elem(b, where), TorusPoint(offset))
    raise InputError(f"{where}: curve needs graph, vertical or direction")


def parse_auto(spec: dict, where: str, sublattices: Optional[dict] = None) -> AffineAuto:
    _check_keys(spec, AUTO_KEYS, where)
    if "blocks" in spec:
        ring = _ring(_require(spec, "ring", where))
        blocks = [[_elem(x, where) for x in row] for row in spec["blocks"]]
        t = _point(spec.get("translation", [0] * (2 * len(blocks))), where)
        f = AffineAuto.linear(ring, blocks, t)
    elif "matrix" in spec:
        M = tuple(tuple(as_int(v, where) for v in row) for row in spec["matrix"])
        t = _point(spec.get("translation", [0] * len(M)), where)
        f = AffineAuto(M, TorusPoint(t))
    else:
        raise InputError(f"{where}: automorphism needs blocks or matrix")
    if "sublattice" in spec:
        name = spec["sublattice"]
        if not sublattices or name not in sublattices:
            raise InputError(f"{where}: unknown sublattice {name!r}")
        f = f.conjugate_by_basis(sublattices[name], lift=t)
    return f


# ---------------------------------------------------------------- entries

@dataclass(frozen=True)
class Expected:
    value: Any
    origin: str
    oracle: Optional[str] = None


def _expected(obj: Any, where: str) -> Expected:
    _check_keys(obj, EXPECTED_KEYS, where)
    origin = _require(obj, "origin", where)
    if origin not in ORIGINS:
        raise InputError(f"{where}: origin must be one of {sorted(ORIGINS)}")
    if origin == "derived" and "oracle" not in obj:
        raise InputError(f"{where}: derived values must name their oracle")
    return Expected(_require(obj, "value", where), origin, obj.get("oracle"))


@dataclass
class CatalogEntry:
    id: str
    data: dict
    catalog_dir: Path = DATA_DIR

    @property
    def kind(self) -> str:
        return self.data["kind"]

    @property
    def description(self) -> str:
        return self.data.get("description", "")

    # --- arrangement entries

    @cached_property
    def base_arrangement(self) -> Arrangement:
        d = self.data
        where = self.id
        surface = _check_keys(_require(d, "surface", where), SURFACE_KEYS, f"{where}.surface")
        curves = []
        for n, c in enumerate(_require(d, "curves", where)):
            w = f"{where}.curves[{n}]"
            _check_keys(c, CURVE_KEYS, w)
            curves.append(Curve(
                _require(c, "name", w),
                as_int(_require(c, "genus", w), f"{w}.genus"),
                as_rat(_require(c, "self_int", w)),
                bool(c.get("orbifold_candidate", True)),
            ))
        names = {c.name: n for n, c in enumerate(curves)}

        def idx(name, w):
            if name not in names:
                raise InputError(f"{w}: unknown curve {name!r}")
            return names[name]

        inter = {}
        for n, rec in enumerate(d.get("intersections", [])):
            w = f"{where}.intersections[{n}]"
            _check_keys(rec, INTERSECTION_KEYS, w)
            a, b = _require(rec, "curves", w)
            key = (idx(a, w), idx(b, w))
            if key in inter or key[::-1] in inter:
                raise InputError(f"{w}: intersection {a}.{b} listed twice")
            inter[key] = as_int(_require(rec, "count", w), f"{w}.count")
        crossings = []
        for n, rec in enumerate(d.get("crossings", [])):
            w = f"{where}.crossings[{n}]"
            _check_keys(rec, CROSSING_KEYS, w)
            inc = [idx(c, w) for c in _require(rec, "curves", w)]
            if len(set(inc)) != len(inc):
                raise InputError(f"{w}: repeated curve in crossing")
            crossings.append(CrossingPoint(_require(rec, "name", w), frozenset(inc)))
        can = _check_keys(_require(surface, "canonical", f"{where}.surface"), CANONICAL_KEYS,
                          f"{where}.surface.canonical")
        if "combination" in can:
            if set(can) != {"combination"}:
                raise InputError(f"{where}.surface.canonical: combination excludes pairings/square")
            combo = {idx(k, f"{where}.surface.canonical"): as_rat(v) for k, v in can["combination"].items()}
            canonical = CanonicalClass.from_combination(combo)
        else:
            pairings = _require(can, "pairings", f"{where}.surface.canonical")
            missing = set(names) - set(pairings)
            if missing or set(pairings) - set(names):
                raise InputError(f"{where}.surface.canonical: pairings must list exactly the curves")
            canonical = CanonicalClass.from_pairings(
                [as_rat(pairings[c.name]) for c in curves],
                as_rat(_require(can, "square", f"{where}.surface.canonical")),
            )
        return Arrangement(tuple(curves), inter, tuple(crossings), canonical,
                           as_int(_require(surface, "euler", f"{where}.surface"), "euler"))

    @cached_property
    def arrangement(self) -> Arrangement:
        arr = self.base_arrangement
        pts = []
        for n, rec in enumerate(self.data.get("blowups", [])):
            w = f"{self.id}.blowups[{n}]"
            _check_keys(rec, BLOWUP_KEYS, w)
            if ("at" in rec) == ("curves" in rec):
                raise InputError(f"{w}: give exactly one of 'at' or 'curves'")
            pts.append(BlowupPoint(_require(rec, "name", w), tuple(rec.get("curves", ())), rec.get("at")))
        return blowup(arr, pts) if pts else arr

    @property
    def weight_names(self) -> list:
        return list(self.data.get("weights", {}))

    @property
    def default_weights(self) -> str:
        names = self.weight_names
        dflt = self.data.get("default_weights", names[0] if names else None)
        if dflt is None:
            raise InputError(f"{self.id}: no weights")
        return dflt

    def raw_weights(self, name: Optional[str] = None) -> dict:
        name = name or self.default_weights
        ws = self.data.get("weights", {})
        if name not in ws:
            raise InputError(f"{self.id}: no weight set {name!r} (have {sorted(ws)})")
        return {k: parse_weight(v) for k, v in ws[name].items()}

    def weights(self, name: Optional[str] = None) -> WeightAssignment:
        if self.kind != "pair":
            raise InputError(f"{self.id}: weights as an assignment need an arrangement")
        return WeightAssignment.by_name(self.arrangement, self.raw_weights(name))

    def expected(self, name: Optional[str] = None) -> dict:
        name = name or self.default_weights
        block = self.data.get("expected", {}).get(name, {})
        out = {}
        for k, v in block.items():
            if k == "pairings":
                out[k] = {c: _expected(e, f"{self.id}.expected.{name}.pairings.{c}") for c, e in v.items()}
            else:
                out[k] = _expected(v, f"{self.id}.expected.{name}.{k}")
        return out

    # --- actions

    @property
    def action_names(self) -> list:
        return list(self.data.get("actions", {}))

    def action_data(self, name: str) -> dict:
        acts = self.data.get("actions", {})
        if name not in acts:
            raise InputError(f"{self.id}: no action {name!r} (have {sorted(acts)})")
        return _check_keys(acts[name], ACTION_KEYS, f"{self.id}.actions.{name}")

    def action(self, name: str) -> ActionOnArrangement:
        a = self.action_data(name)
        w = f"{self.id}.actions.{name}"
        known = set(self.arrangement.names) if self.kind == "pair" else set()
        curves = list(_require(a, "curves", w))
        for c in curves:
            if known and c not in known:
                raise InputError(f"{w}: {c!r} is not an arrangement curve (list it under extra_curves)")
        curves += list(a.get("extra_curves", []))
        return ActionOnArrangement(
            as_int(_require(a, "group_order", w), f"{w}.group_order"),
            tuple(curves),
            {g: dict(m) for g, m in _require(a, "generators", w).items()},
            {c: as_int(b, f"{w}.branch") for c, b in a.get("branch", {}).items()},
        )

    # --- torus model

    @cached_property
    def torus_ring(self) -> QuadraticRing:
        t = _check_keys(_require(self.data, "torus", self.id), TORUS_KEYS, f"{self.id}.torus")
        return _ring(_require(t, "ring", f"{self.id}.torus"))

    @cached_property
    def torus_curves(self) -> dict:
        ring = self.torus_ring
        return {
            name: parse_torus_curve(ring, spec, f"{self.id}.torus.curves.{name}")
            for name, spec in self.data["torus"].get("curves", {}).items()
        }

    @cached_property
    def torus_points(self) -> dict:
        return {
            name: TorusPoint(_point(xs, f"{self.id}.torus.points.{name}"))
            for name, xs in self.data["torus"].get("points", {}).items()
        }

    def torus_action(self, name: str) -> tuple:
        """(generators, extra curves) of an action given in torus coordinates."""
        a = self.action_data(name)
        w = f"{self.id}.actions.{name}"
        gens = {g: parse_auto(spec, f"{w}.torus_generators.{g}")
                for g, spec in _require(a, "torus_generators", w).items()}
        extra = {c: parse_torus_curve(self.torus_ring, spec, f"{w}.torus_curves.{c}")
                 for c, spec in a.get("torus_curves", {}).items()}
        return gens, extra

    # --- signature entries

    def declared_e_orb(self, name: Optional[str] = None) -> Expected:
        return self.expected(name)["e_orb"]

    # --- presentations

    def presentation(self, name: str) -> Presentation:
        groups = self.data.get("groups", {})
        if name not in groups:
            raise InputError(f"{self.id}: no group {name!r}")
        g = _check_keys(groups[name], GROUP_KEYS, f"{self.id}.groups.{name}")
        if "triangle" in g:
            p, q, r = g["triangle"]
            return Presentation.triangle(p, q, r, g.get("names", "ab"))
        return Presentation(tuple(g["generators"]), tuple(g["relators"]))

    def subgroup(self, name: str) -> dict:
        subs = self.data.get("subgroups", {})
        if name not in subs:
            raise InputError(f"{self.id}: no subgroup {name!r} (have {sorted(subs)})")
        return _check_keys(subs[name], SUBGROUP_KEYS, f"{self.id}.subgroups.{name}")

    # --- dm records

    def dm_records(self) -> list:
        out = []
        for n, r in enumerate(self.data.get("records", [])):
            w = f"{self.id}.records[{n}]"
            _check_keys(r, RECORD_KEYS, w)
            sig = r.get("signature")
            if sig is not None:
                sig = (
                    as_int(sig["curves"], w),
                    tuple(parse_weight(x) for x in sig["weights"]),
                    as_rat(sig["e_orb"]),
                )
            out.append(DMWeights(tuple(r["numerators"]), r["denominator"],
                                 r.get("arithmetic", "unknown"), r.get("note", ""), sig))
        return out

    # --- torus group entries

    @cached_property
    def sublattices(self) -> dict:
        from ..torus import sublattice_basis
        out = {}
        for name, spec in self.data.get("sublattices", {}).items():
            ring = _ring(spec["ring"])
            out[name] = sublattice_basis(ring, [_elem(x, name) for x in spec["factors"]])
        return out

    def automorphism(self, name: str) -> AffineAuto:
        autos = self.data.get("automorphisms", {})
        if name not in autos:
            raise InputError(f"{self.id}: no automorphism {name!r}")
        return parse_auto(autos[name], f"{self.id}.automorphisms.{name}", self.sublattices)

    @property
    def automorphism_names(self) -> list:
        return list(self.data.get("automorphisms", {}))


def _merge(base: dict, child: dict) -> dict:
    out = dict(base)
    for k, v in child.items():
        if k == "extends":
            continue
        if k in ("weights", "expected", "actions") and isinstance(v, dict):
            merged = dict(out.get(k, {}))
            merged.update(v)
            out[k] = merged
        else:
            out[k] = v
    return out


def _read(id_: str, catalog_dir: Path) -> dict:
    path = catalog_dir / f"{id_}.json"
    if not path.is_file():
        raise InputError(f"no catalogue entry {id_!r}")
    return parse(path.read_text(encoding="utf-8"), str(path))


def validate_document(data: dict, where: str) -> None:
    _check_keys(data, TOP_KEYS, where)
    kind = data.get("kind")
    if kind not in KINDS:
        raise InputError(f"{where}: kind must be one of {KINDS}")


def resolve(data: dict, where: str, catalog_dir: Path = DATA_DIR, _seen: tuple = ()) -> dict:
    validate_document(data, where)
    if "extends" in data:
        parent = data["extends"]
        if parent in _seen:
            raise InputError(f"{where}: circular extends")
        base = resolve(_read(parent, catalog_dir), parent, catalog_dir, _seen + (parent,))
        data = _merge(base, data)
    return data


def load(id_: str, catalog_dir: Optional[Path] = None) -> CatalogEntry:
    catalog_dir = Path(catalog_dir) if catalog_dir else DATA_DIR
    data = resolve(_read(id_, catalog_dir), id_, catalog_dir, (id_,))
    if data.get("id") != id_:
        raise InputError(f"{id_}: document id {data.get('id')!r} does not match the file name")
    entry = CatalogEntry(id_, data, catalog_dir)
    check(entry)
    return entry


def load_path(path: Path, catalog_dir: Optional[Path] = None) -> CatalogEntry:
    path = Path(path)
    catalog_dir = Path(catalog_dir) if catalog_dir else DATA_DIR
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    raw = parse(text, str(path))
    data = resolve(raw, str(path), catalog_dir)
    entry = CatalogEntry(data.get("id", path.stem), data, catalog_dir)
    check(entry)
    return entry


def check(entry: CatalogEntry) -> None:
    """Eagerly build the parts of an entry so invariant violations surface at load."""
    if entry.kind == "pair":
        arr = entry.arrangement
        for name in entry.weight_names:
            entry.weights(name)
            entry.expected(name)
        for name in entry.action_names:
            entry.action(name)
    elif entry.kind == "signature":
        for name in entry.weight_names:
            entry.raw_weights(name)
            entry.expected(name)
    elif entry.kind == "dm":
        entry.dm_records()
    elif entry.kind == "torus":
        for name in entry.automorphism_names:
            entry.automorphism(name)


def list_ids(catalog_dir: Optional[Path] = None) -> list:
    catalog_dir = Path(catalog_dir) if catalog_dir else DATA_DIR
    return sorted(p.stem for p in catalog_dir.glob("*.json"))
