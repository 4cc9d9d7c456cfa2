"""JSON instance and result files with exact rational coordinates.

Coordinates are written as strings ("7/3", "-2") so no value ever passes
through a float.  Serialization is canonical: sorted keys, two-space indent,
reduced fractions and a trailing newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError
from .geom import Point, Polyline, Segment, to_scalar
from .polygon import PolygonWithHoles

PROBLEMS = ("separation", "separation-polygon", "connection", "connection-polygon", "allcells")


@dataclass
class Instance:
    problem: str
    segments: list
    a: Optional[Point] = None
    b: Optional[Point] = None
    polygon: Optional[PolygonWithHoles] = None
    meta: dict = field(default_factory=dict)


def scalar_str(v: Fraction) -> str:
    return str(Fraction(v))


def point_json(p: Point) -> list:
    return [scalar_str(p.x), scalar_str(p.y)]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class _Reader:
    """Schema walker that reports the JSON path of the first bad field."""

    def __init__(self, doc):
        self.doc = doc

    def fail(self, path, msg):
        raise ParseError(msg, location=path)

    def get(self, obj, key, path, required=True):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            if required:
                self.fail(f"{path}.{key}", "missing field")
            return None
        return obj[key]

    def scalar(self, v, path) -> Fraction:
        try:
            return to_scalar(v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            self.fail(path, f"not an exact rational ({exc})")

    def point(self, v, path) -> Point:
        if not isinstance(v, list) or len(v) != 2:
            self.fail(path, "expected a pair [x, y]")
        return Point(self.scalar(v[0], f"{path}[0]"), self.scalar(v[1], f"{path}[1]"))

    def ring(self, v, path) -> tuple:
        if not isinstance(v, list):
            self.fail(path, "expected a list of points")
        return tuple(self.point(p, f"{path}[{i}]") for i, p in enumerate(v))


def parse_instance(text) -> Instance:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8 ({exc})", location=f"byte {exc.start}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, location=f"line {exc.lineno}, column {exc.colno}") from None
    rd = _Reader(doc)
    problem = rd.get(doc, "problem", "$")
    if problem not in PROBLEMS:
        rd.fail("$.problem", f"unknown problem {problem!r}")
    raw = rd.get(doc, "segments", "$")
    if not isinstance(raw, list):
        rd.fail("$.segments", "expected a list")
    segments, seen = [], set()
    for i, item in enumerate(raw):
        path = f"$.segments[{i}]"
        sid = rd.get(item, "id", path)
        if not isinstance(sid, int) or isinstance(sid, bool) or sid < 0:
            rd.fail(f"{path}.id", "expected a non-negative integer")
        if sid in seen:
            rd.fail(f"{path}.id", f"duplicate id {sid}")
        seen.add(sid)
        p = rd.point(rd.get(item, "p", path), f"{path}.p")
        q = rd.point(rd.get(item, "q", path), f"{path}.q")
        w = rd.get(item, "weight", path, required=False)
        w = Fraction(1) if w is None else rd.scalar(w, f"{path}.weight")
        if w < 0:
            rd.fail(f"{path}.weight", "negative weight")
        if p == q:
            rd.fail(path, "zero-length segment")
        segments.append(Segment(sid, p, q, w))
    a = b = None
    if "a" in doc or problem != "allcells":
        a = rd.point(rd.get(doc, "a", "$"), "$.a")
        b = rd.point(rd.get(doc, "b", "$"), "$.b")
    polygon = None
    if doc.get("polygon") is not None:
        pg = doc["polygon"]
        outer = rd.ring(rd.get(pg, "outer", "$.polygon"), "$.polygon.outer")
        holes_raw = rd.get(pg, "holes", "$.polygon", required=False) or []
        if not isinstance(holes_raw, list):
            rd.fail("$.polygon.holes", "expected a list of rings")
        holes = tuple(rd.ring(h, f"$.polygon.holes[{i}]") for i, h in enumerate(holes_raw))
        polygon = PolygonWithHoles(outer, holes)
    elif problem.endswith("-polygon"):
        rd.fail("$.polygon", "missing field")
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        rd.fail("$.meta", "expected an object")
    return Instance(problem, segments, a, b, polygon, meta)


def instance_to_json(inst: Instance) -> dict:
    doc = {
        "problem": inst.problem,
        "segments": [{"id": s.id, "p": point_json(s.p), "q": point_json(s.q),
                      "weight": scalar_str(s.weight)} for s in inst.segments],
    }
    if inst.a is not None:
        doc["a"] = point_json(inst.a)
        doc["b"] = point_json(inst.b)
    if inst.polygon is not None:
        doc["polygon"] = {"outer": [point_json(p) for p in inst.polygon.outer],
                          "holes": [[point_json(p) for p in h] for h in inst.polygon.holes]}
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def emit_instance(inst: Instance) -> str:
    return dumps(instance_to_json(inst))


def polyline_json(gamma: Optional[Polyline]):
    if gamma is None:
        return None
    return {"closed": gamma.closed, "vertices": [point_json(p) for p in gamma.vertices]}


def parse_polyline(obj, path="$.certificate") -> Optional[Polyline]:
    if obj is None:
        return None
    rd = _Reader(obj)
    closed = rd.get(obj, "closed", path)
    if not isinstance(closed, bool):
        rd.fail(f"{path}.closed", "expected a boolean")
    verts = rd.ring(rd.get(obj, "vertices", path), f"{path}.vertices")
    return Polyline(verts, closed)


def parse_result(text) -> dict:
    """Load a result file; certificate and cost come back exact."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, location=f"line {exc.lineno}, column {exc.colno}") from None
    rd = _Reader(doc)
    out = dict(doc)
    out["cost"] = rd.scalar(rd.get(doc, "cost", "$"), "$.cost")
    ids = rd.get(doc, "segments", "$")
    if not isinstance(ids, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in ids):
        rd.fail("$.segments", "expected a list of integer ids")
    out["certificate"] = parse_polyline(doc.get("certificate"))
    return out
