"""Offline checks of solver certificates against their instance."""

from __future__ import annotations

from fractions import Fraction

from . import arrangement
from .errors import DegenerateError, VerificationError
from .geom import (Polyline, crossing_number, on_closed_segment, point_in_closed_polyline,
                   polyline_is_simple)


def _fail(msg):
    raise VerificationError(msg)


def _on_some(u, v, segs) -> bool:
    return any(on_closed_segment(u, s.p, s.q) and on_closed_segment(v, s.p, s.q) for s in segs)


def check_separation(inst, ids, cost, cert: Polyline, polygon_mode=False):
    by_id = {s.id: s for s in inst.segments}
    for i in ids:
        if i not in by_id:
            _fail(f"unknown segment id {i}")
    chosen = [by_id[i] for i in ids]
    if polygon_mode:
        if cost != len(ids):
            _fail(f"cost {cost} differs from the number of chosen segments {len(ids)}")
        carriers = chosen + inst.polygon.boundary_segments()
    else:
        total = sum((s.weight for s in chosen), Fraction(0))
        if cost != total:
            _fail(f"cost {cost} differs from the chosen weight {total}")
        carriers = chosen
    if cert is None or not cert.closed:
        _fail("separation certificate must be a closed polyline")
    for u, v in cert.edges():
        if not _on_some(u, v, carriers):
            _fail(f"certificate edge {u}-{v} does not lie on a chosen segment")
    if len(cert.vertices) == 1 and not _on_some(cert.vertices[0], cert.vertices[0], carriers):
        _fail("certificate vertex is off the chosen segments")
    if not polyline_is_simple(cert):
        _fail("certificate is not simple")
    try:
        n_val = crossing_number(cert, inst.a, inst.b)
        sides = {point_in_closed_polyline(inst.a, cert), point_in_closed_polyline(inst.b, cert)}
    except DegenerateError as exc:
        _fail(f"certificate passes through a or b ({exc})")
    if abs(n_val) != 1:
        _fail(f"certificate crosses ab {n_val} times (signed)")
    if len(sides) != 2:
        _fail("a and b are on the same side of the certificate")


def check_connection(inst, ids, cost, cert: Polyline, polygon=None):
    by_id = {s.id: s for s in inst.segments}
    for i in ids:
        if i not in by_id:
            _fail(f"unknown segment id {i}")
    if cost != len(ids):
        _fail(f"cost {cost} differs from the number of chosen segments {len(ids)}")
    if cert is None or cert.closed or not cert.vertices:
        _fail("connection certificate must be an open polyline")
    if cert.vertices[0] != inst.a or cert.vertices[-1] != inst.b:
        _fail("certificate does not run from a to b")
    touched = set(arrangement.polyline_avoids(cert, inst.segments))
    if touched != set(ids):
        _fail(f"certificate meets segments {sorted(touched)}, claimed {sorted(ids)}")
    if polygon is not None:
        if arrangement.polyline_avoids(cert, polygon.boundary_segments()):
            _fail("certificate touches the polygon boundary")
        if not polygon.contains(inst.a, strict=True):
            _fail("a is outside the polygon")


def check_all_cells(inst, ids, cost):
    by_id = {s.id: s for s in inst.segments}
    for i in ids:
        if i not in by_id:
            _fail(f"unknown segment id {i}")
    if cost != len(ids):
        _fail(f"cost {cost} differs from the number of removed segments {len(ids)}")
    kept = [s for s in inst.segments if s.id not in set(ids)]
    faces = arrangement.face_count(arrangement.build(kept))
    if faces != 1:
        _fail(f"{faces} faces remain after removal")


def verify_result(inst, result: dict):
    """Raise VerificationError unless the result's certificate holds."""
    ids = list(result["segments"])
    if len(set(ids)) != len(ids):
        _fail("duplicate segment ids in the result")
    cost, cert = result["cost"], result["certificate"]
    problem = result.get("problem")
    if problem == "separation":
        check_separation(inst, ids, cost, cert)
    elif problem == "separation-polygon":
        check_separation(inst, ids, cost, cert, polygon_mode=True)
    elif problem == "connection":
        check_connection(inst, ids, cost, cert)
    elif problem == "connection-polygon":
        check_connection(inst, ids, cost, cert, inst.polygon)
    elif problem == "allcells":
        check_all_cells(inst, ids, cost)
    else:
        _fail(f"unknown problem {problem!r}")
