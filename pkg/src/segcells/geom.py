"""Exact rational geometry kernel.

All coordinates are :class:`fractions.Fraction`; nothing in this module takes
a tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple, Optional, Sequence

from .errors import DegenerateError, OverlapError


def to_scalar(value) -> Fraction:
    """Convert an int, Fraction or ``"num/den"`` string to an exact Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE") or text.lower() in ("nan", "inf"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"floating or unknown coordinate type {type(value).__name__}")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"P({fmt(self.x)}, {fmt(self.y)})"


def pt(x, y) -> Point:
    return Point(to_scalar(x), to_scalar(y))


def fmt(v: Fraction) -> str:
    return str(v)


@dataclass(frozen=True)
class Segment:
    id: int
    p: Point
    q: Point
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if self.p == self.q:
            raise DegenerateError(f"segment {self.id} has zero length")
        if self.weight < 0:
            raise ValueError(f"segment {self.id} has negative weight")

    @property
    def endpoints(self):
        return (self.p, self.q)


def seg(id, p, q, weight=1) -> Segment:
    return Segment(id, pt(*p), pt(*q), to_scalar(weight))


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def cross(o: Point, p: Point, q: Point) -> Fraction:
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x)


def orient(p: Point, q: Point, r: Point) -> Orientation:
    c = cross(p, q, r)
    if c > 0:
        return Orientation.CCW
    if c < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def on_closed_segment(r: Point, p: Point, q: Point) -> bool:
    if cross(p, q, r) != 0:
        return False
    return min(p.x, q.x) <= r.x <= max(p.x, q.x) and min(p.y, q.y) <= r.y <= max(p.y, q.y)


def intersect_closed(p1: Point, q1: Point, p2: Point, q2: Point) -> Optional[Point]:
    """Common point of closed segments p1q1 and p2q2, or None.

    Raises OverlapError when the two are collinear and share more than one
    point.
    """
    d1 = _sign(cross(p1, q1, p2))
    d2 = _sign(cross(p1, q1, q2))
    if d1 == 0 and d2 == 0:
        # collinear: compare along the dominant axis
        axis = 0 if p1.x != q1.x else 1
        a0, a1 = sorted((p1[axis], q1[axis]))
        b0, b1 = sorted((p2[axis], q2[axis]))
        lo, hi = max(a0, b0), min(a1, b1)
        if lo > hi:
            return None
        if lo < hi:
            raise OverlapError("collinear segments overlap")
        for cand in (p1, q1):
            if cand[axis] == lo:
                return cand
        raise AssertionError("unreachable")
    if d1 * d2 > 0:
        return None
    d3 = _sign(cross(p2, q2, p1))
    d4 = _sign(cross(p2, q2, q1))
    if d3 * d4 > 0:
        return None
    if d3 == 0:
        return p1
    if d4 == 0:
        return q1
    if d1 == 0:
        return p2
    if d2 == 0:
        return q2
    return line_intersection(p1, q1, p2, q2)


def line_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> Point:
    dx1, dy1 = q1.x - p1.x, q1.y - p1.y
    dx2, dy2 = q2.x - p2.x, q2.y - p2.y
    den = dx1 * dy2 - dy1 * dx2
    t = ((p2.x - p1.x) * dy2 - (p2.y - p1.y) * dx2) / den
    return Point(p1.x + t * dx1, p1.y + t * dy1)


def seg_intersect(s: Segment, t: Segment) -> Optional[Point]:
    try:
        return intersect_closed(s.p, s.q, t.p, t.q)
    except OverlapError:
        raise OverlapError(f"segments {s.id} and {t.id} overlap") from None


def properly_cross(p1: Point, q1: Point, p2: Point, q2: Point) -> bool:
    """True iff the segments meet at a single point interior to both."""
    return (_sign(cross(p1, q1, p2)) * _sign(cross(p1, q1, q2)) < 0
            and _sign(cross(p2, q2, p1)) * _sign(cross(p2, q2, q1)) < 0)


@dataclass(frozen=True)
class Polyline:
    vertices: tuple
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def edges(self):
        vs = self.vertices
        for i in range(len(vs) - 1):
            yield vs[i], vs[i + 1]
        if self.closed and len(vs) > 1:
            yield vs[-1], vs[0]

    def reversed(self) -> "Polyline":
        return Polyline(self.vertices[::-1], self.closed)

    def __len__(self):
        return len(self.vertices)


def concat(g1: Polyline, g2: Polyline) -> Polyline:
    """Join two open polylines where the first ends at the start of the second."""
    if g1.vertices[-1] != g2.vertices[0]:
        raise ValueError("polylines do not share the junction vertex")
    return Polyline(g1.vertices + g2.vertices[1:])


def _left_of_line(a: Point, b: Point, u: Point) -> bool:
    # vertices on the supporting line count as left of a->b
    return cross(a, b, u) >= 0


def edge_crossing(u: Point, v: Point, a: Point, b: Point) -> int:
    """Signed crossing of directed edge uv with segment ab (+1 left-to-right)."""
    lu = _left_of_line(a, b, u)
    lv = _left_of_line(a, b, v)
    if lu == lv:
        return 0
    # the crossing point of uv with line ab must lie strictly inside ab
    sa = _sign(cross(u, v, a))
    sb = _sign(cross(u, v, b))
    if sa * sb >= 0:
        return 0
    return 1 if lu else -1


def crossing_number(gamma: Polyline, a: Point, b: Point) -> int:
    """Oriented number of crossings of gamma with segment ab."""
    total = 0
    for u, v in gamma.edges():
        if on_closed_segment(a, u, v) or on_closed_segment(b, u, v):
            raise DegenerateError("a or b lies on the polyline")
        if u != v:
            total += edge_crossing(u, v, a, b)
    if len(gamma.vertices) == 1 and gamma.vertices[0] in (a, b):
        raise DegenerateError("a or b lies on the polyline")
    return total


def _dedup(vertices: Sequence[Point], closed: bool) -> list:
    out = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    if closed:
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
    return out


def polyline_is_simple(gamma: Polyline) -> bool:
    vs = _dedup(gamma.vertices, gamma.closed)
    if gamma.closed and len(vs) < 3:
        return False
    if len(vs) <= 1:
        return True
    edges = list(Polyline(vs, gamma.closed).edges())
    m = len(edges)
    for i in range(m):
        for j in range(i + 1, m):
            (u1, v1), (u2, v2) = edges[i], edges[j]
            if j == i + 1:
                if not _adjacent_ok(u1, v1, v2):
                    return False
            elif gamma.closed and i == 0 and j == m - 1:
                if not _adjacent_ok(u2, v2, v1):
                    return False
            else:
                try:
                    if intersect_closed(u1, v1, u2, v2) is not None:
                        return False
                except OverlapError:
                    return False
    return True


def _adjacent_ok(u: Point, v: Point, w: Point) -> bool:
    # edges uv and vw meet only at v unless they fold back onto each other
    if cross(u, v, w) != 0:
        return True
    return (u.x - v.x) * (w.x - v.x) + (u.y - v.y) * (w.y - v.y) < 0


class Location(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


def ray_parity(p: Point, edges) -> bool:
    """Even-odd parity of a rightward horizontal ray from p against edges."""
    inside = False
    for u, v in edges:
        if (u.y > p.y) != (v.y > p.y):
            x = u.x + (p.y - u.y) * (v.x - u.x) / (v.y - u.y)
            if p.x < x:
                inside = not inside
    return inside


def point_in_closed_polyline(p: Point, gamma: Polyline) -> Location:
    if not gamma.closed:
        raise ValueError("polyline must be closed")
    edges = list(gamma.edges())
    for u, v in edges:
        if on_closed_segment(p, u, v):
            raise DegenerateError("point lies on the polyline")
    return Location.INSIDE if ray_parity(p, edges) else Location.OUTSIDE


def signed_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area of a closed vertex loop (positive when CCW)."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        u, v = vertices[i], vertices[(i + 1) % n]
        total += u.x * v.y - u.y * v.x
    return total


def incidences(segments) -> dict:
    """Map each point shared by two or more segments to the ids through it."""
    out = {}
    items = list(segments)
    for i, s in enumerate(items):
        for t in items[i + 1:]:
            x = seg_intersect(s, t)
            if x is not None:
                out.setdefault(x, set()).update((s.id, t.id))
    return out


def triple_points(segments) -> list:
    """Points lying on three or more segments, sorted."""
    return sorted(p for p, ids in incidences(segments).items() if len(ids) >= 3)
